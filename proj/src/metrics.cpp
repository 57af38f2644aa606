#include "coopgeo/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace coopgeo {

double proportion_ci95(double p, long long n) {
    if (n <= 0) return 0.0;
    return 1.96 * std::sqrt(p * (1.0 - p) / double(n));
}

namespace {

const char* kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::RelayOrdering: return "relay_ordering";
        case ScenarioKind::PerVsDensity: return "per_vs_density";
        case ScenarioKind::TmaxSweep: return "tmax_sweep";
        case ScenarioKind::ThroughputVsConstellation:
            return "throughput_vs_constellation";
        case ScenarioKind::Custom: return "custom";
    }
    return "custom";
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::vector<std::string> scenario_header(const Scenario& s) {
    std::vector<std::string> h;
    h.push_back(std::string("kind = ") + kind_name(s.kind));
    h.push_back("neighbors = " + std::to_string(s.neighbors));
    h.push_back("snr_db_min = " + num(s.snr_db_min));
    h.push_back("snr_db_max = " + num(s.snr_db_max));
    h.push_back("snr_db_step = " + num(s.snr_db_step));
    h.push_back("tmax_us = " + num(s.tmax_us));
    h.push_back("nsa = " + std::to_string(s.nsa));
    h.push_back("qam_m = " + std::to_string(s.qam_m));
    h.push_back("trials = " + std::to_string(s.trials));
    h.push_back("trials_per_topology = " + std::to_string(s.trials_per_topology));
    h.push_back("seed = " + std::to_string(s.seed));
    return h;
}

void append_protocol_metrics(const RunResult& r, double x,
                             const std::string& suffix, double symbol_rate,
                             MetricsRecord* rec) {
    long long attempts = 0, delivered = 0;
    long long rounds = 0, collided_rounds = 0;
    long long hop_attempts = 0, residual = 0;
    double bits = 0.0, elapsed = 0.0;
    for (const TrialRecord& t : r.trials) {
        ++attempts;
        if (t.delivered) ++delivered;
        rounds += t.contention_rounds;
        collided_rounds += t.collided_rounds;
        hop_attempts += t.hop_attempts;
        residual += t.residual_hop_errors;
        bits += t.bits_delivered;
        elapsed += t.elapsed;
    }
    if (attempts == 0) return;

    const double per = double(attempts - delivered) / double(attempts);
    rec->rows.push_back({x, "per" + suffix, per, proportion_ci95(per, attempts)});

    const double txe =
        hop_attempts > 0 ? double(residual) / double(hop_attempts) : 0.0;
    rec->rows.push_back(
        {x, "tx_error_prob" + suffix, txe, proportion_ci95(txe, hop_attempts)});

    const double col =
        rounds > 0 ? double(collided_rounds) / double(rounds) : 0.0;
    rec->rows.push_back(
        {x, "collision_prob" + suffix, col, proportion_ci95(col, rounds)});

    const int bits_per_symbol =
        static_cast<int>(std::lround(std::log2(double(r.scenario.qam_m))));
    const double capacity = symbol_rate * bits_per_symbol * elapsed;
    const double tput = capacity > 0 ? bits / capacity : 0.0;
    rec->rows.push_back({x, "norm_throughput" + suffix, tput, 0.0});
}

void append_ser_metrics(const RunResult& r, MetricsRecord* rec) {
    for (const SerPoint& p : r.ser) {
        const double ser =
            p.symbols > 0 ? double(p.errors) / double(p.symbols) : 0.0;
        rec->rows.push_back({p.snr_db, "ser_" + p.arm, ser,
                             proportion_ci95(ser, p.symbols)});
    }
}

std::string to_csv(const MetricsRecord& rec) {
    std::string out;
    for (const std::string& h : rec.header) {
        out += "# ";
        out += h;
        out += "\n";
    }
    out += "x,metric,value,ci95\n";
    for (const MetricRow& row : rec.rows) {
        out += num(row.x);
        out += ",";
        out += row.metric;
        out += ",";
        out += num(row.value);
        out += ",";
        out += num(row.ci95);
        out += "\n";
    }
    return out;
}

}  // namespace coopgeo
