#include "coopgeo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coopgeo/relaysel.hpp"

namespace coopgeo {

std::vector<double> Scenario::snr_grid() const {
    std::vector<double> g;
    for (double v = snr_db_min; v <= snr_db_max + 1e-9; v += snr_db_step) {
        g.push_back(v);
        if (snr_db_step <= 0) break;
    }
    return g;
}

namespace {

bool parse_kind(const std::string& v, ScenarioKind* out) {
    if (v == "relay_ordering") *out = ScenarioKind::RelayOrdering;
    else if (v == "per_vs_density") *out = ScenarioKind::PerVsDensity;
    else if (v == "tmax_sweep") *out = ScenarioKind::TmaxSweep;
    else if (v == "throughput_vs_constellation")
        *out = ScenarioKind::ThroughputVsConstellation;
    else if (v == "custom") *out = ScenarioKind::Custom;
    else return false;
    return true;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

bool parse_scenario_text(const std::string& text, Scenario* out,
                         std::string* error) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            if (error)
                *error = "line " + std::to_string(lineno) + ": expected key = value";
            return false;
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        try {
            if (key == "kind") {
                if (!parse_kind(val, &out->kind)) {
                    if (error) *error = "unknown scenario kind: " + val;
                    return false;
                }
            } else if (key == "neighbors") out->neighbors = std::stoi(val);
            else if (key == "snr_db_min") out->snr_db_min = std::stod(val);
            else if (key == "snr_db_max") out->snr_db_max = std::stod(val);
            else if (key == "snr_db_step") out->snr_db_step = std::stod(val);
            else if (key == "tmax_us") out->tmax_us = std::stod(val);
            else if (key == "nsa") out->nsa = std::stoi(val);
            else if (key == "qam_m") out->qam_m = std::stoi(val);
            else if (key == "trials") out->trials = std::stoi(val);
            else if (key == "trials_per_topology")
                out->trials_per_topology = std::stoi(val);
            else if (key == "seed") out->seed = std::stoull(val);
            else {
                if (error) *error = "unknown key: " + key;
                return false;
            }
        } catch (const std::exception&) {
            if (error) *error = "bad value for key " + key + ": " + val;
            return false;
        }
    }
    return true;
}

bool load_scenario_file(const std::string& path, Scenario* out,
                        std::string* error) {
    std::ifstream in(path);
    if (!in) {
        if (error) *error = "cannot open scenario file: " + path;
        return false;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), out, error);
}

Topology gen_relay_topology(int n, Rng& rng) {
    Topology t;
    t.radio_range = 10.0;  // single-hop field: everyone in range
    t.pos.push_back({0.0, 0.0});
    t.pos.push_back({1.0, 0.0});
    for (int i = 0; i < n; ++i)
        t.pos.push_back({rng.uniform(), rng.uniform() - 0.5});
    return t;
}

namespace {

double mean_degree(const Topology& t) {
    if (t.size() == 0) return 0.0;
    long total = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        total += static_cast<long>(t.neighbors(i).size());
    return double(total) / double(t.size());
}

Topology sample_topology(int node_count, double radio_range, Rng& rng) {
    Topology t;
    t.radio_range = radio_range;
    t.pos.push_back({0.1, 0.5});
    t.pos.push_back({0.9, 0.5});
    for (int i = 2; i < node_count; ++i)
        t.pos.push_back({rng.uniform(), rng.uniform()});
    return t;
}

}  // namespace

Topology gen_random_topology(int target_neighbors, double radio_range,
                             Rng& rng) {
    const double pi = 3.14159265358979323846;
    // First guess from the infinite-plane density; edge effects shrink
    // the realized mean degree, corrected adaptively below.
    int n = std::max(4, int(std::lround(
                            target_neighbors / (pi * radio_range * radio_range))));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Topology t = sample_topology(n, radio_range, rng);
        const double deg = mean_degree(t);
        if (std::abs(deg - target_neighbors) <= 0.1 * target_neighbors &&
            connected(t, 0, 1))
            return t;
        if (deg > 0)
            n = std::max(4, int(std::lround(n * target_neighbors / deg)));
        else
            n = n * 2;
    }
    throw std::runtime_error("gen_random_topology: resample budget exhausted");
}

Topology gen_void_topology(int target_neighbors, double radio_range,
                           Rng& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Topology t = gen_random_topology(target_neighbors, radio_range, rng);
        // Carve a hole somewhere between S and D, big enough to defeat
        // greedy progress at its rim.
        const Position center{0.3 + rng.uniform(0.4), 0.35 + rng.uniform(0.3)};
        const double hole = radio_range * (1.0 + rng.uniform());
        Topology carved;
        carved.radio_range = t.radio_range;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (i < 2 || dist(t.pos[i], center) > hole)
                carved.pos.push_back(t.pos[i]);
        if (carved.size() >= 4 && connected(carved, 0, 1)) return carved;
    }
    throw std::runtime_error("gen_void_topology: resample budget exhausted");
}

long long relay_ordering_symbol_budget(double snr_db) {
    // Error rates fall roughly two decades per 10 dB under cooperation;
    // scale the budget to keep a few hundred error events per point.
    if (snr_db <= 15.0) return 400000;
    if (snr_db <= 20.0) return 2000000;
    if (snr_db <= 25.0) return 20000000;
    return 150000000;
}

namespace {

RunResult run_relay_ordering(const Scenario& s) {
    RunResult out;
    out.scenario = s;
    const QamParams qam = qam_params(s.qam_m);
    const double p = 2.0;
    const double th_default = qam.a / qam.b;
    const int n = s.neighbors > 0 ? s.neighbors : 5;
    const std::vector<double> grid = s.snr_grid();

    // arms: rank1..rankN, random, direct
    std::vector<SerPoint> points;
    for (double snr : grid) {
        for (int k = 1; k <= n; ++k)
            points.push_back({"rank" + std::to_string(k), snr, 0, 0});
        points.push_back({"random", snr, 0, 0});
        points.push_back({"direct", snr, 0, 0});
    }
    auto point = [&](std::size_t snr_idx, std::size_t arm) -> SerPoint& {
        return points[snr_idx * (n + 2) + arm];
    };

    const Position spos{0.0, 0.0};
    const Position dpos{1.0, 0.0};

    for (int trial = 0; trial < s.trials; ++trial) {
        Rng rng = Rng::substream(s.seed, trial);
        const Topology topo = gen_relay_topology(n, rng);

        // Rank relays by the location metric (rank 1 = predicted best).
        std::vector<std::size_t> ranked;
        for (std::size_t i = 2; i < topo.size(); ++i) ranked.push_back(i);
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            const double ma = relay_metric(spos, dpos, topo.pos[a], p, qam);
            const double mb = relay_metric(spos, dpos, topo.pos[b], p, qam);
            if (ma != mb) return ma < mb;
            return a < b;
        });
        std::vector<double> var_sr(n), var_rf(n);
        for (int k = 0; k < n; ++k) {
            var_sr[k] = mean_channel_gain(dist(spos, topo.pos[ranked[k]]), p);
            var_rf[k] = mean_channel_gain(dist(topo.pos[ranked[k]], dpos), p);
        }

        for (std::size_t si = 0; si < grid.size(); ++si) {
            const double total_power = std::pow(10.0, grid[si] / 10.0);
            const double px = total_power / 2.0;
            const long long budget =
                std::max<long long>(500, relay_ordering_symbol_budget(grid[si]) /
                                             std::max(1, s.trials));
            for (long long sym = 0; sym < budget; ++sym) {
                // Common random numbers across all arms: the same fading
                // and decision draws drive every relay choice, so rank
                // comparisons are tightly coupled.
                const double e_sf = -std::log1p(-rng.uniform());
                const double e_sr = -std::log1p(-rng.uniform());
                const double e_rf = -std::log1p(-rng.uniform());
                const double u_err = rng.uniform();
                const int pick = rng.uniform_int(n);

                const double g_sf = px * e_sf;  // unit S-D distance
                bool pick_err = false;
                for (int k = 0; k < n; ++k) {
                    const double g_sr = px * var_sr[k] * e_sr;
                    const double gamma =
                        relay_decodes(g_sr, th_default)
                            ? g_sf + px * var_rf[k] * e_rf
                            : g_sf;
                    const bool err = u_err < awgn_ser(gamma, qam.m);
                    SerPoint& pt = point(si, k);
                    ++pt.symbols;
                    if (err) ++pt.errors;
                    if (k == pick) pick_err = err;
                }
                SerPoint& rnd = point(si, n);
                ++rnd.symbols;
                if (pick_err) ++rnd.errors;

                SerPoint& dir = point(si, n + 1);
                ++dir.symbols;
                if (u_err < awgn_ser(total_power * e_sf, qam.m)) ++dir.errors;
            }
        }
    }
    out.ser = std::move(points);
    return out;
}

RunResult run_protocol(const Scenario& s, bool baseline) {
    RunResult out;
    out.scenario = s;

    RouteConfig cfg;
    cfg.protocol.qam = qam_params(s.qam_m);
    cfg.protocol.phy.total_power = std::pow(10.0, s.snr_db_min / 10.0);
    cfg.protocol.phy.decode_snr_threshold =
        cfg.protocol.qam.a / cfg.protocol.qam.b;
    cfg.protocol.mac.t_max = s.tmax_us * 1e-6;
    cfg.protocol.mac.nsa = s.nsa;
    cfg.protocol.mac.payload_symbols = payload_symbol_count(1538, s.qam_m);
    cfg.protocol.mac.t_data =
        double(cfg.protocol.mac.payload_symbols) / cfg.protocol.mac.symbol_rate;
    cfg.protocol.baseline = baseline;

    const double r = 0.25;
    const double payload_bits = 1538.0 * 8.0;

    for (int trial = 0; trial < s.trials; ++trial) {
        Rng rng = Rng::substream(s.seed, trial);
        Topology topo;
        try {
            topo = gen_random_topology(s.neighbors, r, rng);
        } catch (const std::runtime_error&) {
            continue;  // density unreachable for this substream
        }
        for (int k = 0; k < s.trials_per_topology; ++k) {
            const RouteResult res = route(0, 1, topo, cfg, rng);
            TrialRecord rec;
            rec.delivered = res.delivered;
            rec.hops = static_cast<int>(res.hops.size());
            rec.coop_hops = res.coop_hops;
            for (const RouteHop& h : res.hops)
                if (h.mode == HopMode::Recovery) ++rec.recovery_hops;
            rec.hop_attempts = res.hop_attempts;
            rec.contention_rounds = res.contention_rounds;
            rec.collision_events = res.collision_events;
            rec.collided_rounds = res.collided_rounds;
            rec.residual_hop_errors = res.residual_hop_errors;
            rec.elapsed = res.elapsed;
            rec.bits_delivered = res.delivered ? payload_bits : 0.0;
            out.trials.push_back(rec);
        }
    }
    return out;
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
    if (s.kind == ScenarioKind::RelayOrdering) return run_relay_ordering(s);
    return run_protocol(s, /*baseline=*/false);
}

RunResult run_baseline(const Scenario& s) {
    return run_protocol(s, /*baseline=*/true);
}

}  // namespace coopgeo
