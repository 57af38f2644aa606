#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopgeo/metrics.hpp"
#include "coopgeo/relaysel.hpp"
#include "coopgeo/routing.hpp"
#include "coopgeo/sim.hpp"

namespace {

using namespace coopgeo;

struct CommonOpts {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out_path;
    std::string config_path;
    bool baseline = false;
};

void add_common(CLI::App* cmd, CommonOpts* o) {
    cmd->add_option("--seed", o->seed, "master random seed");
    cmd->add_option("--trials", o->trials, "number of topologies");
    cmd->add_option("--out", o->out_path, "CSV output path (default stdout)");
    cmd->add_option("--config", o->config_path, "scenario file (key = value)");
    cmd->add_flag("--baseline", o->baseline,
                  "include the direct-transmission comparison arm");
}

// Config file first, then explicit flags override.
bool apply_common(const CommonOpts& o, Scenario* s, std::string* err) {
    if (!o.config_path.empty() && !load_scenario_file(o.config_path, s, err))
        return false;
    if (o.seed) s->seed = *o.seed;
    if (o.trials) s->trials = *o.trials;
    return true;
}

int emit(const MetricsRecord& rec, const std::string& out_path) {
    const std::string csv = to_csv(rec);
    if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
    }
    f << csv;
    return 0;
}

int cmd_ser(const CommonOpts& o) {
    Scenario s;
    s.kind = ScenarioKind::RelayOrdering;
    s.neighbors = 5;
    s.trials = 200;
    std::string err;
    if (!apply_common(o, &s, &err)) {
        std::cerr << err << "\n";
        return 2;
    }
    MetricsRecord rec;
    rec.header = scenario_header(s);
    append_ser_metrics(run_scenario(s), &rec);
    return emit(rec, o.out_path);
}

Scenario protocol_defaults() {
    Scenario s;
    s.kind = ScenarioKind::PerVsDensity;
    s.snr_db_min = 25.0;  // operating unit-distance SNR
    s.trials = 100;
    s.trials_per_topology = 20;
    return s;
}

int cmd_per(const CommonOpts& o) {
    Scenario base = protocol_defaults();
    std::string err;
    if (!apply_common(o, &base, &err)) {
        std::cerr << err << "\n";
        return 2;
    }
    MetricsRecord rec;
    rec.header = scenario_header(base);
    for (int nb : {2, 5, 10, 15, 20}) {
        Scenario s = base;
        s.neighbors = nb;
        append_protocol_metrics(run_scenario(s), nb, "", 22e6, &rec);
        if (o.baseline)
            append_protocol_metrics(run_baseline(s), nb, "_baseline", 22e6,
                                    &rec);
    }
    return emit(rec, o.out_path);
}

int cmd_tmax(const CommonOpts& o) {
    Scenario base = protocol_defaults();
    base.kind = ScenarioKind::TmaxSweep;
    base.neighbors = 10;
    std::string err;
    if (!apply_common(o, &base, &err)) {
        std::cerr << err << "\n";
        return 2;
    }
    MetricsRecord rec;
    rec.header = scenario_header(base);
    for (double tmax_us : {100.0, 300.0, 500.0, 1000.0}) {
        Scenario s = base;
        s.tmax_us = tmax_us;
        append_protocol_metrics(run_scenario(s), tmax_us, "", 22e6, &rec);
        if (o.baseline)
            append_protocol_metrics(run_baseline(s), tmax_us, "_baseline",
                                    22e6, &rec);
    }
    return emit(rec, o.out_path);
}

int cmd_throughput(const CommonOpts& o) {
    Scenario base = protocol_defaults();
    base.kind = ScenarioKind::ThroughputVsConstellation;
    base.neighbors = 10;
    std::string err;
    if (!apply_common(o, &base, &err)) {
        std::cerr << err << "\n";
        return 2;
    }
    MetricsRecord rec;
    rec.header = scenario_header(base);
    for (int m : {4, 16, 64}) {
        Scenario s = base;
        s.qam_m = m;
        append_protocol_metrics(run_scenario(s), m, "", 22e6, &rec);
        if (o.baseline)
            append_protocol_metrics(run_baseline(s), m, "_baseline", 22e6,
                                    &rec);
    }
    return emit(rec, o.out_path);
}

const char* frame_name(FrameKind k) {
    switch (k) {
        case FrameKind::Data: return "DATA";
        case FrameKind::Ctf: return "CTF";
        case FrameKind::Select: return "SELECT";
        case FrameKind::Ack: return "ACK";
        case FrameKind::RelayData: return "RELAY_DATA";
    }
    return "?";
}

int cmd_route_trace(const CommonOpts& o) {
    Scenario s = protocol_defaults();
    s.neighbors = 10;
    std::string err;
    if (!apply_common(o, &s, &err)) {
        std::cerr << err << "\n";
        return 2;
    }
    Rng rng = Rng::substream(s.seed, 0);
    const Topology topo = gen_random_topology(s.neighbors, 0.25, rng);

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
    cfg.protocol.baseline = o.baseline;

    TraceLog trace;
    const RouteResult res = route(0, 1, topo, cfg, rng, &trace);

    std::string buf;
    for (const TraceEvent& e : trace) {
        char line[160];
        std::snprintf(line, sizeof line, "%12.3f us  %-10s src=%zu dst=%ld %s\n",
                      e.time * 1e6, frame_name(e.kind), e.src, e.dst,
                      e.note.c_str());
        buf += line;
    }
    char tail[120];
    std::snprintf(tail, sizeof tail,
                  "delivered=%d hops=%zu coop_hops=%d elapsed=%.3f us\n",
                  res.delivered ? 1 : 0, res.hops.size(), res.coop_hops,
                  res.elapsed * 1e6);
    buf += tail;
    if (o.out_path.empty()) {
        std::fputs(buf.c_str(), stdout);
        return 0;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) {
        std::cerr << "cannot write " << o.out_path << "\n";
        return 2;
    }
    f << buf;
    return 0;
}

int cmd_validate(const CommonOpts& o) {
    std::uint64_t seed = o.seed.value_or(1);
    int failures = 0;
    auto check = [&](bool ok, const char* what) {
        std::printf("%s: %s\n", ok ? "PASS" : "FAIL", what);
        if (!ok) ++failures;
    };

    // Determinism of a small relay-ordering run.
    {
        Scenario s;
        s.kind = ScenarioKind::RelayOrdering;
        s.neighbors = 3;
        s.trials = 5;
        s.snr_db_min = 15;
        s.snr_db_max = 15;
        s.seed = seed;
        MetricsRecord a, b;
        append_ser_metrics(run_scenario(s), &a);
        append_ser_metrics(run_scenario(s), &b);
        check(to_csv(a) == to_csv(b), "repeated run yields identical CSV");
    }
    // Timer windows.
    {
        MacConfig mac;
        Rng rng(seed);
        bool ok = true;
        for (int i = 0; i < 1000; ++i) {
            const int csa = i % mac.nsa;
            const double t = forwarder_timer(csa, mac, rng);
            if (t < 0 || t >= mac.t_max) ok = false;
            const double tr = relay_timer(rng.uniform(), mac.t_max, mac.nsa, rng);
            if (tr < 0 || tr >= mac.t_max + 2 * mac.t_max / mac.nsa) ok = false;
        }
        check(ok, "contention timers stay inside their windows");
    }
    // Full-response planarization matches the brute-force Gabriel edges.
    {
        Rng rng(seed + 7);
        bool ok = true;
        for (int t = 0; t < 20 && ok; ++t) {
            const Topology topo = gen_random_topology(10, 0.25, rng);
            for (std::size_t v = 0; v < topo.size(); ++v) {
                const std::vector<std::size_t> nbrs = topo.neighbors(v);
                const PlanarSubgraph g = bfp_planarize_ordered(
                    v, nbrs, topo, /*full_response=*/true);
                std::vector<std::size_t> brute;
                for (std::size_t u : nbrs) {
                    bool violated = false;
                    for (std::size_t w : nbrs)
                        if (w != u && gabriel_violates(topo.pos[v],
                                                       topo.pos[u],
                                                       topo.pos[w]))
                            violated = true;
                    if (!violated) brute.push_back(u);
                }
                if (g.edges != brute) ok = false;
            }
        }
        check(ok, "full-response planarization equals brute-force Gabriel");
    }
    std::printf(failures == 0 ? "validate: all checks passed\n"
                              : "validate: %d check(s) failed\n",
                failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CoopGeo protocol simulator"};
    app.require_subcommand(1);

    CommonOpts ser_o, per_o, tmax_o, tput_o, trace_o, val_o;
    add_common(app.add_subcommand("ser", "relay-ordering SER experiment"),
               &ser_o);
    add_common(app.add_subcommand("per", "packet error rate vs density"),
               &per_o);
    add_common(app.add_subcommand("tmax", "collision probability vs T_max"),
               &tmax_o);
    add_common(app.add_subcommand("throughput",
                                  "normalized throughput vs constellation"),
               &tput_o);
    add_common(app.add_subcommand("route-trace", "single-route frame trace"),
               &trace_o);
    add_common(app.add_subcommand("validate", "run the invariant suite"),
               &val_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.got_subcommand("ser")) return cmd_ser(ser_o);
    if (app.got_subcommand("per")) return cmd_per(per_o);
    if (app.got_subcommand("tmax")) return cmd_tmax(tmax_o);
    if (app.got_subcommand("throughput")) return cmd_throughput(tput_o);
    if (app.got_subcommand("route-trace")) return cmd_route_trace(trace_o);
    if (app.got_subcommand("validate")) return cmd_validate(val_o);
    return 2;
}
