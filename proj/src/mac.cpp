#include "coopgeo/mac.hpp"

#include <algorithm>
#include <cmath>

#include "coopgeo/relaysel.hpp"

namespace coopgeo {

long payload_symbol_count(int packet_bytes, int qam_m) {
    const long bits = 8L * packet_bytes;
    const int bits_per_symbol = static_cast<int>(std::lround(std::log2(double(qam_m))));
    return (bits + bits_per_symbol - 1) / bits_per_symbol;
}

double forwarder_timer(int csa, const MacConfig& cfg, Rng& rng) {
    const double slot = cfg.t_max / cfg.nsa;
    return csa * slot + rng.uniform(slot);
}

double ts1_initial(const MacConfig& cfg) {
    return cfg.t_data + cfg.t_ctf + cfg.t_max;
}

double ts1_updated(const MacConfig& cfg, bool coop) {
    if (!coop) return cfg.t_sel + cfg.t_ack;
    return cfg.t_sel + cfg.t_max + cfg.t_data + cfg.t_ack;
}

double tf1(const MacConfig& cfg, bool coop) {
    if (!coop) return cfg.t_ctf + cfg.t_sel;
    return cfg.t_ctf + cfg.t_sel + cfg.t_max + cfg.t_data;
}

namespace {

bool hears(const ContentionEntry& listener, std::size_t speaker) {
    return std::find(listener.audible_to.begin(), listener.audible_to.end(),
                     speaker) != listener.audible_to.end();
}

}  // namespace

ContentionOutcome resolve_contention(const std::vector<ContentionEntry>& entries,
                                     const MacConfig& cfg) {
    ContentionOutcome out;
    if (entries.empty()) return out;

    // Index order by timer, ties by id for determinism.
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (entries[a].timer != entries[b].timer)
            return entries[a].timer < entries[b].timer;
        return entries[a].id < entries[b].id;
    });

    std::vector<char> done(entries.size(), 0);  // suppressed or already fired
    while (true) {
        // Earliest remaining contender.
        std::size_t first = entries.size();
        for (std::size_t i : order)
            if (!done[i]) {
                first = i;
                break;
            }
        if (first == entries.size()) break;
        const double t1 = entries[first].timer;

        // Everyone who transmits on top of it: equal timers always, and
        // nodes that cannot hear the leader and fire inside the window.
        std::vector<std::size_t> txs{first};
        for (std::size_t i : order) {
            if (done[i] || i == first) continue;
            const auto& e = entries[i];
            if (e.timer == t1 ||
                (!hears(e, entries[first].id) &&
                 e.timer < t1 + cfg.vulnerability_window))
                txs.push_back(i);
        }

        if (txs.size() == 1) {
            out.kind = ContentionOutcome::Kind::Winner;
            out.winner = entries[first].id;
            out.winner_timer = t1;
            return out;
        }

        // Garbled exchange. The transmitters are spent; a bystander that
        // received exactly one of them cleanly suppresses, one that heard
        // an overlap cannot decode and stays in the race.
        ++out.collision_events;
        for (std::size_t i : txs) {
            done[i] = 1;
            out.collided.push_back(entries[i].id);
        }
        for (std::size_t i : order) {
            if (done[i]) continue;
            int heard = 0;
            for (std::size_t j : txs)
                if (hears(entries[i], entries[j].id)) ++heard;
            if (heard == 1) done[i] = 1;
        }
    }

    out.kind = out.collision_events > 0 ? ContentionOutcome::Kind::Collision
                                        : ContentionOutcome::Kind::Silence;
    return out;
}

namespace {

void log(TraceLog* trace, double t, FrameKind kind, std::size_t src,
         long dst, const char* note) {
    if (trace) trace->push_back({t, kind, src, dst, note});
}

// Whole-packet decode of a DATA frame at the forwarder: draws the
// per-symbol fading SNRs (kept for later combining) and the symbol
// error indicators.
bool decode_packet(double tx_power, double var, long symbols,
                   const ProtocolConfig& cfg, Rng& rng,
                   std::vector<double>* gammas) {
    bool ok = true;
    if (gammas) gammas->resize(symbols);
    for (long i = 0; i < symbols; ++i) {
        const double g = tx_power * rng.exponential(var) / cfg.phy.noise_power;
        if (gammas) (*gammas)[i] = g;
        if (rng.bernoulli(awgn_ser(g, cfg.qam.m))) {
            ok = false;
            if (!gammas) return false;  // early exit when SNRs not needed
        }
    }
    return ok;
}

}  // namespace

HopResult run_hop(const Topology& topo, const HopSetup& setup,
                  const ProtocolConfig& cfg, Rng& rng, TraceLog* trace) {
    HopResult res;
    const std::size_t s = setup.src;
    const Position spos = topo.pos[s];
    const Position dpos = setup.dest_position;
    const MacConfig& mac = cfg.mac;
    const long len = mac.payload_symbols;
    // Every node radiates at the fixed radio power; the per-phase power
    // split is an accounting device of the link-budget analysis, not a
    // behaviour of the protocol.
    const double data_power = cfg.phy.total_power;

    double t = 0.0;
    log(trace, t, FrameKind::Data, s, -1, "broadcast");
    t += mac.t_data;
    res.data_attempts = 1;

    // ---- forwarder selection ----
    std::size_t f;
    if (setup.forced_forwarder) {
        f = *setup.forced_forwarder;
    } else {
        std::vector<ContentionEntry> entries;
        std::vector<std::size_t> ids;
        for (std::size_t i : topo.neighbors(s)) {
            if (classify(spos, dpos, topo.pos[i], topo.radio_range) !=
                Area::PPA)
                continue;
            ContentionEntry e;
            e.id = i;
            e.timer = forwarder_timer(
                csa_ppa(spos, dpos, topo.pos[i], topo.radio_range, mac.nsa),
                mac, rng);
            entries.push_back(e);
            ids.push_back(i);
        }
        for (auto& e : entries)
            for (std::size_t other : ids)
                if (other != e.id && topo.adjacent(e.id, other))
                    e.audible_to.push_back(other);

        ++res.contention_rounds;
        const ContentionOutcome out = resolve_contention(entries, mac);
        res.collision_events += out.collision_events;
        if (out.collision_events > 0) ++res.collided_rounds;
        if (out.kind == ContentionOutcome::Kind::Silence) {
            res.outcome = HopOutcome::NoForwarder;
            res.elapsed = t + mac.t_max;
            return res;
        }
        if (out.kind == ContentionOutcome::Kind::Collision) {
            res.outcome = HopOutcome::CollisionAbort;
            res.elapsed = t + mac.t_max;
            return res;
        }
        f = out.winner;
        t += out.winner_timer;
    }
    res.forwarder = f;
    const Position fpos = topo.pos[f];
    const double var_sf = mean_channel_gain(dist(spos, fpos), cfg.phy.path_loss_exp);

    // ---- baseline: direct transmission with retries, no cooperation ----
    if (cfg.baseline) {
        log(trace, t, FrameKind::Ctf, f, long(s), "no-coop");
        t += mac.t_ctf;
        log(trace, t, FrameKind::Select, s, long(f), "");
        t += mac.t_sel;
        bool ok = decode_packet(data_power, var_sf, len, cfg, rng, nullptr);
        while (!ok && res.data_attempts <= cfg.baseline_retry_cap) {
            log(trace, t, FrameKind::Data, s, long(f), "retry");
            t += mac.t_data;
            ++res.data_attempts;
            ok = decode_packet(data_power, var_sf, len, cfg, rng, nullptr);
        }
        if (ok) {
            log(trace, t, FrameKind::Ack, f, long(s), "");
            t += mac.t_ack;
            res.outcome = HopOutcome::DirectSuccess;
        } else {
            res.residual_error = true;
            res.outcome = HopOutcome::ResidualError;
        }
        res.elapsed = t;
        return res;
    }

    // ---- forwarder decodes the broadcast DATA ----
    std::vector<double> gamma_sf;
    const bool direct_ok =
        decode_packet(data_power, var_sf, len, cfg, rng, &gamma_sf);
    res.coop_requested = !direct_ok;
    log(trace, t, FrameKind::Ctf, f, long(s),
        direct_ok ? "no-coop" : "coop-requested");
    t += mac.t_ctf;
    log(trace, t, FrameKind::Select, s, long(f), "");
    t += mac.t_sel;

    if (direct_ok) {
        log(trace, t, FrameKind::Ack, f, long(s), "");
        t += mac.t_ack;
        res.outcome = HopOutcome::DirectSuccess;
        res.elapsed = t;
        return res;
    }

    // ---- relay contention among successful decoders in the area ----
    const double f_star = relay_metric(
        spos, fpos,
        optimal_relay_point(spos, fpos, cfg.qam.a * cfg.qam.a, cfg.qam.bb,
                            cfg.phy.path_loss_exp),
        cfg.phy.path_loss_exp, cfg.qam);
    const double f_max = relay_metric(
        spos, fpos,
        farthest_point(spos, fpos, topo.radio_range, cfg.relay_area,
                       cfg.qam.a * cfg.qam.a, cfg.qam.bb,
                       cfg.phy.path_loss_exp, cfg.apex_positive),
        cfg.phy.path_loss_exp, cfg.qam);

    std::vector<ContentionEntry> entries;
    std::vector<std::size_t> ids;
    for (std::size_t i : topo.neighbors(s)) {
        if (i == f) continue;
        if (!in_relaying_area(spos, fpos, topo.pos[i], topo.radio_range,
                              cfg.relay_area, cfg.apex_positive))
            continue;
        // Candidacy requires decoding the whole DATA packet above the
        // adaptive threshold. Per-symbol threshold passes are independent
        // exponentials, so the packet-level probability has a product
        // form we can draw in one shot.
        const double var_sr =
            mean_channel_gain(dist(spos, topo.pos[i]), cfg.phy.path_loss_exp);
        const double p_all = std::exp(-double(len) * cfg.phy.decode_snr_threshold *
                                      cfg.phy.noise_power / (data_power * var_sr));
        if (!rng.bernoulli(p_all)) continue;

        const double m = relay_metric(spos, fpos, topo.pos[i],
                                      cfg.phy.path_loss_exp, cfg.qam);
        ContentionEntry e;
        e.id = i;
        e.timer = relay_timer(normalize_metric(m, f_star, f_max), mac.t_max,
                              mac.nsa, rng);
        entries.push_back(e);
        ids.push_back(i);
    }
    for (auto& e : entries)
        for (std::size_t other : ids)
            if (other != e.id && topo.adjacent(e.id, other))
                e.audible_to.push_back(other);

    ++res.contention_rounds;
    const ContentionOutcome out = resolve_contention(entries, mac);
    res.collision_events += out.collision_events;
    if (out.collision_events > 0) ++res.collided_rounds;
    if (out.kind == ContentionOutcome::Kind::Silence) {
        res.outcome = HopOutcome::CoopFailNoRelay;
        res.elapsed = t + mac.t_max;
        return res;
    }
    if (out.kind == ContentionOutcome::Kind::Collision) {
        res.outcome = HopOutcome::CollisionAbort;
        res.elapsed = t + mac.t_max;
        return res;
    }

    const std::size_t r = out.winner;
    res.relay = static_cast<long>(r);
    t += out.winner_timer;
    log(trace, t, FrameKind::RelayData, r, long(f), "");
    t += mac.t_data;

    // Destination-side combining: stored broadcast-phase SNR plus a fresh
    // relay-phase SNR per symbol.
    const double var_rf =
        mean_channel_gain(dist(topo.pos[r], fpos), cfg.phy.path_loss_exp);
    bool ok = true;
    for (long i = 0; i < len; ++i) {
        const double g = gamma_sf[i] + data_power * rng.exponential(var_rf) /
                                           cfg.phy.noise_power;
        if (rng.bernoulli(awgn_ser(g, cfg.qam.m))) {
            ok = false;
            break;
        }
    }
    if (ok) {
        log(trace, t, FrameKind::Ack, f, long(s), "");
        t += mac.t_ack;
        res.outcome = HopOutcome::CoopSuccess;
    } else {
        res.residual_error = true;
        res.outcome = HopOutcome::ResidualError;
    }
    res.elapsed = t;
    return res;
}

}  // namespace coopgeo
