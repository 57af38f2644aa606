#include "coopgeo/routing.hpp"

#include <algorithm>
#include <cmath>

namespace coopgeo {

std::optional<std::size_t> greedy_next(std::size_t s, const Position& dest,
                                       const Topology& topo) {
    const double d_s = dist(topo.pos[s], dest);
    std::optional<std::size_t> best;
    double best_d = d_s;
    for (std::size_t i : topo.neighbors(s)) {
        const double d_i = dist(topo.pos[i], dest);
        if (d_i < best_d) {
            best_d = d_i;
            best = i;
        }
    }
    return best;
}

std::optional<std::size_t> blgf_select(std::size_t s, const Position& dest,
                                       const Topology& topo,
                                       const MacConfig& cfg, Rng& rng) {
    std::vector<ContentionEntry> entries;
    std::vector<std::size_t> ids;
    const Position spos = topo.pos[s];
    for (std::size_t i : topo.neighbors(s)) {
        if (classify(spos, dest, topo.pos[i], topo.radio_range) != Area::PPA)
            continue;
        ContentionEntry e;
        e.id = i;
        e.timer = forwarder_timer(
            csa_ppa(spos, dest, topo.pos[i], topo.radio_range, cfg.nsa), cfg,
            rng);
        entries.push_back(e);
        ids.push_back(i);
    }
    for (auto& e : entries)
        for (std::size_t other : ids)
            if (other != e.id && topo.adjacent(e.id, other))
                e.audible_to.push_back(other);
    const ContentionOutcome out = resolve_contention(entries, cfg);
    if (out.kind != ContentionOutcome::Kind::Winner) return std::nullopt;
    return out.winner;
}

PlanarSubgraph bfp_planarize_ordered(std::size_t center,
                                     const std::vector<std::size_t>& order,
                                     const Topology& topo,
                                     bool full_response) {
    const Position c = topo.pos[center];

    // Select phase: a candidate responds unless it already heard a
    // responder inside whose Gabriel circle (w.r.t. the center) it lies.
    std::vector<std::size_t> responders;
    std::vector<std::size_t> hidden;
    for (std::size_t w : order) {
        bool quiet = false;
        if (!full_response) {
            for (std::size_t u : responders) {
                if (topo.adjacent(w, u) &&
                    gabriel_violates(c, topo.pos[u], topo.pos[w])) {
                    quiet = true;
                    break;
                }
            }
        }
        (quiet ? hidden : responders).push_back(w);
    }

    // Protest phase: hidden nodes shoot down the edges that violated the
    // Gabriel condition against them; the center also drops any response
    // edge witnessed as violated by another responder.
    std::vector<char> removed(responders.size(), 0);
    for (std::size_t i = 0; i < responders.size(); ++i) {
        const std::size_t u = responders[i];
        for (std::size_t w : hidden)
            if (topo.adjacent(w, u) &&
                gabriel_violates(c, topo.pos[u], topo.pos[w]))
                removed[i] = 1;
        for (std::size_t v : responders)
            if (v != u && gabriel_violates(c, topo.pos[u], topo.pos[v]))
                removed[i] = 1;
    }

    PlanarSubgraph g;
    g.center = center;
    for (std::size_t i = 0; i < responders.size(); ++i)
        if (!removed[i]) g.edges.push_back(responders[i]);
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

PlanarSubgraph bfp_planarize(std::size_t center,
                             const std::vector<std::size_t>& candidates,
                             const Topology& topo, const MacConfig& cfg,
                             Rng& rng, bool full_response) {
    // Response order follows the corona-indexed contention timers.
    std::vector<std::pair<double, std::size_t>> timed;
    for (std::size_t i : candidates) {
        const int csa =
            csa_npa(topo.pos[center], topo.pos[i], topo.radio_range, cfg.nsa);
        timed.emplace_back(forwarder_timer(csa, cfg, rng), i);
    }
    std::sort(timed.begin(), timed.end());
    std::vector<std::size_t> order;
    for (const auto& [t, i] : timed) order.push_back(i);
    return bfp_planarize_ordered(center, order, topo, full_response);
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Angle of (from -> to) in [0, 2pi).
double heading(const Position& from, const Position& to) {
    double a = std::atan2(to.y - from.y, to.x - from.x);
    if (a < 0) a += 2 * kPi;
    return a;
}

// Counterclockwise angle from `ref` to `a` in (0, 2pi].
double ccw_gap(double ref, double a) {
    double g = a - ref;
    while (g <= 0) g += 2 * kPi;
    while (g > 2 * kPi) g -= 2 * kPi;
    return g;
}

// Proper crossing of open segments ab and cd; reports the intersection
// point. Collinear overlaps and endpoint touches do not count.
bool segments_cross(const Position& a, const Position& b, const Position& c,
                    const Position& d, Position* out) {
    const double rx = b.x - a.x, ry = b.y - a.y;
    const double sx = d.x - c.x, sy = d.y - c.y;
    const double denom = rx * sy - ry * sx;
    if (denom == 0.0) return false;
    const double t = ((c.x - a.x) * sy - (c.y - a.y) * sx) / denom;
    const double u = ((c.x - a.x) * ry - (c.y - a.y) * rx) / denom;
    if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return false;
    if (out) *out = {a.x + t * rx, a.y + t * ry};
    return true;
}

}  // namespace

std::optional<std::size_t> face_next_hop(const PlanarSubgraph& g,
                                         const Topology& topo,
                                         const Position& ref_toward) {
    if (g.edges.empty()) return std::nullopt;
    const Position v = topo.pos[g.center];
    const double ref = heading(v, ref_toward);
    std::size_t best = g.edges.front();
    double best_gap = 10.0;  // > 2 pi
    for (std::size_t w : g.edges) {
        const double gap = ccw_gap(ref, heading(v, topo.pos[w]));
        if (gap < best_gap) {
            best_gap = gap;
            best = w;
        }
    }
    return best;
}

namespace {

// Planarized neighborhood of a node, over its full neighbor set.
PlanarSubgraph local_planar(std::size_t v, const Topology& topo,
                            const RouteConfig& cfg, Rng& rng) {
    const std::vector<std::size_t> nbrs = topo.neighbors(v);
    if (cfg.ideal)
        return bfp_planarize_ordered(v, nbrs, topo, /*full_response=*/true);
    return bfp_planarize(v, nbrs, topo, cfg.protocol.mac, rng,
                         /*full_response=*/false);
}

// Runs the per-hop protocol toward a chosen forwarder (or via greedy
// contention when `forced` is empty), retrying recoverable failures.
// Returns the next node or nullopt on hop failure; fills aggregates.
std::optional<std::size_t> protocol_hop(std::size_t from,
                                        std::optional<std::size_t> forced,
                                        const Position& dest,
                                        const Topology& topo,
                                        const RouteConfig& cfg, Rng& rng,
                                        RouteResult& res, TraceLog* trace,
                                        bool* local_minimum, bool* coop) {
    *local_minimum = false;
    *coop = false;
    for (int attempt = 0; attempt <= cfg.protocol.hop_restart_cap; ++attempt) {
        HopSetup setup;
        setup.src = from;
        setup.dest_position = dest;
        setup.forced_forwarder = forced;
        const HopResult hop = run_hop(topo, setup, cfg.protocol, rng, trace);
        ++res.hop_attempts;
        res.contention_rounds += hop.contention_rounds;
        res.collision_events += hop.collision_events;
        res.collided_rounds += hop.collided_rounds;
        res.elapsed += hop.elapsed;
        if (hop.residual_error) ++res.residual_hop_errors;
        switch (hop.outcome) {
            case HopOutcome::DirectSuccess:
                return hop.forwarder;
            case HopOutcome::CoopSuccess:
                *coop = true;
                ++res.coop_hops;
                return hop.forwarder;
            case HopOutcome::NoForwarder:
                *local_minimum = true;
                return std::nullopt;
            case HopOutcome::ResidualError:
                // The baseline spends its whole retransmission budget
                // inside the hop; only the cooperative protocol restarts.
                if (cfg.protocol.baseline) return std::nullopt;
                continue;
            case HopOutcome::CollisionAbort:
            case HopOutcome::CoopFailNoRelay:
                continue;  // protocol restart
        }
    }
    return std::nullopt;
}

}  // namespace

RouteResult route(std::size_t s, std::size_t d, const Topology& topo,
                  const RouteConfig& cfg, Rng& rng, TraceLog* trace) {
    RouteResult res;
    const Position dest = topo.pos[d];
    // Perimeter traversal may legitimately revisit nodes across faces,
    // so the runaway guard is a multiple of the node count.
    const std::size_t hop_cap = 4 * topo.size() + 16;
    std::size_t current = s;

    bool perimeter = false;
    double entry_dist = 0.0;   // distance to D where recovery began
    Position lp;               // recovery entry position
    double cross_dist = 0.0;   // best crossing of (lp, dest) so far
    std::size_t prev = s;      // perimeter arrival node
    bool entering_face = false;
    std::pair<std::size_t, std::size_t> e0{0, 0};  // first edge of face
    bool have_e0 = false;

    while (current != d) {
        if (res.hops.size() >= hop_cap) {
            res.failure_reason = "hop cap exceeded";
            return res;
        }

        if (!perimeter) {
            // ---- greedy phase ----
            std::optional<std::size_t> next;
            bool coop = false;
            if (cfg.ideal) {
                next = greedy_next(current, dest, topo);
            } else {
                bool stuck = false;
                next = protocol_hop(current, std::nullopt, dest, topo, cfg,
                                    rng, res, trace, &stuck, &coop);
                if (!next && !stuck) {
                    res.failure_reason = "hop failed";
                    return res;
                }
            }
            if (next) {
                res.hops.push_back(
                    {*next, coop ? HopMode::Coop : HopMode::Direct});
                current = *next;
                continue;
            }
            // Local minimum: switch to face routing.
            perimeter = true;
            lp = topo.pos[current];
            entry_dist = dist(lp, dest);
            cross_dist = entry_dist;
            entering_face = true;
            have_e0 = false;
            continue;
        }

        // ---- perimeter phase ----
        if (dist(topo.pos[current], dest) < entry_dist) {
            perimeter = false;
            continue;
        }
        const PlanarSubgraph g = local_planar(current, topo, cfg, rng);
        if (g.edges.empty()) {
            res.failure_reason = "empty planar subgraph";
            return res;
        }
        const Position ref =
            entering_face ? dest : topo.pos[prev];
        std::optional<std::size_t> w = face_next_hop(g, topo, ref);
        entering_face = false;

        // Face changes: never traverse an edge past a closer crossing of
        // the recovery line; rotate onto the adjacent face instead.
        for (std::size_t spin = 0; spin <= g.edges.size(); ++spin) {
            Position p;
            if (!segments_cross(topo.pos[current], topo.pos[*w], lp, dest, &p))
                break;
            const double dp = dist(p, dest);
            if (dp >= cross_dist) break;
            cross_dist = dp;
            w = face_next_hop(g, topo, topo.pos[*w]);
            have_e0 = false;  // new face begins here
        }
        if (!have_e0) {
            e0 = {current, *w};
            have_e0 = true;
        } else if (e0 == std::make_pair(current, *w)) {
            res.failure_reason = "face exhausted";
            return res;
        }

        if (cfg.ideal) {
            res.hops.push_back({*w, HopMode::Recovery});
            prev = current;
            current = *w;
            continue;
        }
        bool stuck = false, coop = false;
        const std::optional<std::size_t> next = protocol_hop(
            current, w, dest, topo, cfg, rng, res, trace, &stuck, &coop);
        if (!next) {
            res.failure_reason = "hop failed";
            return res;
        }
        res.hops.push_back({*next, HopMode::Recovery});
        prev = current;
        current = *next;
    }

    res.delivered = true;
    return res;
}

}  // namespace coopgeo
