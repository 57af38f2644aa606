#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "coopgeo/geometry.hpp"
#include "coopgeo/mac.hpp"
#include "coopgeo/rng.hpp"

namespace coopgeo {

// Edges incident to a stuck node that survived the select-and-protest
// planarization; a local piece of the Gabriel graph.
struct PlanarSubgraph {
    std::size_t center = 0;
    std::vector<std::size_t> edges;  // surviving neighbor ids, sorted
};

enum class HopMode { Direct, Coop, Recovery };

struct RouteHop {
    std::size_t forwarder = 0;
    HopMode mode = HopMode::Direct;
};

struct RouteResult {
    std::vector<RouteHop> hops;
    bool delivered = false;
    const char* failure_reason = nullptr;
    // Aggregates for metric computation.
    int contention_rounds = 0;
    int collision_events = 0;
    int collided_rounds = 0;
    int residual_hop_errors = 0;
    int hop_attempts = 0;
    int coop_hops = 0;
    double elapsed = 0.0;
};

// Greedy forwarder choice via timer contention over the neighbors with
// positive progress; nullopt when none exists or the round fails.
std::optional<std::size_t> blgf_select(std::size_t s, const Position& dest,
                                       const Topology& topo,
                                       const MacConfig& cfg, Rng& rng);

// Deterministic greedy choice (maximum progress), used when modeling an
// ideal collision-free MAC.
std::optional<std::size_t> greedy_next(std::size_t s, const Position& dest,
                                       const Topology& topo);

// Select-and-protest planarization around a stuck node. Candidates
// answer in contention order; a candidate that hears an earlier
// responder whose Gabriel circle covers it stays quiet, then protests
// against the violating edge. full_response makes every candidate
// respond, which yields the exact local Gabriel graph.
PlanarSubgraph bfp_planarize(std::size_t center,
                             const std::vector<std::size_t>& candidates,
                             const Topology& topo, const MacConfig& cfg,
                             Rng& rng, bool full_response = false);

// Core of the planarization with an explicit response order (earlier in
// the list = earlier timer); exposed for reproducing known scenarios.
PlanarSubgraph bfp_planarize_ordered(std::size_t center,
                                     const std::vector<std::size_t>& order,
                                     const Topology& topo,
                                     bool full_response = false);

// Right-hand-rule successor around `at` inside the planar subgraph:
// the first edge counterclockwise from the reference direction (the
// arrival edge, or the direction toward the destination on entry).
std::optional<std::size_t> face_next_hop(const PlanarSubgraph& g,
                                         const Topology& topo,
                                         const Position& ref_toward);

struct RouteConfig {
    ProtocolConfig protocol;
    // Ideal mode: error-free links, deterministic maximum-progress
    // greedy, full-response planarization — isolates the routing logic.
    bool ideal = false;
};

// End-to-end route construction from s to d, greedy with face-routing
// recovery, running the per-hop protocol on every hop.
RouteResult route(std::size_t s, std::size_t d, const Topology& topo,
                  const RouteConfig& cfg, Rng& rng, TraceLog* trace = nullptr);

}  // namespace coopgeo
