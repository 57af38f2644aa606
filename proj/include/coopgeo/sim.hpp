#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopgeo/geometry.hpp"
#include "coopgeo/routing.hpp"

namespace coopgeo {

enum class ScenarioKind {
    RelayOrdering,
    PerVsDensity,
    TmaxSweep,
    ThroughputVsConstellation,
    Custom,
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::Custom;
    int neighbors = 10;       // target mean neighbor count
    double snr_db_min = 15.0;  // unit-distance total-power SNR grid
    double snr_db_max = 30.0;
    double snr_db_step = 5.0;
    double tmax_us = 500.0;
    int nsa = 8;
    int qam_m = 4;
    int trials = 200;  // topologies
    int trials_per_topology = 100;
    std::uint64_t seed = 1;

    std::vector<double> snr_grid() const;
};

// Parses a flat key = value scenario file. Returns false and stores a
// message naming the offending key or line on failure.
bool load_scenario_file(const std::string& path, Scenario* out,
                        std::string* error);
bool parse_scenario_text(const std::string& text, Scenario* out,
                         std::string* error);

// Single-hop relay field: node 0 = S at (0,0), node 1 = D at (1,0),
// n relays uniform over [0,1] x [-0.5, 0.5].
Topology gen_relay_topology(int n, Rng& rng);

// Unit-square multihop network: node 0 = S at (0.1, 0.5), node 1 = D at
// (0.9, 0.5). Resamples the node count and placement until the mean
// neighbor count is within 10% of the target and S and D are connected.
// Throws std::runtime_error after 1000 failed attempts.
Topology gen_random_topology(int target_neighbors, double radio_range,
                             Rng& rng);

// Like gen_random_topology but with a circular void carved between S
// and D, forcing greedy routing into recovery.
Topology gen_void_topology(int target_neighbors, double radio_range,
                           Rng& rng);

// One aggregated symbol-error estimate.
struct SerPoint {
    std::string arm;  // "rank1".."rankN", "random", "direct"
    double snr_db = 0.0;
    long long symbols = 0;
    long long errors = 0;
};

struct TrialRecord {
    bool delivered = false;
    int hops = 0;
    int coop_hops = 0;
    int recovery_hops = 0;
    int hop_attempts = 0;
    int contention_rounds = 0;
    int collision_events = 0;
    int collided_rounds = 0;
    int residual_hop_errors = 0;
    double elapsed = 0.0;
    double bits_delivered = 0.0;
};

struct RunResult {
    Scenario scenario;
    std::vector<TrialRecord> trials;
    std::vector<SerPoint> ser;
};

// Symbol budget per (arm, SNR point) for the relay-ordering experiment;
// grows with SNR so rare errors stay resolvable.
long long relay_ordering_symbol_budget(double snr_db);

// Dispatches on scenario kind. RelayOrdering fills `ser`; the protocol
// kinds fill `trials`.
RunResult run_scenario(const Scenario& s);

// Direct-transmission comparison arm: same contention, no cooperation,
// bounded retransmissions.
RunResult run_baseline(const Scenario& s);

}  // namespace coopgeo
