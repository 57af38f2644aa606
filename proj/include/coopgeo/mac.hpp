#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coopgeo/geometry.hpp"
#include "coopgeo/phy.hpp"
#include "coopgeo/rng.hpp"

namespace coopgeo {

enum class FrameKind { Data, Ctf, Select, Ack, RelayData };

struct Frame {
    FrameKind kind = FrameKind::Data;
    std::size_t src = 0;
    std::optional<std::size_t> dst;  // absent = broadcast
    Position src_position;
    Position dest_position;  // final destination, geographic header
    bool coop_requested = false;
    long payload_symbols = 0;
};

struct MacConfig {
    double t_max = 500e-6;
    int nsa = 8;
    double t_data = 279.7e-6;  // 1538-byte payload at 22 Msym/s, 4-QAM
    double t_ctf = 20e-6;
    double t_sel = 20e-6;
    double t_ack = 20e-6;
    // A second transmission starting this close after another one
    // corrupts both at a receiver that hears both.
    double vulnerability_window = 20e-6;
    long payload_symbols = 6152;
    double symbol_rate = 22e6;
};

// Payload length in symbols for the given packet size and constellation.
long payload_symbol_count(int packet_bytes, int qam_m);

// Slot-based contention timer: csa * t_max/nsa + uniform[0, t_max/nsa).
double forwarder_timer(int csa, const MacConfig& cfg, Rng& rng);

// Source timeout while looking for a forwarder.
double ts1_initial(const MacConfig& cfg);
// Source timeout after the forwarder announced itself; longer when the
// forwarder asked for relay cooperation.
double ts1_updated(const MacConfig& cfg, bool coop);
// Forwarder timeout covering its own control exchange (plus the relay
// phase when cooperation was requested).
double tf1(const MacConfig& cfg, bool coop);

struct ContentionEntry {
    std::size_t id = 0;
    double timer = 0.0;
    // Entry ids whose transmissions this node can hear.
    std::vector<std::size_t> audible_to;
};

struct ContentionOutcome {
    enum class Kind { Winner, Collision, Silence } kind = Kind::Silence;
    std::size_t winner = 0;
    double winner_timer = 0.0;
    // Every id that took part in a garbled transmission this round.
    std::vector<std::size_t> collided;
    // Number of distinct collision events observed in the round.
    int collision_events = 0;
};

// Plays out one timer contention. The earliest non-suppressed node
// transmits; competitors that hear it before their own timer suppress;
// competitors that cannot hear it and fire within the vulnerability
// window garble the exchange. After a garbled transmission the window
// keeps running, so a later node may still win cleanly.
ContentionOutcome resolve_contention(const std::vector<ContentionEntry>& entries,
                                     const MacConfig& cfg);

struct TraceEvent {
    double time = 0.0;
    FrameKind kind = FrameKind::Data;
    std::size_t src = 0;
    long dst = -1;  // -1 = broadcast
    std::string note;
};
using TraceLog = std::vector<TraceEvent>;

enum class HopOutcome {
    DirectSuccess,
    CoopSuccess,
    CoopFailNoRelay,
    NoForwarder,
    CollisionAbort,
    ResidualError,
};

struct ProtocolConfig {
    PhyConfig phy;
    MacConfig mac;
    QamParams qam = qam_params(4);
    AreaShape relay_area = AreaShape::Lens;
    bool apex_positive = true;
    // Per-hop protocol restarts after a recoverable failure.
    int hop_restart_cap = 3;
    // Baseline mode: cooperation disabled, DATA sent at full power,
    // failed decodes retransmitted up to this many times.
    bool baseline = false;
    int baseline_retry_cap = 3;
};

struct HopSetup {
    std::size_t src = 0;
    Position dest_position;  // final destination, for progress computation
    // When set, skip forwarder contention and use this node (recovery
    // hops pick their forwarder via the planarized subgraph).
    std::optional<std::size_t> forced_forwarder;
};

struct HopResult {
    HopOutcome outcome = HopOutcome::NoForwarder;
    std::size_t forwarder = 0;
    bool coop_requested = false;
    long relay = -1;  // -1 = none
    double elapsed = 0.0;
    int contention_rounds = 0;
    int collision_events = 0;
    int collided_rounds = 0;
    int data_attempts = 0;      // DATA (re)transmissions by the source
    bool residual_error = false;  // packet still undecodable at hop end
};

// One DATA handshake attempt between src and the contention winner,
// including relay cooperation when the forwarder fails to decode.
// Restarts on recoverable failures are handled by the caller.
HopResult run_hop(const Topology& topo, const HopSetup& setup,
                  const ProtocolConfig& cfg, Rng& rng,
                  TraceLog* trace = nullptr);

}  // namespace coopgeo
