#pragma once

#include "coopgeo/rng.hpp"

namespace coopgeo {

// Square M-QAM constants governing symbol error behaviour:
//   b : SNR scaling in the tight exponential SER bound
//   a : coefficient of the single-link fading asymptote
//   bb: coefficient of the combined-link fading asymptote
struct QamParams {
    int m = 4;
    double b = 0.0;   // 3 / (2 (M - 1))
    double a = 0.0;   // (M-1)/(2M) + (1 - 1/sqrt(M))^2 / pi
    double bb = 0.0;  // 3(M-1)/(8M) + (1 - 1/sqrt(M))^2 / pi
};

// Throws std::invalid_argument unless m is a perfect square >= 4.
QamParams qam_params(int m);

// Exact symbol error rate of square M-QAM on an AWGN channel at SNR
// gamma (linear).
double awgn_ser(double gamma, int m);

struct PhyConfig {
    double total_power = 316.22776601683793;  // 25 dB above unit noise
    double noise_power = 1.0;
    double path_loss_exp = 2.0;
    // Minimum receive SNR for a relay to decode reliably. Defaults to
    // a/b of 4-QAM so that the decode-failure rate tracks the fading
    // asymptote of single-link symbol errors.
    double decode_snr_threshold = 0.9091549430918954;

    // Per-phase transmit power when the transmission is split across a
    // broadcast phase and a relaying phase.
    double phase_power() const { return total_power / 2.0; }
};

// Strict threshold test on the instantaneous receive SNR.
bool relay_decodes(double gamma, double threshold);

// Channels involved in one source -> relay -> destination transmission,
// described by mean channel gains (Rayleigh fading => exponential |h|^2
// with these means).
struct CoopLinks {
    double var_sf = 1.0;  // source -> destination
    double var_sr = 1.0;  // source -> relay
    double var_rf = 1.0;  // relay -> destination
};

// Mean channel gain at the given distance under the power-law model.
double mean_channel_gain(double distance, double path_loss_exp);

enum class TxMode { Direct, Coop };

// One symbol through the fading channel. Direct mode uses the full
// power budget on the source -> destination link. Coop mode runs the
// adaptive decode-and-forward protocol at half power per phase: the
// relay retransmits only when its own receive SNR clears the decode
// threshold, and the destination then combines both copies.
// Returns true when the destination decodes the symbol in error.
bool simulate_symbol(TxMode mode, const CoopLinks& links,
                     const PhyConfig& cfg, const QamParams& qam, Rng& rng);

// High-SNR closed form for the cooperative symbol error rate, expressed
// in terms of the total power budget.
double ser_closed_form(const CoopLinks& links, const PhyConfig& cfg,
                       const QamParams& qam);

// Coding gain of the cooperative scheme: the SNR scale at which the
// asymptote crosses unity, ser ~ (gain * snr)^-2.
double coding_gain(const CoopLinks& links, const QamParams& qam);

}  // namespace coopgeo
