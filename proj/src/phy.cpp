#include "coopgeo/phy.hpp"

#include <cmath>
#include <stdexcept>

namespace coopgeo {

QamParams qam_params(int m) {
    if (m < 4) throw std::invalid_argument("qam_params: m must be >= 4");
    const int root = static_cast<int>(std::lround(std::sqrt(double(m))));
    if (root * root != m)
        throw std::invalid_argument("qam_params: m must be a perfect square");
    const double pi = 3.14159265358979323846;
    const double q = 1.0 - 1.0 / root;
    QamParams out;
    out.m = m;
    out.b = 3.0 / (2.0 * (m - 1));
    out.a = (m - 1.0) / (2.0 * m) + q * q / pi;
    out.bb = 3.0 * (m - 1.0) / (8.0 * m) + q * q / pi;
    return out;
}

double awgn_ser(double gamma, int m) {
    const int root = static_cast<int>(std::lround(std::sqrt(double(m))));
    const double q = 1.0 - 1.0 / root;
    const double x = std::sqrt(3.0 * gamma / (m - 1));
    const double qfunc = 0.5 * std::erfc(x / std::sqrt(2.0));
    return 4.0 * q * qfunc - 4.0 * q * q * qfunc * qfunc;
}

bool relay_decodes(double gamma, double threshold) { return gamma > threshold; }

double mean_channel_gain(double distance, double path_loss_exp) {
    return std::pow(distance, -path_loss_exp);
}

bool simulate_symbol(TxMode mode, const CoopLinks& links,
                     const PhyConfig& cfg, const QamParams& qam, Rng& rng) {
    if (mode == TxMode::Direct) {
        const double gamma =
            cfg.total_power * rng.exponential(links.var_sf) / cfg.noise_power;
        return rng.bernoulli(awgn_ser(gamma, qam.m));
    }
    const double px = cfg.phase_power();
    const double g_sf = px * rng.exponential(links.var_sf) / cfg.noise_power;
    const double g_sr = px * rng.exponential(links.var_sr) / cfg.noise_power;
    if (!relay_decodes(g_sr, cfg.decode_snr_threshold))
        return rng.bernoulli(awgn_ser(g_sf, qam.m));
    const double g_rf = px * rng.exponential(links.var_rf) / cfg.noise_power;
    // Maximal-ratio combining of the two received copies.
    return rng.bernoulli(awgn_ser(g_sf + g_rf, qam.m));
}

double ser_closed_form(const CoopLinks& links, const PhyConfig& cfg,
                       const QamParams& qam) {
    const double n0 = cfg.noise_power;
    const double p = cfg.total_power;
    return 4.0 * n0 * n0 /
           (qam.b * qam.b * p * p * links.var_sf) *
           (qam.a * qam.a / links.var_sr + qam.bb / links.var_rf);
}

double coding_gain(const CoopLinks& links, const QamParams& qam) {
    const double inner =
        qam.a * qam.a / links.var_sr + qam.bb / links.var_rf;
    return std::sqrt(qam.b * qam.b * links.var_sf / (16.0 * inner));
}

}  // namespace coopgeo
