#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coopgeo/phy.hpp"
#include "coopgeo/rng.hpp"

using namespace coopgeo;

TEST_CASE("qam parameter formulas") {
    const QamParams q4 = qam_params(4);
    CHECK(q4.b == doctest::Approx(0.5));
    CHECK(q4.a == doctest::Approx(0.4545774715));
    CHECK(q4.bb == doctest::Approx(0.3608274715));

    const QamParams q16 = qam_params(16);
    CHECK(q16.b == doctest::Approx(0.1));
    CHECK(q16.a == doctest::Approx(0.46875 + 0.5625 / 3.14159265358979323846));
    CHECK(q16.bb == doctest::Approx(0.3515625 + 0.5625 / 3.14159265358979323846));

    for (int m : {4, 16, 64, 256}) {
        const QamParams q = qam_params(m);
        CHECK(q.a > q.bb);
        CHECK(q.bb > 0.0);
        CHECK(q.a < 1.0);
        CHECK(q.bb < 1.0);
    }
    CHECK_THROWS_AS(qam_params(8), std::invalid_argument);
    CHECK_THROWS_AS(qam_params(2), std::invalid_argument);
    CHECK_THROWS_AS(qam_params(0), std::invalid_argument);
}

namespace {

// Baseband QPSK oracle: two BPSK rails in Gaussian noise; a symbol is
// wrong when either rail flips. Independent of the closed-form path.
double qpsk_mc_ser(double gamma, long n, Rng& rng) {
    const double sigma = 1.0 / std::sqrt(gamma);
    long errors = 0;
    for (long i = 0; i < n; ++i) {
        // Box-Muller
        const double u1 = 1.0 - rng.uniform();
        const double u2 = rng.uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double z1 = mag * std::cos(2 * 3.14159265358979323846 * u2);
        const double z2 = mag * std::sin(2 * 3.14159265358979323846 * u2);
        // each rail carries half the symbol energy
        const double amp = 1.0 / std::sqrt(2.0);
        if (amp + sigma * z1 / std::sqrt(2.0) < 0 ||
            amp + sigma * z2 / std::sqrt(2.0) < 0)
            ++errors;
    }
    return double(errors) / double(n);
}

}  // namespace

TEST_CASE("awgn symbol error rate") {
    CHECK(awgn_ser(0.0, 4) == doctest::Approx(0.75));
    CHECK(awgn_ser(1e9, 4) < 1e-12);
    // decreasing in SNR
    double prev = 1.0;
    for (double g = 0.1; g < 100; g *= 1.5) {
        const double s = awgn_ser(g, 4);
        CHECK(s < prev);
        prev = s;
    }
    // cross-check against the baseband QPSK Monte Carlo oracle
    Rng rng(2024);
    for (double g : {1.0, 4.0, 10.0}) {
        const double mc = qpsk_mc_ser(g, 400000, rng);
        CHECK(awgn_ser(g, 4) == doctest::Approx(mc).epsilon(0.05));
    }
}

TEST_CASE("relay decode threshold") {
    CHECK(relay_decodes(1.0, 0.9));
    CHECK(!relay_decodes(0.9, 0.9));  // strict
    CHECK(!relay_decodes(0.5, 0.9));
    // default tracks a/b of 4-QAM
    const PhyConfig cfg;
    const QamParams q = qam_params(4);
    CHECK(cfg.decode_snr_threshold == doctest::Approx(q.a / q.b));
}

TEST_CASE("closed-form cooperative SER") {
    const QamParams q = qam_params(4);
    PhyConfig cfg;
    cfg.total_power = 50.0;
    const CoopLinks unit;
    CHECK(ser_closed_form(unit, cfg, q) == doctest::Approx(3.632e-3).epsilon(1e-3));
    // power^-2 scaling
    PhyConfig twice = cfg;
    twice.total_power = 100.0;
    CHECK(ser_closed_form(unit, twice, q) ==
          doctest::Approx(ser_closed_form(unit, cfg, q) / 4.0));
    // source->relay limit leaves only the combined-branch term
    CoopLinks lim;
    lim.var_sr = 1e15;
    CHECK(ser_closed_form(lim, cfg, q) ==
          doctest::Approx(4.0 * q.bb / (q.b * q.b * 2500.0)));
}

TEST_CASE("coding gain") {
    const QamParams q = qam_params(4);
    const CoopLinks unit;
    const double gain = coding_gain(unit, q);
    CHECK(gain == doctest::Approx(0.16594).epsilon(1e-3));
    // identity: the asymptote crosses the closed form at twice the
    // per-phase budget
    PhyConfig cfg;
    cfg.total_power = 50.0;
    const double gamma = 2.0 * cfg.total_power / cfg.noise_power;
    CHECK(1.0 / ((gain * gamma) * (gain * gamma)) ==
          doctest::Approx(ser_closed_form(unit, cfg, q)));
    // homogeneity: scaling every variance by c scales the gain by c
    for (double c : {0.5, 2.0, 7.0}) {
        CoopLinks scaled{c, c, c};
        CHECK(coding_gain(scaled, q) == doctest::Approx(c * gain));
    }
}

namespace {

long long count_symbol_errors(TxMode mode, const CoopLinks& links,
                              const PhyConfig& cfg, const QamParams& q,
                              long long n, Rng& rng) {
    long long e = 0;
    for (long long i = 0; i < n; ++i)
        if (simulate_symbol(mode, links, cfg, q, rng)) ++e;
    return e;
}

// Variance-reduced SER estimate: averages the conditional symbol error
// probability over fading draws instead of drawing the error itself.
double coop_ser_smoothed(const CoopLinks& links, const PhyConfig& cfg,
                         const QamParams& q, long long n, Rng& rng) {
    const double px = cfg.phase_power();
    double acc = 0.0;
    for (long long i = 0; i < n; ++i) {
        const double g_sf = px * rng.exponential(links.var_sf) / cfg.noise_power;
        const double g_sr = px * rng.exponential(links.var_sr) / cfg.noise_power;
        if (!relay_decodes(g_sr, cfg.decode_snr_threshold)) {
            acc += awgn_ser(g_sf, q.m);
        } else {
            const double g_rf =
                px * rng.exponential(links.var_rf) / cfg.noise_power;
            acc += awgn_ser(g_sf + g_rf, q.m);
        }
    }
    return acc / double(n);
}

}  // namespace

TEST_CASE("cooperation never hurts when the relay always decodes") {
    const QamParams q = qam_params(4);
    CoopLinks links;
    links.var_sr = 1e12;  // relay effectively always above threshold
    for (double snr_db : {10.0, 20.0, 30.0}) {
        PhyConfig coop_cfg;
        coop_cfg.total_power = std::pow(10.0, snr_db / 10.0);
        PhyConfig direct_half = coop_cfg;
        direct_half.total_power = coop_cfg.phase_power();

        // Deterministic dominance on shared fading draws: combining a
        // non-negative relay branch cannot raise the conditional SER.
        Rng rng(99);
        const double px = coop_cfg.phase_power();
        for (int i = 0; i < 1000; ++i) {
            const double e_sf = rng.exponential(1.0);
            const double e_rf = rng.exponential(links.var_rf);
            CHECK(awgn_ser(px * e_sf + px * e_rf, q.m) <=
                  awgn_ser(px * e_sf, q.m));
        }

        // Paired Monte Carlo on the public entry point.
        Rng ra(1000 + int(snr_db)), rb(1000 + int(snr_db));
        const long long n = 1000000;
        const long long coop_err =
            count_symbol_errors(TxMode::Coop, links, coop_cfg, q, n, ra);
        const long long direct_err =
            count_symbol_errors(TxMode::Direct, links, direct_half, q, n, rb);
        // allow 5 sigma of the direct count for sampling noise
        const double slack = 5.0 * std::sqrt(double(direct_err) + 1.0);
        CHECK(double(coop_err) <= double(direct_err) + slack);
    }
}

TEST_CASE("closed form is tight at high SNR") {
    const QamParams q = qam_params(4);
    const CoopLinks unit;
    PhyConfig cfg;
    cfg.total_power = std::pow(10.0, 25.0 / 10.0);
    Rng rng(7);
    const long long n = 20000000;
    const long long err =
        count_symbol_errors(TxMode::Coop, unit, cfg, q, n, rng);
    const double mc = double(err) / double(n);
    const double cf = ser_closed_form(unit, cfg, q);
    CHECK(std::abs(mc / cf - 1.0) < 0.15);
}

TEST_CASE("diversity slopes") {
    const QamParams q = qam_params(4);
    const CoopLinks unit;
    const std::vector<double> snrs{20.0, 25.0, 30.0};

    auto fit_slope = [&](const std::vector<double>& ys) {
        // least squares on (snr_db, log10 ser)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < snrs.size(); ++i) {
            sx += snrs[i];
            sy += ys[i];
            sxx += snrs[i] * snrs[i];
            sxy += snrs[i] * ys[i];
        }
        const double n = double(snrs.size());
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };

    std::vector<double> coop_log, direct_log;
    for (double snr : snrs) {
        PhyConfig cfg;
        cfg.total_power = std::pow(10.0, snr / 10.0);
        Rng rng(31 + int(snr));
        coop_log.push_back(
            std::log10(coop_ser_smoothed(unit, cfg, q, 2000000, rng)));
        long long derr = 0;
        const long long n = 1000000;
        derr = count_symbol_errors(TxMode::Direct, unit, cfg, q, n, rng);
        direct_log.push_back(std::log10(double(derr) / double(n)));
    }
    const double coop_slope = fit_slope(coop_log);
    const double direct_slope = fit_slope(direct_log);
    CHECK(coop_slope > -0.24);
    CHECK(coop_slope < -0.16);
    CHECK(direct_slope > -0.13);
    CHECK(direct_slope < -0.07);
}
