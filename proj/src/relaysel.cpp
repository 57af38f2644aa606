#include "coopgeo/relaysel.hpp"

#include <algorithm>

namespace coopgeo {

double relay_metric(const Position& s, const Position& f, const Position& r,
                    double p, const QamParams& qam) {
    return relay_metric(s, f, r, qam.a * qam.a, qam.bb, p);
}

int select_best(const std::vector<RelayCandidate>& candidates) {
    if (candidates.empty()) return -1;
    int best = 0;
    for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
        const auto& c = candidates[i];
        const auto& b = candidates[best];
        if (c.metric < b.metric || (c.metric == b.metric && c.id < b.id))
            best = i;
    }
    return best;
}

double normalize_metric(double m, double f_star, double f_max,
                        bool* clamped) {
    const double t = (m - f_star) / (f_max - f_star);
    if (clamped) *clamped = t < 0.0 || t > 1.0;
    return std::clamp(t, 0.0, 1.0);
}

double relay_timer(double normalized, double t_max, int nsa, Rng& rng) {
    return t_max * normalized + rng.uniform(2.0 * t_max / nsa);
}

}  // namespace coopgeo
