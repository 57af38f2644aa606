#pragma once

#include <vector>
#include <cstddef>

#include "coopgeo/geometry.hpp"
#include "coopgeo/phy.hpp"
#include "coopgeo/rng.hpp"

namespace coopgeo {

struct RelayCandidate {
    std::size_t id = 0;
    Position pos;
    double metric = 0.0;
    double normalized = 0.0;
    double timer = 0.0;
};

// Location-based relay quality a^2 * d(S,R)^p + bb * d(R,F)^p; lower is
// better (tracks the cooperative SER of using R between S and F).
double relay_metric(const Position& s, const Position& f, const Position& r,
                    double p, const QamParams& qam);

// Index of the candidate with the lowest metric; ties go to the lowest
// node id. Returns -1 for an empty set (no-relay signal).
int select_best(const std::vector<RelayCandidate>& candidates);

// Affine rescale of a metric value into [0, 1] given the best (f_star)
// and worst (f_max) achievable values over the relaying area. Values
// outside [f_star, f_max] clamp; *clamped reports that when non-null.
double normalize_metric(double m, double f_star, double f_max,
                        bool* clamped = nullptr);

// Relay contention timer: t_max * normalized + uniform[0, 2 t_max/nsa).
double relay_timer(double normalized, double t_max, int nsa, Rng& rng);

}  // namespace coopgeo
