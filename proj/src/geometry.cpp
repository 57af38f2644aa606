#include "coopgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace coopgeo {

double dist_sq(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double dist(const Position& a, const Position& b) {
    return std::sqrt(dist_sq(a, b));
}

bool Topology::adjacent(std::size_t i, std::size_t j) const {
    if (i == j) return false;
    return dist(pos[i], pos[j]) <= radio_range;
}

std::vector<std::size_t> Topology::neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < pos.size(); ++j)
        if (adjacent(i, j)) out.push_back(j);
    return out;
}

bool connected(const Topology& topo, std::size_t s, std::size_t d) {
    if (s == d) return true;
    std::vector<char> seen(topo.size(), 0);
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        for (std::size_t v : topo.neighbors(u)) {
            if (seen[v]) continue;
            if (v == d) return true;
            seen[v] = 1;
            q.push(v);
        }
    }
    return false;
}

Area classify(const Position& s, const Position& d, const Position& f,
              double radio_range) {
    if (dist(s, f) > radio_range) return Area::OutOfRange;
    return dist(f, d) < dist(s, d) ? Area::PPA : Area::NPA;
}

int csa_ppa(const Position& s, const Position& d, const Position& f,
            double radio_range, int nsa) {
    if (classify(s, d, f, radio_range) != Area::PPA)
        throw std::invalid_argument("csa_ppa: candidate not in the PPA");
    const double progress = dist(s, d) - dist(f, d);
    const int raw = static_cast<int>(
        std::floor(nsa * (radio_range - progress) / (2.0 * radio_range)));
    return std::clamp(raw, 0, nsa / 2 - 1);
}

int csa_npa(const Position& s, const Position& f, double radio_range,
            int nsa) {
    if (dist(s, f) > radio_range)
        throw std::invalid_argument("csa_npa: candidate out of range");
    const int n = nsa / 2;
    const double u = std::sqrt(static_cast<double>(n)) * dist(s, f) / radio_range;
    const int raw = static_cast<int>(std::floor(u * u)) + n;
    return std::clamp(raw, n, nsa - 1);
}

bool in_relaying_area(const Position& s, const Position& f, const Position& x,
                      double radio_range, AreaShape shape, bool apex_positive) {
    if (shape == AreaShape::Lens)
        return dist(s, x) <= radio_range && dist(f, x) <= radio_range;

    // Reuleaux triangle of width d(S,F) on chord S-F: within that width of
    // S, F and of the apex of the equilateral triangle on the chosen side.
    const double w = dist(s, f);
    const double mx = 0.5 * (s.x + f.x);
    const double my = 0.5 * (s.y + f.y);
    const double h = std::sqrt(3.0) / 2.0;
    // Unit normal to S-F; apex_positive selects the left side of S->F.
    double nx = -(f.y - s.y) / w;
    double ny = (f.x - s.x) / w;
    if (!apex_positive) {
        nx = -nx;
        ny = -ny;
    }
    const Position apex{mx + h * w * nx, my + h * w * ny};
    return dist(s, x) <= w && dist(f, x) <= w && dist(apex, x) <= w;
}

bool gabriel_violates(const Position& u, const Position& v, const Position& w) {
    return dist_sq(u, w) + dist_sq(v, w) < dist_sq(u, v);
}

double relay_metric(const Position& s, const Position& f, const Position& x,
                    double a2, double b, double p) {
    return a2 * std::pow(dist(s, x), p) + b * std::pow(dist(x, f), p);
}

Position optimal_relay_point(const Position& s, const Position& f, double a2,
                             double b, double p) {
    if (p == 2.0) {
        // Quadratic objective: minimizer is the weighted mean of s and f.
        return {(a2 * s.x + b * f.x) / (a2 + b),
                (a2 * s.y + b * f.y) / (a2 + b)};
    }
    // Objective is strictly convex along the segment; ternary search.
    double lo = 0.0, hi = 1.0;
    auto at = [&](double t) {
        return Position{s.x + t * (f.x - s.x), s.y + t * (f.y - s.y)};
    };
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (relay_metric(s, f, at(m1), a2, b, p) <
            relay_metric(s, f, at(m2), a2, b, p))
            hi = m2;
        else
            lo = m1;
    }
    return at(0.5 * (lo + hi));
}

Position farthest_point(const Position& s, const Position& f,
                        double radio_range, AreaShape shape, double a2,
                        double b, double p, bool apex_positive) {
    // The region boundary is made of circular arcs around these centers,
    // all with the same radius; the region itself is the intersection of
    // the corresponding disks.
    std::vector<Position> centers;
    double radius;
    if (shape == AreaShape::Lens) {
        centers = {s, f};
        radius = radio_range;
    } else {
        const double w = dist(s, f);
        const double h = std::sqrt(3.0) / 2.0;
        double nx = -(f.y - s.y) / w;
        double ny = (f.x - s.x) / w;
        if (!apex_positive) {
            nx = -nx;
            ny = -ny;
        }
        centers = {s, f,
                   {0.5 * (s.x + f.x) + h * w * nx,
                    0.5 * (s.y + f.y) + h * w * ny}};
        radius = w;
    }

    constexpr int kSamples = 10000;
    constexpr double kPi = 3.14159265358979323846;
    const double eps = 1e-9 * radius;
    double best_val = -1.0;
    Position best = s;
    for (const Position& c : centers) {
        for (int i = 0; i < kSamples; ++i) {
            const double ang = 2.0 * kPi * i / kSamples;
            const Position x{c.x + radius * std::cos(ang),
                             c.y + radius * std::sin(ang)};
            bool inside = true;
            for (const Position& other : centers)
                if (dist(other, x) > radius + eps) inside = false;
            if (!inside) continue;
            const double v = relay_metric(s, f, x, a2, b, p);
            if (v > best_val) {
                best_val = v;
                best = x;
            }
        }
    }
    return best;
}

}  // namespace coopgeo
