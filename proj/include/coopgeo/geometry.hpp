#pragma once

#include <vector>
#include <cstddef>

namespace coopgeo {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double dist(const Position& a, const Position& b);
double dist_sq(const Position& a, const Position& b);

// Connectivity view of a node set under a unit-disk radio model.
struct Topology {
    std::vector<Position> pos;
    double radio_range = 0.25;

    std::size_t size() const { return pos.size(); }
    bool adjacent(std::size_t i, std::size_t j) const;
    std::vector<std::size_t> neighbors(std::size_t i) const;
};

// Whether S and D are in the same connected component.
bool connected(const Topology& topo, std::size_t s, std::size_t d);

enum class Area { PPA, NPA, OutOfRange };

// Progress class of candidate F relative to S and destination D.
// PPA iff F is in range of S and strictly closer to D than S is.
Area classify(const Position& s, const Position& d, const Position& f,
              double radio_range);

// Contention slot index for a positive-progress candidate. Slots
// [0, nsa/2) are reserved for this class; smaller index = more progress.
// Throws std::invalid_argument when the candidate is not in the PPA.
int csa_ppa(const Position& s, const Position& d, const Position& f,
            double radio_range, int nsa);

// Contention slot index for a negative-progress candidate; slots
// [nsa/2, nsa) with smaller index = closer to S.
// Throws std::invalid_argument when d(S,F) exceeds the radio range.
int csa_npa(const Position& s, const Position& f, double radio_range,
            int nsa);

enum class AreaShape { Lens, Reuleaux };

// Whether x lies in the relay-candidacy area between S and F: the lens
// (intersection of range-r disks around S and F) or a Reuleaux triangle
// on chord S-F with width d(S,F), apex on the chosen side.
bool in_relaying_area(const Position& s, const Position& f, const Position& x,
                      double radio_range, AreaShape shape,
                      bool apex_positive = true);

// Gabriel condition: w lies strictly inside the circle with diameter uv.
bool gabriel_violates(const Position& u, const Position& v, const Position& w);

// Minimizer of f(x) = a2*d(s,x)^p + b*d(x,f)^p over the segment [s,f].
// Closed form for p = 2; otherwise ternary search along the segment.
Position optimal_relay_point(const Position& s, const Position& f, double a2,
                             double b, double p = 2.0);

// Relay-quality objective a2*d(s,x)^p + b*d(x,f)^p.
double relay_metric(const Position& s, const Position& f, const Position& x,
                    double a2, double b, double p = 2.0);

// Argmax of the relay-quality objective over the boundary of the
// relaying area (the worst admissible relay position).
Position farthest_point(const Position& s, const Position& f,
                        double radio_range, AreaShape shape, double a2,
                        double b, double p = 2.0, bool apex_positive = true);

}  // namespace coopgeo
