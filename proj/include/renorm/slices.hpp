#pragma once

#include <cstdint>
#include <vector>

#include "renorm/space.hpp"

namespace renorm {

// S(x, psi, delta) = {y in B : sign <psi, y> > 1 - delta}.
struct Slice {
    Point x;
    Functional psi;
    double delta = 0.0;
    int sign = 1;

    Point exposed() const { return sign > 0 ? Point(x) : Point(-x); }
    double depth(const Point& y) const { return sign * psi.dot(y) - (1.0 - delta); }
};

struct DiameterBound {
    double upper = 0.0;
    double lower = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
    bool empty_warning = false;
};

bool slice_membership(const Slice& S, const Point& y, const Space& s);

// Certified N-diameter bound L * sqrt(8 delta / eps0).
double diam_upper_bound(double L, double eps0, double delta);
double diam_upper_bound(const Slice& S, const Space& s);

// Max of N(y - z) over all pairs of k hit-and-run chord ends, which lie in the closure of the slice.
DiameterBound diam_monte_carlo(const Slice& S, const Space& s, int k, std::uint64_t seed);

constexpr double kDeltaMax = 0.5;
constexpr double kEnlargeCap = 0.1;

// Largest delta = kDeltaMax * 2^-j whose certified bound is at most 0.9 eps_target.
double margin_for_diameter(double eps_target, double L, double eps0);
double margin_for_diameter(const Point& x, const Functional& psi, double eps_target, const Space& s);

// Largest common delta_F keeping every enlarged slice below eps_F.
double enlarge_margin(const std::vector<Slice>& omega, double eps_F, const Space& s);

Slice make_slice(const Space& s, const Point& x, double delta, int sign = 1);

}  // namespace renorm
