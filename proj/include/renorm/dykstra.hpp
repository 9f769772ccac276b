#pragma once

#include <vector>

#include "renorm/space.hpp"

namespace renorm {

// {y : <a, y> <= b}
struct Halfspace {
    Vec a;
    double b = 0.0;
};

// Euclidean projection (system coordinates) onto the closed unit ball of N.
class BallProjector {
public:
    explicit BallProjector(const Space& s);
    Point operator()(const Point& p) const;

private:
    const Space* s_;
    bool quadratic_ = true;
    Mat V_;
    Vec lam_;
};

struct DykstraResult {
    Point q;
    int cycles = 0;
    bool converged = false;
};

// Euclidean projection onto B ∩ {halfspaces} by Dykstra's alternating projections.
DykstraResult dykstra_project(const Space& s, const Point& p, const std::vector<Halfspace>& hs, double tol = 1e-10,
                              int max_cycles = 200000);

}  // namespace renorm
