#include "renorm/dykstra.hpp"

#include <algorithm>
#include <cmath>

namespace renorm {

BallProjector::BallProjector(const Space& s) : s_(&s), quadratic_(s.quadratic)
{
    if (quadratic_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(s.Q)};
        V_ = es.eigenvectors();
        lam_ = es.eigenvalues();
    }
}

Point BallProjector::operator()(const Point& p) const
{
    const Space& s = *s_;
    if (s.norm(p) <= 1.0) return p;
    if (quadratic_) {
        // q = (I + mu Q)^-1 p with q^T Q q = 1; f(mu) is decreasing in mu.
        const Vec pt = V_.transpose() * p;
        auto f = [&](double mu) {
            double acc = 0.0;
            for (int i = 0; i < pt.size(); ++i) {
                const double r = pt[i] / (1.0 + mu * lam_[i]);
                acc += lam_[i] * r * r;
            }
            return acc - 1.0;
        };
        double lo = 0.0, hi = 1.0;
        while (f(hi) > 0.0) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > 0.0 ? lo : hi) = mid;
        }
        Vec qt(pt.size());
        for (int i = 0; i < pt.size(); ++i) qt[i] = pt[i] / (1.0 + hi * lam_[i]);
        return V_ * qt;
    }
    // Penalized subproblem argmin |q-p|^2/2 + mu N(q)^2/2, then bisection on mu.
    auto solve = [&](double mu) {
        Point q = p / s.norm(p);
        for (int it = 0; it < 5000; ++it) {
            const Vec g = q - p + mu * s.half_sq_grad(q);
            if (g.norm() <= 1e-15 * (1.0 + p.norm())) break;
            q -= g / (1.0 + mu * s.L_sys * s.L_sys * 4.0);
        }
        return q;
    };
    double lo = 0.0, hi = 1.0;
    while (s.norm(solve(hi)) > 1.0) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (s.norm(solve(mid)) > 1.0 ? lo : hi) = mid;
    }
    return solve(hi);
}

DykstraResult dykstra_project(const Space& s, const Point& p, const std::vector<Halfspace>& hs, double tol, int max_cycles)
{
    const BallProjector ball(s);
    const int m = static_cast<int>(hs.size()) + 1;
    std::vector<Vec> inc(m, Vec::Zero(s.d));
    Point y = p;
    DykstraResult out;
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        double change = 0.0;
        for (int k = 0; k < m; ++k) {
            const Point z = y + inc[k];
            Point proj;
            if (k == 0) {
                proj = ball(z);
            } else {
                const Halfspace& h = hs[k - 1];
                const double viol = h.a.dot(z) - h.b;
                proj = viol > 0.0 ? Point(z - viol / h.a.squaredNorm() * h.a) : z;
            }
            inc[k] = z - proj;
            change = std::max(change, (proj - y).norm());
            y = proj;
        }
        out.cycles = cycle + 1;
        if (change <= tol) {
            out.converged = true;
            break;
        }
    }
    out.q = y;
    return out;
}

}  // namespace renorm
