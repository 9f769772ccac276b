#include "renorm/slices.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "renorm/rng.hpp"

namespace renorm {

bool slice_membership(const Slice& S, const Point& y, const Space& s)
{
    return s.norm(y) <= 1.0 && S.sign * S.psi.dot(y) > 1.0 - S.delta;
}

double diam_upper_bound(double L, double eps0, double delta)
{
    if (!(eps0 > 0.0)) throw std::invalid_argument("diameter bound needs eps0 > 0");
    return L * std::sqrt(8.0 * delta / eps0);
}

double diam_upper_bound(const Slice& S, const Space& s) { return diam_upper_bound(s.L, s.base.eps0, S.delta); }

Slice make_slice(const Space& s, const Point& x, double delta, int sign)
{
    Slice S;
    S.x = x;
    S.psi = s.grad(x);
    S.delta = delta;
    S.sign = sign;
    return S;
}

namespace {

// Parameter interval of {t : y + t v in the slice}, found by bisection on the ball and exactly on the halfspace.
bool chord(const Slice& S, const Space& s, const Point& y, const Vec& v, double& lo, double& hi)
{
    const double a = S.sign * S.psi.dot(v);
    const double b = S.sign * S.psi.dot(y) - (1.0 - S.delta);
    double tmin = -1e300, tmax = 1e300;
    if (a > 0) tmin = -b / a;
    else if (a < 0) tmax = -b / a;
    else if (b <= 0) return false;

    const double span = 4.0 / s.ell_sys;
    auto inside = [&](double t) { return s.norm(y + t * v) <= 1.0; };
    double up_in = 0.0, up_out = span;
    double dn_in = 0.0, dn_out = -span;
    for (int i = 0; i < 80; ++i) {
        const double m1 = 0.5 * (up_in + up_out);
        (inside(m1) ? up_in : up_out) = m1;
        const double m2 = 0.5 * (dn_in + dn_out);
        (inside(m2) ? dn_in : dn_out) = m2;
    }
    lo = std::max(tmin, dn_in);
    hi = std::min(tmax, up_in);
    return hi > lo;
}

}  // namespace

DiameterBound diam_monte_carlo(const Slice& S, const Space& s, int k, std::uint64_t seed)
{
    if (k < 2) throw std::invalid_argument("diam_monte_carlo needs k >= 2");
    DiameterBound out;
    out.samples = k;
    out.seed = seed;
    out.upper = diam_upper_bound(s.L, std::max(s.base.eps0, 1e-300), S.delta);
    CounterRng rng(seed, 0, "diam_monte_carlo");
    const int d = s.d;
    Point y = (1.0 - 0.5 * S.delta) * S.exposed();
    if (!slice_membership(S, y, s)) {
        out.empty_warning = true;
        return out;
    }
    std::vector<Point> pts;
    pts.reserve(k);
    const int burn = 50;
    for (int step = 0; static_cast<int>(pts.size()) < k; ++step) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = rng.normal();
        v /= v.norm();
        double lo, hi;
        if (!chord(S, s, y, v, lo, hi)) continue;
        // Chord ends lie in the closure of the slice, which has the same diameter.
        if (step >= burn) {
            pts.push_back(y + lo * v);
            if (static_cast<int>(pts.size()) < k) pts.push_back(y + hi * v);
        }
        y = y + rng.uniform(lo, hi) * v;
    }
    double best = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) best = std::max(best, s.norm(pts[i] - pts[j]));
    out.lower = best;
    return out;
}

double margin_for_diameter(double eps_target, double L, double eps0)
{
    if (!(eps_target > 0.0)) throw std::invalid_argument("eps_target must be positive");
    double delta = kDeltaMax;
    while (diam_upper_bound(L, eps0, delta) > 0.9 * eps_target) delta *= 0.5;
    return delta;
}

double margin_for_diameter(const Point&, const Functional&, double eps_target, const Space& s)
{
    return margin_for_diameter(eps_target, s.L, s.base.eps0);
}

double enlarge_margin(const std::vector<Slice>& omega, double eps_F, const Space& s)
{
    if (omega.empty()) return kEnlargeCap;
    double dmax = 0.0;
    for (const auto& S : omega) dmax = std::max(dmax, S.delta);
    auto ok = [&](double e) { return diam_upper_bound(s.L, s.base.eps0, dmax + e) < eps_F; };
    if (!ok(0.0)) throw std::invalid_argument("enlarge_margin: slice already exceeds eps_F");
    if (ok(kEnlargeCap)) return kEnlargeCap;
    double lo = 0.0, hi = kEnlargeCap;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace renorm
