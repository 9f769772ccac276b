#include "renorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renorm/sampling.hpp"

namespace renorm {

Functional numeric_gradient(const NormHandle& norm, const Point& x, double h_rel)
{
    const double h = h_rel * std::max(x.norm(), 1e-300);
    Functional g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Point a = x, b = x;
        a[i] += h;
        b[i] -= h;
        g[i] = (norm.eval(a) - norm.eval(b)) / (a[i] - b[i]);
    }
    return g;
}

double gradient_rel_error(const NormHandle& norm, const Point& x, double h_rel)
{
    if (!norm.grad) throw std::invalid_argument("norm has no analytic gradient");
    const Functional g = norm.grad(x);
    const Functional f = numeric_gradient(norm, x, h_rel);
    return (g - f).norm() / std::max(g.norm(), 1e-300);
}

CheckEntry gradient_check(const NormHandle& norm, const Point& x, double h_rel, double tol)
{
    CheckEntry e;
    e.id = "gradient_" + norm.name;
    const double err = gradient_rel_error(norm, x, h_rel);
    e.pass = err <= tol;
    e.measured = {{"rel_error", err}, {"x", std::vector<double>(x.data(), x.data() + x.size())}};
    e.tolerances = {{"rel_error", tol}, {"h_rel", h_rel}};
    return e;
}

CheckEntry equivalence_audit(const NormHandle& a, const NormHandle& b, double factor, int k, std::uint64_t seed,
                             const Space& s, double tol)
{
    if (!(factor > 0.0)) throw std::invalid_argument("equivalence factor must be positive");
    CounterRng rng(seed, 0, "equivalence_" + a.name + "_" + b.name);
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    std::size_t bad = 0;
    json witness = nullptr;
    for (int t = 0; t < k; ++t) {
        const Point x = sphere_point(rng, s) * std::exp(rng.uniform(-3.0, 3.0));
        const double na = a.eval(x), nb = b.eval(x);
        const double r = nb / na;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        if (na > nb * (1.0 + tol) || nb > factor * na * (1.0 + tol)) {
            ++bad;
            if (witness.is_null()) witness = std::vector<double>(x.data(), x.data() + x.size());
        }
    }
    CheckEntry e;
    e.id = "equivalence_" + a.name + "_" + b.name;
    e.pass = bad == 0;
    e.seed = seed;
    e.measured = {{"samples", k}, {"violations", bad}, {"min_ratio", rmin}, {"max_ratio", rmax}};
    if (!witness.is_null()) e.measured["witness"] = witness;
    e.tolerances = {{"factor", factor}, {"relative", tol}};
    return e;
}

std::vector<ModulusRow> modulus_along(const NormHandle& norm, const Point& x, const Point& h,
                                      const std::vector<double>& taus)
{
    const Point u = x / norm.eval(x);
    const Point v = h / norm.eval(h);
    std::vector<ModulusRow> rows;
    for (double tau : taus) {
        if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
        const double r = 0.5 * (norm.eval(u + tau * v) + norm.eval(u - tau * v) - 2.0);
        rows.push_back({tau, r, r / tau});
    }
    return rows;
}

std::vector<ModulusRow> smoothness_modulus_estimate(const NormHandle& norm, const std::vector<double>& taus, int k,
                                                    std::uint64_t seed, int d)
{
    CounterRng rng(seed, 0, "modulus_" + norm.name);
    std::vector<Point> xs, hs;
    for (int t = 0; t < k; ++t) {
        Point x(d), h(d);
        for (int i = 0; i < d; ++i) x[i] = rng.normal();
        for (int i = 0; i < d; ++i) h[i] = rng.normal();
        xs.push_back(x / norm.eval(x));
        hs.push_back(h / norm.eval(h));
    }
    std::vector<ModulusRow> rows;
    for (double tau : taus) {
        if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
        double best = 0.0;
        for (int t = 0; t < k; ++t)
            best = std::max(best, 0.5 * (norm.eval(xs[t] + tau * hs[t]) + norm.eval(xs[t] - tau * hs[t]) - 2.0));
        rows.push_back({tau, best, best / tau});
    }
    return rows;
}

json modulus_json(const std::vector<ModulusRow>& rows)
{
    json out = json::array();
    for (const auto& r : rows) out.push_back({{"tau", r.tau}, {"rho", r.rho}, {"rho_over_tau", r.ratio}});
    return out;
}

NormHandle base_norm_handle(const Space& s)
{
    return {"base", [&s](const Point& x) { return s.norm(x); }, [&s](const Point& x) { return s.grad(x); }};
}

}  // namespace renorm
