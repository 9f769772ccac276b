#include "renorm/space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "renorm/rng.hpp"

namespace renorm {

std::string to_string(BaseKind k)
{
    switch (k) {
    case BaseKind::Euclidean: return "euclidean";
    case BaseKind::PNorm: return "pnorm";
    case BaseKind::Weighted: return "weighted";
    }
    return "unknown";
}

BaseKind base_kind_from_string(const std::string& s)
{
    if (s == "euclidean") return BaseKind::Euclidean;
    if (s == "pnorm" || s == "p-norm" || s == "p") return BaseKind::PNorm;
    if (s == "weighted") return BaseKind::Weighted;
    throw std::invalid_argument("unknown base norm kind: " + s);
}

std::vector<SubspaceId> enumerate_lattice(int d, int d_max)
{
    if (d < 1) throw std::invalid_argument("enumerate_lattice: d must be positive");
    if (d > d_max) throw std::invalid_argument("enumerate_lattice: d exceeds d_max");
    std::vector<SubspaceId> out;
    for (std::uint32_t m = 1; m < (1u << d); ++m) out.emplace_back(m);
    std::sort(out.begin(), out.end(), [](SubspaceId a, SubspaceId b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        return a.members() < b.members();
    });
    return out;
}

void BaseNorm::validate(int d) const
{
    if (!(eps0 >= 0.0) || !std::isfinite(eps0)) throw std::invalid_argument("eps0 must be finite and nonnegative");
    if (kind == BaseKind::PNorm && !(p > 1.0 && std::isfinite(p)))
        throw std::invalid_argument("p must exceed 1");
    if (kind == BaseKind::Weighted) {
        if (static_cast<int>(weights.size()) != d) throw std::invalid_argument("weights must have length d");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be positive");
    }
}

double BaseNorm::n0(const Vec& u) const
{
    switch (kind) {
    case BaseKind::Euclidean: return u.norm();
    case BaseKind::Weighted: {
        double s = 0.0;
        for (int i = 0; i < u.size(); ++i) s += weights[i] * u[i] * u[i];
        return std::sqrt(s);
    }
    case BaseKind::PNorm: {
        const double m = u.cwiseAbs().maxCoeff();
        if (m == 0.0) return 0.0;
        double s = 0.0;
        for (int i = 0; i < u.size(); ++i) s += std::pow(std::abs(u[i]) / m, p);
        return m * std::pow(s, 1.0 / p);
    }
    }
    return 0.0;
}

double BaseNorm::eval(const Vec& u) const
{
    const double a = n0(u);
    return std::sqrt(a * a + eps0 * u.squaredNorm());
}

Vec BaseNorm::half_sq_grad(const Vec& u) const
{
    Vec g(u.size());
    switch (kind) {
    case BaseKind::Euclidean: g = u; break;
    case BaseKind::Weighted:
        for (int i = 0; i < u.size(); ++i) g[i] = weights[i] * u[i];
        break;
    case BaseKind::PNorm: {
        const double a = n0(u);
        if (a == 0.0) {
            g.setZero();
            break;
        }
        for (int i = 0; i < u.size(); ++i) {
            const double r = std::abs(u[i]) / a;
            g[i] = (u[i] < 0 ? -1.0 : (u[i] > 0 ? 1.0 : 0.0)) * a * std::pow(r, p - 1.0);
        }
        break;
    }
    }
    return g + eps0 * u;
}

Vec BaseNorm::grad(const Vec& u) const
{
    const double n = eval(u);
    if (n == 0.0) throw std::invalid_argument("gradient of the norm at 0");
    return half_sq_grad(u) / n;
}

double BaseNorm::upper_constant(int d) const
{
    switch (kind) {
    case BaseKind::Euclidean: return std::sqrt(1.0 + eps0);
    case BaseKind::Weighted: return std::sqrt(*std::max_element(weights.begin(), weights.end()) + eps0);
    case BaseKind::PNorm:
        if (p >= 2.0) return std::sqrt(1.0 + eps0);
        return std::sqrt(std::pow(double(d), 2.0 / p - 1.0) + eps0);
    }
    return 1.0;
}

double BaseNorm::lower_constant(int d) const
{
    switch (kind) {
    case BaseKind::Euclidean: return std::sqrt(1.0 + eps0);
    case BaseKind::Weighted: return std::sqrt(*std::min_element(weights.begin(), weights.end()) + eps0);
    case BaseKind::PNorm:
        if (p <= 2.0) return std::sqrt(1.0 + eps0);
        return std::sqrt(std::pow(double(d), 2.0 / p - 1.0) + eps0);
    }
    return 1.0;
}

namespace {

struct BBResult {
    Vec x;
    double gnorm = 0.0;
    int iters = 0;
};

// Barzilai-Borwein descent with an Armijo safeguard for smooth convex objectives.
BBResult bb_minimize(const std::function<double(const Vec&)>& f, const std::function<Vec(const Vec&)>& grad, Vec x,
                     double gtol, int max_iter)
{
    Vec g = grad(x);
    double fx = f(x);
    double step = 1.0;
    Vec x_prev = x, g_prev = g;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (g.norm() <= gtol) break;
        if (it > 0) {
            const Vec s = x - x_prev;
            const Vec y = g - g_prev;
            const double sy = s.dot(y);
            step = sy > 0 ? s.squaredNorm() / sy : 1.0;
            step = std::clamp(step, 1e-12, 1e12);
        }
        double t = step;
        Vec x_new = x - t * g;
        double f_new = f(x_new);
        int backtracks = 0;
        while (f_new > fx - 1e-4 * t * g.squaredNorm() && backtracks < 60) {
            // Accept tiny nonmonotone steps once f is flat to rounding level.
            if (std::abs(f_new - fx) <= 1e-15 * std::max(1.0, std::abs(fx))) break;
            t *= 0.5;
            x_new = x - t * g;
            f_new = f(x_new);
            ++backtracks;
        }
        x_prev = x;
        g_prev = g;
        x = x_new;
        fx = f_new;
        g = grad(x);
        if ((x - x_prev).norm() == 0.0) break;
    }
    return {x, g.norm(), it};
}

}  // namespace

double Space::norm(const Point& x) const { return base.eval(to_external(x)); }

Functional Space::grad(const Point& x) const
{
    const Vec g = base.grad(to_external(x));
    return identity_frame ? g : Vec(E.transpose() * g);
}

Vec Space::half_sq_grad(const Point& x) const
{
    const Vec g = base.half_sq_grad(to_external(x));
    return identity_frame ? g : Vec(E.transpose() * g);
}

double Space::dual_norm(const Functional& phi) const
{
    if (quadratic) return std::sqrt(std::max(0.0, phi.dot(Q_inv * phi)));
    return dual_norm_external(base, identity_frame ? Vec(phi) : Vec(E_inv_t * phi));
}

double Space::restricted_dual(const Functional& phi, SubspaceId H) const
{
    return restricted_extension(phi, H).value;
}

Space::Extension Space::restricted_extension(const Functional& phi, SubspaceId H) const
{
    const std::vector<int> idx = H.members();
    const int k = static_cast<int>(idx.size());
    Extension out;
    out.ext = Functional::Zero(d);
    Vec c(k);
    for (int i = 0; i < k; ++i) c[i] = phi[idx[i]];
    if (c.cwiseAbs().maxCoeff() == 0.0) return out;
    auto embed = [&](const Vec& u) {
        Point p = Point::Zero(d);
        for (int i = 0; i < k; ++i) p[idx[i]] = u[i];
        return p;
    };
    if (quadratic) {
        Mat QH(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) QH(i, j) = Q(idx[i], idx[j]);
        const Vec u = QH.ldlt().solve(c);
        out.value = std::sqrt(std::max(0.0, c.dot(u)));
        out.ext = Q * embed(u);
        return out;
    }
    if (k == d) {
        out.value = dual_norm(phi);
        out.ext = phi;
        return out;
    }
    // Maximize <c,u> - N(u)^2/2 over span H; the maximizer has N(u) equal to the dual norm.
    auto f = [&](const Vec& u) { const double n = norm(embed(u)); return 0.5 * n * n - c.dot(u); };
    auto g = [&](const Vec& u) {
        const Vec h = half_sq_grad(embed(u));
        Vec o(k);
        for (int i = 0; i < k; ++i) o[i] = h[idx[i]] - c[i];
        return o;
    };
    const double cn = c.norm();
    const BBResult res = bb_minimize(f, g, Vec(c / (ell_sys * ell_sys)), 1e-13 * cn, 20000);
    const Point u = embed(res.x);
    const double n = norm(u);
    if (!(n > 0)) return out;
    out.value = c.dot(res.x) / n;
    out.ext = out.value * grad(u);
    return out;
}

Point Space::unit(int a) const
{
    Point e = Point::Zero(d);
    e[a] = 1.0;
    return e;
}


double dual_norm_external(const BaseNorm& base, const Vec& c)
{
    const double cn = c.norm();
    if (cn == 0.0) return 0.0;
    const int d = static_cast<int>(c.size());
    // max <c,u> - N(u)^2/2 equals dual(c)^2/2, attained where N(u) = dual(c).
    auto f = [&](const Vec& u) { const double n = base.eval(u); return 0.5 * n * n - c.dot(u); };
    auto g = [&](const Vec& u) { return Vec(base.half_sq_grad(u) - c); };
    CounterRng rng(0x5eed, 0, "dual_norm");
    double best = -1.0;
    bool converged = false;
    for (int r = 0; r < 8; ++r) {
        Vec u0(d);
        if (r == 0) {
            u0 = c / (1.0 + base.eps0);
        } else {
            for (int i = 0; i < d; ++i) u0[i] = rng.normal() * cn;
        }
        const BBResult res = bb_minimize(f, g, u0, 1e-13 * cn, 20000);
        const double n = base.eval(res.x);
        if (n > 0) best = std::max(best, c.dot(res.x) / n);
        if (res.gnorm <= 1e-7 * cn) converged = true;
    }
    if (!converged) throw std::runtime_error("dual_norm: no restart converged");
    return best;
}

Space normalize_system(const Mat& E, const Mat& Phi, const BaseNorm& base)
{
    const int d = static_cast<int>(E.rows());
    if (E.cols() != d || Phi.rows() != d || Phi.cols() != d) throw std::invalid_argument("system matrices must be d x d");
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension out of range");
    base.validate(d);
    Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(E)};
    if (lu.rank() < d) throw std::invalid_argument("singular basis matrix E");
    const double resid = (Phi * E - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (resid > 1e-10) throw std::invalid_argument("biorthogonality residual above tolerance");

    Space s;
    s.d = d;
    s.base = base;
    s.E = E;
    s.Phi = Phi;
    for (int a = 0; a < d; ++a) {
        const double n = base.eval(E.col(a));
        s.E.col(a) = E.col(a) / n;
        s.Phi.row(a) = Phi.row(a) * n;
    }
    s.identity_frame = (s.E - Mat::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0;
    s.E_inv_t = s.Phi.transpose();
    s.M = 0.0;
    for (int a = 0; a < d; ++a) s.M = std::max(s.M, dual_norm_external(base, s.Phi.row(a).transpose()));
    s.L = base.upper_constant(d);
    s.ell = base.lower_constant(d);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(s.E)};
    s.L_sys = s.L * svd.singularValues().maxCoeff();
    s.ell_sys = s.ell * svd.singularValues().minCoeff();
    s.quadratic = base.kind != BaseKind::PNorm;
    Mat D = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a) D(a, a) = (base.kind == BaseKind::Weighted ? base.weights[a] : 1.0) + base.eps0;
    s.Q = s.E.transpose() * D * s.E;
    s.Q_inv = s.Q.inverse();
    return s;
}

Space make_space(int d, const BaseNorm& base)
{
    const Mat I = Mat::Identity(d, d);
    return normalize_system(I, I, base);
}

double norm_eval(const Space& s, const Point& x) { return s.norm(x); }

Functional norming_functional(const Space& s, const Point& x)
{
    if (x.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("norming functional of 0");
    return s.grad(x);
}

double dual_norm_eval(const Space& s, const Functional& phi) { return s.dual_norm(phi); }

Point restrict_to(const Point& x, SubspaceId F)
{
    Point y = x;
    for (int a = 0; a < x.size(); ++a)
        if (!F.contains(a)) y[a] = 0.0;
    return y;
}

DistResult dist_to_subspace(const Space& s, const Point& x, SubspaceId F)
{
    const int d = s.d;
    std::vector<int> idx;
    for (int a = 0; a < d; ++a)
        if (F.contains(a)) idx.push_back(a);
    if (static_cast<int>(idx.size()) == d) return {0.0, x};
    if (idx.empty()) return {s.norm(x), Point::Zero(d)};

    auto embed = [&](const Vec& w) {
        Point p = Point::Zero(d);
        for (std::size_t i = 0; i < idx.size(); ++i) p[idx[i]] = w[i];
        return p;
    };
    auto f = [&](const Vec& w) { const double n = s.norm(x - embed(w)); return 0.5 * n * n; };
    auto g = [&](const Vec& w) {
        const Vec h = s.half_sq_grad(x - embed(w));
        Vec out(static_cast<int>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) out[i] = -h[idx[i]];
        return out;
    };
    Vec w0(static_cast<int>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) w0[i] = x[idx[i]];
    const BBResult res = bb_minimize(f, g, w0, 1e-12, 20000);
    const Point w = embed(res.x);
    return {s.norm(x - w), w};
}

CheckEntry check_biorthogonal_bounds(const Space& s, const Point& x, SubspaceId F, SubspaceId G)
{
    CheckEntry e;
    e.id = "biorthogonal_bounds" + F.label() + G.label();
    const int n = F.dim();
    const SubspaceId FG = F.intersect(G);
    const double dG = dist_to_subspace(s, x, G).dist;
    const double dFG = FG.empty() ? s.norm(x) : dist_to_subspace(s, x, FG).dist;
    bool ok = dFG <= n * s.M * dG + 1e-8;
    e.measured["dist_x_FG"] = dFG;
    e.measured["dist_x_G"] = dG;
    e.measured["nM"] = n * s.M;
    e.tolerances["additive"] = 1e-8;
    if (FG.empty() && std::abs(s.norm(x) - 1.0) <= 1e-12) {
        e.measured["lower_bound"] = 1.0 / (n * s.M);
        ok = ok && dG >= 1.0 / (n * s.M) - 1e-8;
    }
    e.pass = ok;
    return e;
}

}  // namespace renorm
