#include "renorm/lur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "renorm/bump.hpp"
#include "renorm/sampling.hpp"
#include "renorm/verify.hpp"

namespace renorm {

std::vector<LambdaIndex> enumerate_lambda_n(int d, int n, int d_max)
{
    if (d < 1 || d > d_max) throw std::invalid_argument("enumerate_lambda_n: dimension out of range");
    if (n < 1) throw std::invalid_argument("enumerate_lambda_n: n must be positive");
    std::vector<LambdaIndex> out;
    for (SubspaceId A : enumerate_lattice(d, d_max)) {
        if (A.dim() > n) continue;
        for (std::uint32_t b = 1; b <= A.mask; ++b)
            if ((b & ~A.mask) == 0) out.push_back({A, SubspaceId(b)});
    }
    return out;
}

LurParams LurParams::defaults(int K, double eps)
{
    LurParams p;
    p.K = K;
    p.eps = eps;
    p.rho.assign(K, 0.25);
    p.theta.assign(K, std::vector<double>(K));
    p.kappa.assign(K, std::vector<double>(K));
    for (int n = 1; n <= K; ++n)
        for (int m = 1; m <= K; ++m) {
            p.theta[n - 1][m - 1] = 1.0 / (m + 1);
            p.kappa[n - 1][m - 1] = p.rho[n - 1] / (m + 1);
        }
    return p;
}

void LurParams::validate() const
{
    if (K < 1 || K > 64) throw std::invalid_argument("lur: K must lie in [1, 64]");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("lur: eps must lie in (0, 1)");
    if (rho.size() != std::size_t(K) || theta.size() != std::size_t(K) || kappa.size() != std::size_t(K))
        throw std::invalid_argument("lur: parameter tables must have K rows");
    for (int n = 1; n <= K; ++n) {
        const double r = rho[n - 1];
        if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("lur: rho_n must lie in (0, 1/2)");
        if (theta[n - 1].size() != std::size_t(K) || kappa[n - 1].size() != std::size_t(K))
            throw std::invalid_argument("lur: parameter tables must be K x K");
        for (int m = 1; m <= K; ++m) {
            const double th = theta[n - 1][m - 1], ka = kappa[n - 1][m - 1];
            if (!(th > 0.0 && th < 1.0)) throw std::invalid_argument("lur: theta_nm must lie in (0, 1)");
            if (!(ka > 0.0 && ka < r)) throw std::invalid_argument("lur: kappa_nm must lie in (0, rho_n)");
        }
    }
}

double LurParams::rho_n(int n) const { return n <= int(rho.size()) ? rho[n - 1] : 0.25; }

double LurParams::theta_nm(int n, int m) const
{
    if (n <= int(theta.size()) && m <= int(theta[n - 1].size())) return theta[n - 1][m - 1];
    return 1.0 / (m + 1);
}

double LurParams::kappa_nm(int n, int m) const
{
    if (n <= int(kappa.size()) && m <= int(kappa[n - 1].size())) return kappa[n - 1][m - 1];
    return rho_n(n) / (m + 1);
}

json LurParams::to_json() const
{
    return {{"K", K}, {"eps", eps}, {"rho_n", rho}, {"theta_nm", theta}, {"kappa_nm", kappa}};
}

double g_eval(double t, double s)
{
    if (!(t > 0.0)) return 0.0;
    return std::exp(-10.0 / t) * (s * s / 100.0 + s / 10.0 + 1.0);
}

double g_nml_eval(int n, int m, int l, double t, double s, const LurParams& p, double M)
{
    const double c = 1.0 + n * M;
    return g_eval((t - double(l) / n) / c, p.theta_nm(n, m) * s / c);
}

double ceil_seminorm(const std::vector<double>&) { return 0.0; }

bool in_a_eta(double eta, const std::vector<double>& z)
{
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, std::abs(v));
    return ceil_seminorm(z) < (1.0 - eta) * zmax;
}

namespace {

double phi_eta_at(double eta, const std::vector<double>& z, double t)
{
    double sum = 0.0;
    for (double v : z) sum += psi_eta_eval(eta, std::abs(v) / t);
    return sum;
}

}  // namespace

double z_eta_eval(double eta, const std::vector<double>& z)
{
    if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("z_eta: eta must lie in (0, 1/2)");
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, std::abs(v));
    if (zmax == 0.0) return 0.0;
    const double cut = (1.0 - eta) * zmax;
    int above = 0;
    for (double v : z)
        if (std::abs(v) > cut) ++above;
    // Every other term sits in the flat part of psi_eta at t = |z|_inf.
    if (above == 1) return zmax;
    double lo = zmax, hi = zmax / (1.0 - eta);
    while ((1.0 - eta) * hi > zmax) hi = std::nextafter(hi, 0.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        (phi_eta_at(eta, z, mid) > 1.0 ? lo : hi) = mid;
    }
    return hi;
}

LurNorm::LurNorm(const Space& s, NormHandle amb, LurParams p)
    : space(&s), ambient(std::move(amb)), params(std::move(p))
{
    params.validate();
    for (int n = 1; n <= params.K; ++n) lambda.push_back(enumerate_lambda_n(s.d, n));
    ambient_unit_max = 0.0;
    for (int a = 0; a < s.d; ++a) ambient_unit_max = std::max(ambient_unit_max, ambient.eval(s.unit(a)));
    // For ambient norms dominating N: |y_a| <= M, every residual stays below R and the
    // shifted first argument of g below 1, so Z_eta(H_nm y) <= g(1, R / (1 + M)) / (1 - eta).
    const double R = 1.0 + s.d * s.M * ambient_unit_max;
    z_envelope = 2.0 * g_eval(1.0, R / (1.0 + s.M));
}

LurRay lur_ray(const LurNorm& L, const Point& x)
{
    const int d = L.space->d;
    LurRay ray;
    ray.x = x;
    ray.ambient = L.ambient.eval(x);
    ray.residual.assign(std::size_t(1) << d, ray.ambient);
    for (std::uint32_t b = 1; b < (1u << d); ++b) {
        Point r = x;
        for (int a = 0; a < d; ++a)
            if ((b >> a) & 1u) r[a] = 0.0;
        ray.residual[b] = L.ambient.eval(r);
    }
    return ray;
}

namespace {

// H_nm components along the ray at x * scale.
void h_components(const LurNorm& L, const LurRay& ray, double scale, int n, int m, std::vector<double>& out)
{
    const int d = L.space->d;
    const double M = L.space->M;
    double xi_abs[kMaxDim];
    for (int a = 0; a < d; ++a) xi_abs[a] = xi_eval(n, std::abs(ray.x[a] * scale));
    const auto& lam = L.lambda[n - 1];
    out.resize(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const SubspaceId A = lam[i].A, B = lam[i].B;
        double t = 0.0;
        for (int a = 0; a < d; ++a)
            if (A.contains(a)) t += xi_abs[a];
        const int l = A.dim();
        if (t <= double(l) / n) {
            out[i] = 0.0;
            continue;
        }
        out[i] = g_nml_eval(n, m, l, t, xi_eval(n, ray.residual[B.mask] * scale), L.params, M);
    }
}

// Calls fn(j, n, m, J_jnm) for 1 <= j, n, m <= K.
template <class Fn>
void for_components(const LurNorm& L, const LurRay& ray, double scale, Fn&& fn)
{
    const int K = L.params.K;
    std::vector<double> H;
    for (int n = 1; n <= K; ++n)
        for (int m = 1; m <= K; ++m) {
            h_components(L, ray, scale, n, m, H);
            const double eta = L.params.eta_nm(n, m);
            double hmax = 0.0;
            for (double v : H) hmax = std::max(hmax, v);
            double Z = -1.0;
            for (int j = 1; j <= K; ++j) {
                double c = 0.0;
                // Z_eta(H) <= |H|_inf / (1 - eta), below the flat radius 1/j of xi_j.
                if (hmax / (1.0 - eta) > 1.0 / j) {
                    if (Z < 0.0) Z = in_a_eta(eta, H) ? z_eta_eval(eta, H) : 0.0;
                    c = xi_eval(j, Z);
                }
                fn(j, n, m, c);
            }
        }
}

double weight(int j, int n, int m) { return std::ldexp(1.0, -(j + n + m)); }

}  // namespace

std::vector<double> h_nm_eval(const LurNorm& L, int n, int m, const Point& y)
{
    if (n < 1 || n > L.params.K) throw std::invalid_argument("h_nm: n out of range");
    std::vector<double> H;
    h_components(L, lur_ray(L, y), 1.0, n, m, H);
    return H;
}

double j_component_eval(const LurNorm& L, int j, int n, int m, const Point& y)
{
    const std::vector<double> H = h_nm_eval(L, n, m, y);
    const double eta = L.params.eta_nm(n, m);
    return xi_eval(j, in_a_eta(eta, H) ? z_eta_eval(eta, H) : 0.0);
}

JValue j_eval(const LurNorm& L, const LurRay& ray, double scale)
{
    const double amb = ray.ambient * scale;
    if (!(amb < 1.0)) throw std::domain_error("J is defined on the open unit ball");
    const int K = L.params.K;
    const double eps = L.params.eps;
    double sum = 0.0;
    for_components(L, ray, scale, [&](int j, int n, int m, double c) { sum += weight(j, n, m) * c * c; });
    JValue out;
    out.value = std::sqrt(amb * amb + eps * sum);
    const double inside = std::pow(1.0 - std::ldexp(1.0, -K), 2);
    out.tail_uniform = eps * 4.0 * (1.0 - inside * (1.0 - std::ldexp(1.0, -K)));
    // xi_j(Z) <= max(0, Z - 1/j); terms with j > K vanish below j0.
    const double zb = L.z_envelope;
    double env = 0.0;
    for (int j = 1; j <= K; ++j) {
        const double b = std::min(2.0, std::max(0.0, zb - 1.0 / j));
        env += std::ldexp(b * b, -j) * (1.0 - inside);
    }
    const double j0 = std::max(double(K + 1), std::floor(1.0 / zb) + 1.0);
    const double bj = std::min(2.0, zb);
    env += j0 > 2000.0 ? 0.0 : bj * bj * std::ldexp(1.0, 1 - int(j0));
    out.tail_envelope = eps * env;
    return out;
}

JValue j_eval(const LurNorm& L, const Point& y) { return j_eval(L, lur_ray(L, y), 1.0); }

double lur_norm_eval(const LurNorm& L, const Point& x)
{
    const LurRay ray = lur_ray(L, x);
    if (ray.ambient == 0.0) return 0.0;
    const double eps = L.params.eps;
    const double level = 1.0 - eps;
    double lo = ray.ambient / level;
    double hi = std::sqrt(1.0 + 4.0 * eps) * ray.ambient / level;
    if (j_eval(L, ray, 1.0 / hi).value > level * (1.0 + 1e-12)) throw std::runtime_error("lur norm bracket failure");
    if (j_eval(L, ray, 1.0 / lo).value <= level) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        (j_eval(L, ray, 1.0 / mid).value > level ? lo : hi) = mid;
    }
    return hi;
}

NormHandle lur_norm_handle(const LurNorm& L)
{
    const LurNorm* p = &L;
    return {"lur", [p](const Point& x) { return lur_norm_eval(*p, x); }, nullptr};
}

std::vector<ProbeRow> lur_probe(const NormHandle& norm, const Space& s, const Point& x,
                                const std::vector<double>& deltas, int k, std::uint64_t seed)
{
    const double nx = norm.eval(x);
    if (std::abs(nx - 1.0) > 1e-9) throw std::invalid_argument("lur_probe: x must be a unit vector");
    std::vector<ProbeRow> rows;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double delta = deltas[i];
        CounterRng rng(seed, i, "lur_probe");
        ProbeRow row;
        row.delta = delta;
        for (int t = 0; t < k; ++t) {
            const Point v = gaussian_in(rng, s.d, full_subspace(s.d));
            const double r = 4.0 * std::sqrt(delta) * std::exp(rng.uniform(std::log(1e-3), 0.0));
            Point y = x + v * (r / v.norm());
            const double ny = norm.eval(y);
            if (ny == 0.0) continue;
            y /= ny;
            ++row.proposed;
            if (norm.eval(x + y) > 2.0 - delta) {
                ++row.admissible;
                row.R = std::max(row.R, s.norm(x - y));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

Point ball_point(CounterRng& rng, const LurNorm& L)
{
    const Space& s = *L.space;
    const Point u = gaussian_in(rng, s.d, full_subspace(s.d));
    const double r = std::min(std::pow(rng.uniform(), 1.0 / s.d), 1.0 - 1e-9);
    return u * (r / L.ambient.eval(u));
}

std::vector<double> vec(const Point& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

}  // namespace

std::vector<CheckEntry> check_lur(const LurNorm& L, const LurChecks& cfg, std::uint64_t seed)
{
    const Space& s = *L.space;
    const LurParams& P = L.params;
    const int K = P.K;
    const double eps = P.eps;
    std::vector<CheckEntry> out;

    {
        // Flats of xi_n at 1/n and 3/n, psi_eta at 1 - eta and 1.
        double worst = 0.0;
        for (int n = 1; n <= K; ++n) {
            worst = std::max(worst, std::abs(xi_eval(n, 1.0 / n)));
            worst = std::max(worst, std::abs(xi_eval(n, 3.0 / n) - 1.0 / n));
            for (int m = 1; m <= K; ++m) {
                const double eta = P.eta_nm(n, m);
                worst = std::max(worst, std::abs(psi_eta_eval(eta, 1.0 - eta)));
                worst = std::max(worst, std::abs(psi_eta_eval(eta, 1.0) - 1.0));
            }
        }
        CheckEntry e;
        e.id = "lur_flats";
        e.seed = seed;
        e.pass = worst <= 1e-14;
        e.measured = {{"max_abs_error", worst}};
        e.tolerances = {{"abs", 1e-14}};
        out.push_back(e);
    }

    {
        // psi_eta1 <= psi_eta2 on [0, 1] for eta1 < eta2, over the parameter etas.
        std::vector<double> etas;
        for (int n = 1; n <= K; ++n)
            for (int m = 1; m <= K; ++m) etas.push_back(P.eta_nm(n, m));
        std::sort(etas.begin(), etas.end());
        etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
        std::size_t bad = 0, tested = 0;
        double worst = 0.0;
        for (std::size_t a = 0; a < etas.size(); ++a)
            for (std::size_t b = a + 1; b < etas.size(); ++b)
                for (int i = 0; i <= 200; ++i) {
                    const double t = i / 200.0;
                    const double gap = psi_eta_eval(etas[a], t) - psi_eta_eval(etas[b], t);
                    ++tested;
                    if (gap > 0.0) {
                        ++bad;
                        worst = std::max(worst, gap);
                    }
                }
        CheckEntry e;
        e.id = "lur_psi_monotone";
        e.seed = seed;
        e.pass = bad == 0;
        e.measured = {{"etas", etas.size()}, {"tested", tested}, {"violations", bad}, {"max_gap", worst}};
        e.tolerances = {{"gap", 0.0}};
        out.push_back(e);
    }

    {
        CounterRng rng(seed, 0, "lur_z_bracket");
        std::size_t bracket_bad = 0, lattice_bad = 0, lip_bad = 0;
        double lip_max = 0.0;
        for (int t = 0; t < cfg.z_samples; ++t) {
            const double eta = P.eta_nm(1 + int(rng() % K), 1 + int(rng() % K));
            const int len = 1 + int(rng() % 20);
            std::vector<double> z(len), w(len), v(len);
            for (int i = 0; i < len; ++i) {
                z[i] = rng.uniform() < 0.1 ? 0.0 : rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-3.0, 3.0));
                w[i] = z[i] * (1.0 + rng.uniform());
                v[i] = z[i] + rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-6.0, 0.0)) * std::abs(z[i]);
            }
            double zinf = 0.0, dinf = 0.0;
            for (int i = 0; i < len; ++i) {
                zinf = std::max(zinf, std::abs(z[i]));
                dinf = std::max(dinf, std::abs(z[i] - v[i]));
            }
            const double Z = z_eta_eval(eta, z);
            if (!((1.0 - eta) * Z <= zinf && zinf <= Z)) ++bracket_bad;
            const double Zw = z_eta_eval(eta, w);
            if (Z > Zw * (1.0 + 1e-15)) ++lattice_bad;
            const double Zv = z_eta_eval(eta, v);
            if (dinf > 0.0) {
                const double q = std::abs(Z - Zv) / dinf;
                lip_max = std::max(lip_max, q);
                if (std::abs(Z - Zv) > 2.0 * dinf + 1e-15 * std::max(Z, Zv)) ++lip_bad;
            }
        }
        CheckEntry e;
        e.id = "lur_z_bracket";
        e.seed = seed;
        e.pass = bracket_bad == 0 && lattice_bad == 0 && lip_bad == 0;
        e.measured = {{"samples", cfg.z_samples}, {"bracket_violations", bracket_bad},
                      {"lattice_violations", lattice_bad}, {"lipschitz_violations", lip_bad},
                      {"max_lipschitz_quotient", lip_max}};
        e.tolerances = {{"bracket", 0.0}, {"lattice_rel", 1e-15}, {"lipschitz", 2.0}};
        out.push_back(e);
    }

    {
        CounterRng rng(seed, 0, "lur_lipschitz");
        double hq = 0.0, jq = 0.0;
        std::size_t hbad = 0, jbad = 0, nonzero = 0;
        std::vector<double> H1, H2;
        for (int t = 0; t < cfg.lipschitz_pairs; ++t) {
            const Point y = ball_point(rng, L);
            const Point dir = gaussian_in(rng, s.d, full_subspace(s.d));
            Point y2 = y + dir * (std::pow(10.0, rng.uniform(-6.0, -1.0)) / L.ambient.eval(dir));
            if (!(L.ambient.eval(y2) < 1.0)) continue;
            const double dist = L.ambient.eval(y - y2);
            if (dist == 0.0) continue;
            const LurRay r1 = lur_ray(L, y), r2 = lur_ray(L, y2);
            for (int n = 1; n <= K; ++n)
                for (int m = 1; m <= K; ++m) {
                    h_components(L, r1, 1.0, n, m, H1);
                    h_components(L, r2, 1.0, n, m, H2);
                    double dh = 0.0;
                    for (std::size_t i = 0; i < H1.size(); ++i) dh = std::max(dh, std::abs(H1[i] - H2[i]));
                    hq = std::max(hq, dh / dist);
                    if (dh > (1.0 + cfg.lipschitz_slack) * dist) ++hbad;
                }
            std::vector<double> c1, c2;
            for_components(L, r1, 1.0, [&](int, int, int, double c) { c1.push_back(c); });
            for_components(L, r2, 1.0, [&](int, int, int, double c) { c2.push_back(c); });
            for (std::size_t i = 0; i < c1.size(); ++i) {
                if (c1[i] != 0.0 || c2[i] != 0.0) ++nonzero;
                const double dj = std::abs(c1[i] - c2[i]);
                jq = std::max(jq, dj / dist);
                if (dj > (2.0 + cfg.lipschitz_slack) * dist) ++jbad;
            }
        }
        CheckEntry e;
        e.id = "lur_lipschitz";
        e.seed = seed;
        e.pass = hbad == 0 && jbad == 0;
        e.measured = {{"pairs", cfg.lipschitz_pairs},     {"max_h_quotient", hq},
                      {"max_j_quotient", jq},             {"h_violations", hbad},
                      {"j_violations", jbad},             {"nonzero_components", nonzero},
                      {"z_envelope", L.z_envelope}};
        e.tolerances = {{"h", 1.0 + cfg.lipschitz_slack}, {"j", 2.0 + cfg.lipschitz_slack}};
        out.push_back(e);
    }

    {
        CounterRng rng(seed, 0, "lur_j_sandwich");
        const double c = std::sqrt(1.0 + 4.0 * eps);
        std::size_t bad = 0;
        double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
        for (int t = 0; t < cfg.sandwich_samples; ++t) {
            const Point y = ball_point(rng, L);
            const LurRay ray = lur_ray(L, y);
            if (ray.ambient == 0.0) continue;
            const double J = j_eval(L, ray, 1.0).value;
            rmin = std::min(rmin, J / ray.ambient);
            rmax = std::max(rmax, J / ray.ambient);
            if (J < ray.ambient || J > c * ray.ambient * (1.0 + 1e-12)) ++bad;
        }
        CheckEntry e;
        e.id = "lur_j_sandwich";
        e.seed = seed;
        e.pass = bad == 0;
        e.measured = {{"samples", cfg.sandwich_samples}, {"violations", bad}, {"min_ratio", rmin}, {"max_ratio", rmax}};
        e.tolerances = {{"upper_factor", c}, {"rel", 1e-12}};
        out.push_back(e);
    }

    {
        const JValue jv = j_eval(L, Point(Point::Zero(s.d)));
        CheckEntry e;
        e.id = "lur_tail";
        e.seed = seed;
        e.pass = jv.tail_envelope <= cfg.tail_tol;
        e.measured = {{"tail_envelope", jv.tail_envelope}, {"tail_uniform", jv.tail_uniform},
                      {"z_envelope", L.z_envelope}, {"params", P.to_json()}};
        e.tolerances = {{"tail", cfg.tail_tol}};
        out.push_back(e);
    }

    const NormHandle lur = lur_norm_handle(L);
    {
        CounterRng rng(seed, 0, "lur_norm_bracket");
        const double c = std::sqrt(1.0 + 4.0 * eps) / (1.0 - eps);
        std::size_t bad = 0, hbad = 0;
        double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0, hworst = 0.0;
        json witness = nullptr;
        for (int t = 0; t < cfg.norm_samples; ++t) {
            const Point x = sphere_point(rng, s) * std::exp(rng.uniform(-3.0, 3.0));
            const double a = L.ambient.eval(x);
            const double v = lur_norm_eval(L, x);
            rmin = std::min(rmin, v / a);
            rmax = std::max(rmax, v / a);
            if (v < a * (1.0 - 1e-12) || v > c * a * (1.0 + 1e-12)) {
                ++bad;
                if (witness.is_null()) witness = vec(x);
            }
            if (t % 10 == 0) {
                const double h = std::abs(lur_norm_eval(L, Point(2.0 * x)) - 2.0 * v) / (2.0 * v);
                hworst = std::max(hworst, h);
                if (h > cfg.homogeneity_tol) ++hbad;
            }
        }
        CheckEntry e;
        e.id = "lur_norm_bracket";
        e.seed = seed;
        e.pass = bad == 0 && hbad == 0;
        e.measured = {{"samples", cfg.norm_samples}, {"violations", bad}, {"min_ratio", rmin}, {"max_ratio", rmax},
                      {"homogeneity_tested", (cfg.norm_samples + 9) / 10}, {"homogeneity_violations", hbad},
                      {"max_homogeneity_defect", hworst}};
        if (!witness.is_null()) e.measured["witness"] = witness;
        e.tolerances = {{"upper_factor", c}, {"rel", 1e-12}, {"homogeneity", cfg.homogeneity_tol}};
        out.push_back(e);
    }

    {
        const std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
        CounterRng rng(seed, 0, "lur_probe_points");
        json table = json::array();
        std::size_t bad = 0, starved = 0;
        for (int p = 0; p < cfg.probe_points; ++p) {
            const Point u = sphere_point(rng, s);
            const Point x = u / lur_norm_eval(L, u);
            const auto rows = lur_probe(lur, s, x, deltas, cfg.probe_samples, seed + std::uint64_t(p) * 7919u);
            json jr = json::array();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].admissible == 0) ++starved;
                if (i > 0 && rows[i].R > rows[i - 1].R) ++bad;
                jr.push_back({{"delta", rows[i].delta}, {"R", rows[i].R}, {"admissible", rows[i].admissible},
                              {"proposed", rows[i].proposed}});
            }
            table.push_back({{"x", vec(x)}, {"rows", jr}});
        }
        CheckEntry e;
        e.id = "lur_probe";
        e.seed = seed;
        e.pass = bad == 0;
        e.measured = {{"points", cfg.probe_points}, {"monotonicity_violations", bad}, {"starved_rows", starved},
                      {"table", table}};
        e.tolerances = {{"deltas", deltas}};
        out.push_back(e);
    }

    {
        // The same x and direction for every h, so the moduli are comparable.
        const std::vector<double> hs = {1e-2, 1e-3, 1e-4};
        CounterRng rng(seed, 0, "lur_c1_modulus");
        std::vector<double> omega(hs.size(), 0.0);
        std::size_t radius_bad = 0;
        for (int p = 0; p < cfg.modulus_points; ++p) {
            const Point u = sphere_point(rng, s);
            const Point x = u / lur_norm_eval(L, u);
            const Point v = gaussian_in(rng, s.d, full_subspace(s.d));
            const Functional gx = numeric_gradient(lur, x, 1e-6);
            for (std::size_t i = 0; i < hs.size(); ++i) {
                Point x2 = x + v * (0.5 * hs[i] / lur_norm_eval(L, v));
                x2 /= lur_norm_eval(L, x2);
                if (lur_norm_eval(L, x - x2) > hs[i]) ++radius_bad;
                omega[i] = std::max(omega[i], (gx - numeric_gradient(lur, x2, 1e-6)).norm());
            }
        }
        std::size_t bad = 0;
        for (std::size_t i = 1; i < omega.size(); ++i)
            if (omega[i] > omega[i - 1]) ++bad;
        json rows = json::array();
        for (std::size_t i = 0; i < hs.size(); ++i) rows.push_back({{"h", hs[i]}, {"omega", omega[i]}});
        CheckEntry e;
        e.id = "lur_c1_modulus";
        e.seed = seed;
        e.pass = bad == 0 && radius_bad == 0;
        e.measured = {{"points", cfg.modulus_points}, {"table", rows}, {"monotonicity_violations", bad},
                      {"radius_violations", radius_bad}};
        e.tolerances = {{"fd_h_rel", 1e-6}};
        out.push_back(e);
    }

    return out;
}

}  // namespace renorm
