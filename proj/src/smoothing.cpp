#include "renorm/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "renorm/polyhedral.hpp"
#include "renorm/sampling.hpp"
#include "renorm/verify.hpp"

namespace renorm {

SmoothBody::SmoothBody(const SliceAtlas& a, const AtlasIndex& idx) : atlas(&a), index(&idx), eps(a.eps_global)
{
    for (const auto& r : a.records) bumps.push_back(BumpSpec::with_flat_radius(1.0 - r.budget.delta_F));
}

Functional SmoothBody::theta(int r, int j) const
{
    const Slice& S = atlas->records[r].omega[j];
    return (S.sign / (1.0 - S.delta)) * S.psi;
}

namespace {

// Calls fn(r, j, s) for every term with |s| > a_r, s = sign <psi, y> / (1 - delta).
template <class Filter, class Fn>
void active_terms(const SmoothBody& b, const Point& y, Filter&& keep, Fn&& fn)
{
    const auto& recs = b.atlas->records;
    for (std::size_t r = 0; r < recs.size(); ++r) {
        if (!keep(recs[r].F)) continue;
        const double a = b.bumps[r].a;
        for (int sg : {1, -1}) {
            const Point ys = sg * y;
            b.index->visit(static_cast<int>(r), ys, a, [&](int j) {
                const Slice& S = recs[r].omega[j];
                const double s = S.sign * S.psi.dot(y) / (1.0 - S.delta);
                if (sg * s > a) fn(static_cast<int>(r), j, s);
            });
        }
    }
}

}  // namespace

double phi_eval(const SmoothBody& body, const Point& y)
{
    double sum = 0.0;
    active_terms(body, y, [](SubspaceId) { return true; }, [&](int r, int, double s) { sum += body.bumps[r].eval(s); });
    return sum;
}

double phi_f_eval(const SmoothBody& body, SubspaceId F, const Point& y)
{
    double sum = 0.0;
    active_terms(body, y, [&](SubspaceId G) { return G.subset_of(F); },
                 [&](int r, int, double s) { sum += body.bumps[r].eval(s); });
    return sum;
}

Functional phi_grad(const SmoothBody& body, const Point& y)
{
    Functional g = Functional::Zero(y.size());
    active_terms(body, y, [](SubspaceId) { return true; },
                 [&](int r, int j, double s) { g += body.bumps[r].grad(s) * body.theta(r, j); });
    return g;
}

LocalityNeighborhood locality_neighborhood(const SmoothBody& body, const Point& y)
{
    if (!(phi_eval(body, y) < 1.0)) throw std::invalid_argument("locality neighbourhood needs a point of D");
    LocalityNeighborhood U;
    U.F = support_of(y);
    if (U.F.empty()) U.F = body.atlas->records.front().F;
    U.center = y;
    U.tube_radius = 0.5 * body.atlas->at(U.F).budget.theta;
    return U;
}

bool in_neighborhood(const SmoothBody& body, const LocalityNeighborhood& U, const Point& z)
{
    const SliceAtlas& a = *body.atlas;
    if (!(a.space.norm(z) < 1.0)) return false;
    if (!(dist_to_subspace(a.space, z, U.F).dist < U.tube_radius)) return false;
    // |<theta, z>| < 1 is sign <psi, z> < 1 - delta for both signs of each pair.
    return max_violation(a, *body.index, Scope::single(U.F), z) < 0.0;
}

double smooth_mu_eval(const SmoothBody& body, const Point& x)
{
    const double n = body.atlas->space.norm(x);
    if (n == 0.0) return 0.0;
    const double level = 1.0 - body.eps;
    double lo = n, hi = n / (1.0 - body.eps);
    if (!(phi_eval(body, x / lo) >= level) || !(phi_eval(body, x / hi) <= level))
        throw std::runtime_error("smooth norm bracket failure");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        (phi_eval(body, x / mid) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Functional smooth_mu_grad(const SmoothBody& body, const Point& x)
{
    const double t = smooth_mu_eval(body, x);
    if (t == 0.0) throw std::invalid_argument("smooth norm gradient at 0");
    const Point u = x / t;
    const Functional g = phi_grad(body, u);
    const double denom = g.dot(u);
    if (!(denom > 1e-14)) throw std::runtime_error("degenerate smooth norm gradient");
    return g / denom;
}

NormHandle smooth_norm_handle(const SmoothBody& body)
{
    const SmoothBody* b = &body;
    return {"mu_B", [b](const Point& x) { return smooth_mu_eval(*b, x); },
            [b](const Point& x) { return smooth_mu_grad(*b, x); }};
}

std::vector<CheckEntry> check_smooth(const SmoothBody& body, const SmoothChecks& cfg, std::uint64_t seed)
{
    const SliceAtlas& a = *body.atlas;
    const Space& s = a.space;
    const double eps = body.eps;
    std::vector<CheckEntry> out;

    {
        CounterRng rng(seed, 0, "smooth_sandwich");
        std::size_t v1 = 0, v3 = 0, v4 = 0, v5 = 0, zero = 0, inB = 0, inD = 0, inP = 0;
        double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
        for (int t = 0; t < cfg.sandwich_samples; ++t) {
            const Point u = sphere_point(rng, s);
            const double pick = rng.uniform();
            double r;
            if (pick < 0.5) r = 1.02 * rng.uniform();
            else if (pick < 0.75) r = (1.0 + (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::pow(10.0, -2.0 - 10.0 * rng.uniform())) / smooth_mu_eval(body, u);
            else r = (1.0 - eps) * (1.0 + 2e-3 * (rng.uniform() - 0.5));
            const Point y = r * u;
            const double ny = s.norm(y);
            const double ph = phi_eval(body, y);
            const bool P = body_membership(a, *body.index, Scope::full(), y);
            if (ny <= 1.0 - eps && ph != 0.0) ++v1;
            if (ph <= 1.0 - eps && !(ph < 1.0)) ++v3;
            if (ph < 1.0 && !P) ++v4;
            if (P && ny > 1.0) ++v5;
            zero += ph == 0.0;
            inB += ph <= 1.0 - eps;
            inD += ph < 1.0;
            inP += P;
            if (pick < 0.5) {
                const double m = smooth_mu_eval(body, u);
                rmin = std::min(rmin, m);
                rmax = std::max(rmax, m);
            }
        }
        CheckEntry e;
        e.id = "smooth_sandwich";
        e.seed = seed;
        e.pass = v1 + v3 + v4 + v5 == 0 && rmin >= 1.0 - 1e-12 && rmax <= (1.0 / (1.0 - eps)) * (1.0 + 1e-12);
        e.measured = {{"samples", cfg.sandwich_samples},
                      {"ball_to_zero_violations", v1},
                      {"B_to_D_violations", v3},
                      {"D_to_P_violations", v4},
                      {"P_to_ball_violations", v5},
                      {"counts", {{"Phi_zero", zero}, {"B", inB}, {"D", inD}, {"P", inP}}},
                      {"mu_B_over_N_min", rmin},
                      {"mu_B_over_N_max", rmax}};
        e.tolerances = {{"ratio_relative", 1e-12}, {"linear", kLinearTol}};
        out.push_back(e);
    }

    {
        CounterRng rng(seed, 0, "smooth_gradient");
        const NormHandle h = smooth_norm_handle(body);
        double worst = 0.0, euler = 0.0, homog = 0.0;
        std::size_t fails = 0;
        json witness = nullptr;
        for (int t = 0; t < cfg.gradient_samples; ++t) {
            const Point x = sphere_point(rng, s) * std::exp(rng.uniform(-1.0, 1.0));
            const double err = gradient_rel_error(h, x, 1e-6);
            if (err > cfg.gradient_tol) {
                ++fails;
                if (witness.is_null())
                    witness = {{"x", std::vector<double>(x.data(), x.data() + x.size())},
                               {"rel_error", err},
                               {"rel_error_h1e-8", gradient_rel_error(h, x, 1e-8)}};
            }
            worst = std::max(worst, err);
            const Functional g = smooth_mu_grad(body, x);
            euler = std::max(euler, std::abs(g.dot(x) - smooth_mu_eval(body, x)) / smooth_mu_eval(body, x));
            homog = std::max(homog, (g - smooth_mu_grad(body, Point(2.0 * x))).norm());
        }
        CheckEntry e;
        e.id = "smooth_gradient";
        e.seed = seed;
        e.pass = fails == 0 && euler <= 1e-8 && homog <= 1e-9;
        e.measured = {{"samples", cfg.gradient_samples}, {"max_rel_error", worst}, {"failures", fails},
                      {"max_euler_defect", euler}, {"max_homogeneity_defect", homog}};
        if (!witness.is_null()) e.measured["witness"] = witness;
        e.tolerances = {{"rel_error", cfg.gradient_tol}, {"h_rel", 1e-6}, {"euler", 1e-8}, {"homogeneity", 1e-9}};
        out.push_back(e);
    }

    {
        CounterRng rng(seed, 0, "smooth_locality");
        std::size_t center_bad = 0, nb_bad = 0, nb_tested = 0, active_centers = 0;
        double worst = 0.0;
        for (int t = 0; t < cfg.locality_centers; ++t) {
            const SubspaceId F = a.records[rng() % a.records.size()].F;
            const Point u = sphere_point(rng, s, F);
            const double sc = rng.uniform() < 0.5 ? 1.0 - std::pow(10.0, -2.0 - 10.0 * rng.uniform()) : rng.uniform();
            const Point y = u * (sc / smooth_mu_eval(body, u));
            const LocalityNeighborhood U = locality_neighborhood(body, y);
            const double p = phi_eval(body, y);
            if (p != phi_f_eval(body, U.F, y)) ++center_bad;
            if (p > 0.0) ++active_centers;
            for (int k = 0; k < cfg.locality_neighbors; ++k) {
                for (int tries = 0; tries < 20; ++tries) {
                    const Point z = y + sphere_point(rng, s) * (U.tube_radius * rng.uniform());
                    if (!in_neighborhood(body, U, z)) continue;
                    const double dz = std::abs(phi_eval(body, z) - phi_f_eval(body, U.F, z));
                    worst = std::max(worst, dz);
                    if (dz > cfg.locality_tol) ++nb_bad;
                    ++nb_tested;
                    break;
                }
            }
        }
        CheckEntry e;
        e.id = "smooth_locality";
        e.seed = seed;
        e.pass = center_bad == 0 && nb_bad == 0;
        e.measured = {{"centers", cfg.locality_centers}, {"centers_with_active_terms", active_centers},
                      {"center_mismatches", center_bad}, {"neighbors_tested", nb_tested},
                      {"neighbor_violations", nb_bad}, {"max_neighbor_gap", worst}};
        e.tolerances = {{"center", 0.0}, {"neighbor", cfg.locality_tol}};
        out.push_back(e);
    }

    {
        CounterRng rng(seed, 0, "smooth_lfc");
        std::size_t bad = 0, tested = 0, vacuous = 0;
        double worst = 0.0;
        for (int t = 0; t < cfg.lfc_points; ++t) {
            const SubspaceId F = a.records[rng() % a.records.size()].F;
            const Point u0 = sphere_point(rng, s, F);
            const Point u = u0 / smooth_mu_eval(body, u0);
            // Directions annihilated by every functional of Theta_G, G subset of F.
            std::vector<Functional> th;
            for (std::size_t r = 0; r < a.records.size(); ++r)
                if (a.records[r].F.subset_of(F))
                    for (std::size_t j = 0; j < a.records[r].omega.size(); ++j) th.push_back(body.theta(int(r), int(j)));
            Eigen::MatrixXd A(static_cast<int>(th.size()), s.d);
            for (std::size_t i = 0; i < th.size(); ++i) A.row(static_cast<int>(i)) = th[i].transpose();
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            int rank = 0;
            for (int i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-12 * sv[0];
            if (rank >= s.d) {
                ++vacuous;
                continue;
            }
            const LocalityNeighborhood U = locality_neighborhood(body, u);
            for (int k = 0; k < cfg.lfc_perturbations; ++k) {
                Point v = Point::Zero(s.d);
                for (int c = rank; c < s.d; ++c) v += rng.normal() * Point(svd.matrixV().col(c));
                const Point w = u + v * (U.tube_radius * rng.uniform() / s.norm(v));
                if (!in_neighborhood(body, U, w)) continue;
                ++tested;
                const double dev = std::abs(smooth_mu_eval(body, w) - 1.0);
                worst = std::max(worst, dev);
                if (dev > cfg.lfc_tol) ++bad;
            }
        }
        CheckEntry e;
        e.id = "smooth_lfc";
        e.seed = seed;
        e.pass = bad == 0;
        e.measured = {{"points", cfg.lfc_points}, {"vacuous_points", vacuous}, {"perturbations_tested", tested},
                      {"violations", bad}, {"max_deviation", worst}};
        e.tolerances = {{"mu_B", cfg.lfc_tol}};
        out.push_back(e);
    }
    return out;
}

}  // namespace renorm
