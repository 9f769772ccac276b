#include "renorm/polyhedral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renorm/hull.hpp"
#include "renorm/sampling.hpp"

namespace renorm {

double max_violation(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < atlas.records.size(); ++r) {
        const auto& R = atlas.records[r];
        if (!scope.includes(R.F)) continue;
        index.visit(static_cast<int>(r), y, 1.0, [&](int j) { worst = std::max(worst, R.omega[j].depth(y)); });
    }
    return worst;
}

bool linear_tests_pass(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y, double tol)
{
    return !(max_violation(atlas, index, scope, y) > tol);
}

bool body_membership(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y, double tol)
{
    if (atlas.space.norm(y) > 1.0) return false;
    return linear_tests_pass(atlas, index, scope, y, tol);
}

bool body_membership(const PolyBody& body, const Point& y, double tol)
{
    return body_membership(*body.atlas, *body.index, body.scope, y, tol);
}

bool in_union_of_slices(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y)
{
    return max_violation(atlas, index, scope, y) > 0.0;
}

double mu_p_eval(const SliceAtlas& atlas, const AtlasIndex& index, const Point& x)
{
    const double n = atlas.space.norm(x);
    if (n == 0.0) return 0.0;
    const Point u = x / n;
    double g = 1.0;
    for (std::size_t r = 0; r < atlas.records.size(); ++r) {
        const auto& R = atlas.records[r];
        index.visit(static_cast<int>(r), u, 1.0, [&](int j) {
            const Slice& S = R.omega[j];
            g = std::max(g, S.sign * S.psi.dot(u) / (1.0 - S.delta));
        });
    }
    return n * g;
}

HalfSpaceRep restricted_halfspaces(const SliceAtlas& atlas, SubspaceId F)
{
    HalfSpaceRep rep;
    rep.F = F;
    for (const auto& R : atlas.records) {
        if (!R.F.subset_of(F)) continue;
        for (const Slice& S : R.omega) {
            Functional a = Functional::Zero(atlas.d);
            for (int i : F.members()) a[i] = S.sign * S.psi[i];
            rep.a.push_back(a);
            rep.rhs.push_back(1.0 - S.delta);
        }
    }
    return rep;
}

VertexReport enumerate_vertices(const SliceAtlas& atlas, SubspaceId F)
{
    const Space& s = atlas.space;
    const HalfSpaceRep rep = restricted_halfspaces(atlas, F);
    const std::vector<int> idx = F.members();
    const int n = F.dim();
    if (n > 3) throw std::invalid_argument("vertex enumeration is limited to dim F <= 3");
    VertexReport out;
    out.constraints = rep.a.size();
    auto embed = [&](const double* v) {
        Point p = Point::Zero(atlas.d);
        for (int i = 0; i < n; ++i) p[idx[i]] = v[i];
        return p;
    };
    if (n == 1) {
        double m = 0.0;
        for (std::size_t j = 0; j < rep.a.size(); ++j) m = std::max(m, std::abs(rep.a[j][idx[0]]) / rep.rhs[j]);
        if (!(m > 0.0)) throw HullError("unbounded restricted polytope");
        for (double sgn : {1.0, -1.0}) {
            const double v = sgn / m;
            out.points.push_back(embed(&v));
        }
    } else if (n == 2) {
        std::vector<Eigen::Vector2d> q;
        for (std::size_t j = 0; j < rep.a.size(); ++j) q.emplace_back(rep.a[j][idx[0]] / rep.rhs[j], rep.a[j][idx[1]] / rep.rhs[j]);
        for (const auto& v : polar_vertices_2d(q)) out.points.push_back(embed(v.data()));
    } else {
        std::vector<Eigen::Vector3d> q;
        for (std::size_t j = 0; j < rep.a.size(); ++j)
            q.emplace_back(rep.a[j][idx[0]] / rep.rhs[j], rep.a[j][idx[1]] / rep.rhs[j], rep.a[j][idx[2]] / rep.rhs[j]);
        for (const auto& v : polar_vertices_3d(q)) out.points.push_back(embed(v.data()));
    }
    out.vertices = out.points.size();
    for (const Point& p : out.points) out.max_vertex_norm = std::max(out.max_vertex_norm, s.norm(p));
    return out;
}

CheckEntry verify_polyhedral_restriction(const SliceAtlas& atlas, const AtlasIndex& index, SubspaceId F, int k,
                                         std::uint64_t seed)
{
    const Space& s = atlas.space;
    const auto& R = atlas.at(F);
    const HalfSpaceRep rep = restricted_halfspaces(atlas, F);
    CounterRng rng(seed, F.mask, "polyhedral_restriction");
    std::size_t mismatches = 0, inside = 0, ball_failures = 0;
    for (int t = 0; t < k; ++t) {
        const Point u = sphere_point(rng, s, F);
        const double pick = rng.uniform();
        const double r = pick < 0.5 ? (1.0 + 0.02 * (rng.uniform() - 0.5)) / mu_p_eval(atlas, index, u)
                                    : 1.05 * rng.uniform();
        const Point y = r * u;
        bool half = true;
        for (std::size_t j = 0; j < rep.a.size() && half; ++j) half = rep.a[j].dot(y) <= rep.rhs[j] + kLinearTol;
        const bool inP = body_membership(atlas, index, Scope::full(), y);
        if (half != inP) ++mismatches;
        if (half) {
            ++inside;
            if (s.norm(y) > 1.0) ++ball_failures;
        }
    }
    CheckEntry e;
    e.id = "polyhedral_restriction" + F.label();
    e.seed = seed;
    e.measured = {{"samples", k}, {"mismatches", mismatches}, {"inside", inside}, {"ball_implied_failures", ball_failures},
                  {"constraints", rep.a.size()}};
    e.tolerances = {{"linear", kLinearTol}, {"vertex", 1e-9}};
    bool ok = mismatches == 0 && ball_failures == 0;
    if (F.dim() <= 3) {
        const VertexReport vr = enumerate_vertices(atlas, F);
        const double bound = 1.0 - 2.0 * R.budget.theta + 1e-9;
        e.measured["vertices"] = vr.vertices;
        e.measured["max_vertex_norm"] = vr.max_vertex_norm;
        e.measured["vertex_bound"] = bound;
        ok = ok && vr.max_vertex_norm <= bound;
    }
    e.pass = ok;
    return e;
}

LfcWitness lfc_witness(const SliceAtlas& atlas, const AtlasIndex& index, const Point& x)
{
    const Space& s = atlas.space;
    const double mu = mu_p_eval(atlas, index, x);
    if (std::abs(mu - 1.0) > 1e-9) throw std::invalid_argument("lfc_witness needs a point of the P-sphere");
    LfcWitness w;
    w.F = support_of(x);
    w.radius = 0.5 * atlas.at(w.F).budget.theta;
    for (const auto& R : atlas.records) {
        if (!R.F.subset_of(w.F)) continue;
        for (const Slice& S : R.omega) {
            const Functional f = (S.sign / (1.0 - S.delta)) * S.psi;
            // Keep functionals that can reach 1 on the witness ball.
            if (f.dot(x) + w.radius * f.norm() / s.ell_sys >= 1.0) w.functionals.push_back(f);
        }
    }
    return w;
}

std::size_t lfc_violations(const SliceAtlas& atlas, const AtlasIndex& index, const Point& x, const LfcWitness& w, int k,
                           std::uint64_t seed)
{
    const Space& s = atlas.space;
    CounterRng rng(seed, w.F.mask, "lfc");
    std::size_t bad = 0;
    for (int t = 0; t < k; ++t) {
        const Point z = sphere_point(rng, s) * (w.radius * rng.uniform());
        const Point y = x + z;
        bool wit = true;
        for (const Functional& f : w.functionals)
            if (f.dot(y) > 1.0 + kLinearTol) {
                wit = false;
                break;
            }
        if (wit != body_membership(atlas, index, Scope::full(), y)) ++bad;
    }
    return bad;
}

}  // namespace renorm
