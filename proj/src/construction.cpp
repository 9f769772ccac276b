#include "renorm/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "renorm/dykstra.hpp"
#include "renorm/polyhedral.hpp"
#include "renorm/sampling.hpp"

namespace renorm {

double choose_epsilon(SubspaceId F, const SliceAtlas& partial, double M, const std::string& policy)
{
    const int n = F.dim();
    double eps = std::min(partial.eps_global, 1.0 / (4.0 * n * M));
    const bool strict = policy == "strict";
    if (!strict && policy != "uncoupled") throw std::invalid_argument("unknown budget policy: " + policy);
    for (std::uint32_t sub = (F.mask - 1) & F.mask; sub != 0; sub = (sub - 1) & F.mask) {
        const int r = partial.find(SubspaceId(sub));
        if (r < 0) throw std::invalid_argument("missing predecessor budget for " + SubspaceId(sub).label());
        if (strict) eps = std::min(eps, partial.records[r].budget.theta / (4.0 * n * M));
    }
    return eps;
}

namespace {

struct CoverLists {
    std::vector<int> vertex;  // candidate vertex ids
    std::vector<std::size_t> off{0};
    std::vector<int> cls;
    std::vector<double> depth;
};

struct CoverState {
    std::vector<char> needs;      // per class rep: still uncovered
    std::vector<double> best;     // per class rep: best certified depth
    std::size_t remaining = 0;
    std::vector<int> chosen;      // vertex ids
};

class Coverer {
public:
    Coverer(const Space& s, const SphereMesh& m, double delta, double depth_target)
        : s_(s), m_(m), delta_(delta), target_(depth_target), seen_(m.pts.size(), 0), good_(m.pts.size(), 0),
          vdepth_(m.pts.size(), 0.0)
    {
    }

    // Cells reachable from v whose vertices all lie at depth >= target in the slice at p_v.
    void append(CoverLists& L, int v, const std::vector<char>& needs)
    {
        const Slice S = make_slice(s_, m_.pts[v], delta_);
        ++stamp_;
        std::vector<int> good_list;
        std::vector<int> queue{v};
        seen_[v] = stamp_;
        vdepth_[v] = S.depth(m_.pts[v]);
        if (vdepth_[v] >= target_) {
            good_[v] = stamp_;
            good_list.push_back(v);
        } else {
            queue.clear();
        }
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int q = queue[qi];
            for (int k = m_.vn_off[q]; k < m_.vn_off[q + 1]; ++k) {
                const int nb = m_.vn_idx[k];
                if (seen_[nb] == stamp_) continue;
                seen_[nb] = stamp_;
                vdepth_[nb] = S.depth(m_.pts[nb]);
                if (vdepth_[nb] >= target_) {
                    good_[nb] = stamp_;
                    good_list.push_back(nb);
                    queue.push_back(nb);
                }
            }
        }
        L.vertex.push_back(v);
        for (int q : good_list)
            for (int k = m_.vc_off[q]; k < m_.vc_off[q + 1]; ++k) {
                const int c = m_.vc_idx[k];
                const int* cv = m_.cell(c);
                if (cv[0] != q) continue;
                bool all = true;
                double dmin = std::numeric_limits<double>::infinity();
                for (int a = 0; a < m_.arity; ++a) {
                    if (good_[cv[a]] != stamp_) {
                        all = false;
                        break;
                    }
                    dmin = std::min(dmin, vdepth_[cv[a]]);
                }
                if (!all) continue;
                const int rep = std::min(c, m_.anti_cell[c]);
                if (!needs[rep]) continue;
                L.cls.push_back(rep);
                L.depth.push_back(dmin);
            }
        L.off.push_back(L.cls.size());
    }

private:
    const Space& s_;
    const SphereMesh& m_;
    double delta_;
    double target_;
    int stamp_ = 0;
    std::vector<int> seen_, good_;
    std::vector<double> vdepth_;
};

// Lazy greedy set cover; ties go to the lowest candidate position.
void greedy_cover(const CoverLists& L, CoverState& st)
{
    using Item = std::pair<std::size_t, long>;
    std::priority_queue<Item> heap;
    auto gain = [&](std::size_t i) {
        std::size_t g = 0;
        for (std::size_t k = L.off[i]; k < L.off[i + 1]; ++k) g += st.needs[L.cls[k]] ? 1 : 0;
        return g;
    };
    for (std::size_t i = 0; i < L.vertex.size(); ++i) {
        const std::size_t g = gain(i);
        if (g > 0) heap.push({g, -static_cast<long>(i)});
    }
    while (st.remaining > 0 && !heap.empty()) {
        const Item top = heap.top();
        heap.pop();
        const std::size_t i = static_cast<std::size_t>(-top.second);
        const std::size_t g = gain(i);
        if (g == 0) continue;
        const Item fresh{g, top.second};
        if (!heap.empty() && fresh < heap.top()) {
            heap.push(fresh);
            continue;
        }
        st.chosen.push_back(L.vertex[i]);
        for (std::size_t k = L.off[i]; k < L.off[i + 1]; ++k) {
            const int c = L.cls[k];
            if (st.needs[c]) {
                st.needs[c] = 0;
                --st.remaining;
            }
        }
    }
}

// Upper bound for <psi, y> over y in B with dist(y, span H) < theta. Writing psi = e + r with
// e a norm-preserving extension of psi|H, r nearly vanishes on H and only sees the offset.
double tube_reach(const Space& s, const Functional& psi, SubspaceId H, double theta)
{
    const Space::Extension ex = s.restricted_extension(psi, H);
    const Functional r = psi - ex.ext;
    double rh = 0.0;
    for (int a : H.members()) rh += r[a] * r[a];
    return ex.value + std::sqrt(rh) / s.ell_sys * (1.0 + theta) + theta * s.dual_norm(r);
}

struct Shield {
    SubspaceId H;
    double theta;
};

}  // namespace

SubspaceRecord build_record(const SliceAtlas& partial, const AtlasIndex& index, SubspaceId F, const ConstructionConfig& cfg)
{
    const Space& s = partial.space;
    const int n = F.dim();
    SubspaceRecord rec;
    rec.F = F;
    const double eps = choose_epsilon(F, partial, s.M, cfg.budget_policy);
    const double delta = margin_for_diameter(eps, s.L, s.base.eps0);
    const double c = n < s.d ? std::max(cfg.cover_margin, cfg.ribbon_margin) : cfg.cover_margin;
    double h = std::min(cfg.mesh_h, std::sqrt(2.0 * (1.0 - c) * delta) / 1.5 * s.ell_sys / s.L_sys);

    json diag = {{"subspace", F.label()}, {"eps_F", eps}, {"slice_delta", delta}, {"mesh_h", h},
                 {"estimated_cells", estimate_mesh_cells(s, F, h)}, {"delta_floor", cfg.delta_floor},
                 {"max_mesh_cells", cfg.max_mesh_cells}, {"budget_policy", cfg.budget_policy}};
    if (delta < cfg.delta_floor)
        throw InfeasibleBudget("slice margin for " + F.label() + " is below the representable floor", diag);
    if (estimate_mesh_cells(s, F, h) > double(cfg.max_mesh_cells))
        throw InfeasibleBudget("mesh for " + F.label() + " exceeds the cell cap", diag);

    const Point e0 = s.unit(F.members()[0]);
    const Slice proto = make_slice(s, e0 / s.norm(e0), delta);
    const double delta_pre = std::min(enlarge_margin({proto}, eps, s), cfg.enlarge_fraction * delta);
    const double cthr = (1.0 - delta) * (1.0 - delta_pre);

    std::vector<int> preds;
    std::vector<Shield> shields;
    for (std::size_t r = 0; r < partial.records.size(); ++r) {
        const auto& R = partial.records[r];
        if (R.F.proper_subset_of(F)) preds.push_back(static_cast<int>(r));
        if (R.F.dim() < n) shields.push_back({R.F, R.budget.theta});
    }
    // Enlarged slices of F must stay off T(H, theta_H) for every lower H.
    auto shielded = [&](const Functional& psi) {
        for (const auto& sh : shields) {
            double cheap = 0.0;
            for (int a : sh.H.members()) cheap += psi[a] * psi[a];
            cheap = std::sqrt(cheap) / s.ell_sys * (1.0 + sh.theta) + sh.theta;
            if (cheap <= cthr) continue;
            if (tube_reach(s, psi, sh.H, sh.theta) > cthr) return false;
        }
        return true;
    };

    for (int attempt = 0; attempt <= cfg.max_refinements; ++attempt) {
        SphereMesh mesh;
        try {
            mesh = mesh_sphere(s, F, h, cfg.allow_random_mesh, cfg.max_mesh_cells, cfg.seed);
        } catch (const MeshError& e) {
            diag["mesh_h"] = h;
            throw InfeasibleBudget(std::string("mesh failure: ") + e.what(), diag);
        }
        const std::size_t nv = mesh.pts.size();
        const std::size_t nc = mesh.num_cells();

        std::vector<char> inV(nv, 0);
        for (std::size_t v = 0; v < nv; ++v) {
            const std::size_t a = mesh.anti_vertex[v];
            if (a < v) {
                inV[v] = inV[a];
                continue;
            }
            const Point& p = mesh.pts[v];
            bool hit = false;
            for (int r : preds)
                index.visit(r, p, 1.0, [&](int j) {
                    if (!hit && partial.records[r].omega[j].depth(p) > 0.0) hit = true;
                });
            inV[v] = hit;
        }

        const double target = c * delta;
        CoverState st;
        st.needs.assign(nc, 0);
        st.best.assign(nc, -std::numeric_limits<double>::infinity());
        for (std::size_t cc = 0; cc < nc; ++cc) {
            if (static_cast<std::size_t>(mesh.anti_cell[cc]) < cc) continue;
            const int* cv = mesh.cell(cc);
            bool all = true;
            for (int a = 0; a < mesh.arity; ++a) all = all && inV[cv[a]];
            double best = -std::numeric_limits<double>::infinity();
            if (all) {
                for (int r : preds)
                    index.visit(r, mesh.pts[cv[0]], 1.0, [&](int j) {
                        const Slice& S = partial.records[r].omega[j];
                        double dmin = std::numeric_limits<double>::infinity();
                        for (int a = 0; a < mesh.arity; ++a) dmin = std::min(dmin, S.depth(mesh.pts[cv[a]]));
                        best = std::max(best, dmin);
                    });
            }
            st.best[cc] = best;
            if (best < target) {
                st.needs[cc] = 1;
                ++st.remaining;
            }
        }

        Coverer cov(s, mesh, delta, target);
        CoverLists L;
        std::size_t shielded_out = 0;
        for (std::size_t v = 0; v < nv; ++v) {
            if (static_cast<std::size_t>(mesh.anti_vertex[v]) < v || inV[v]) continue;
            if (!shielded(s.grad(mesh.pts[v]))) {
                ++shielded_out;
                continue;
            }
            cov.append(L, static_cast<int>(v), st.needs);
        }
        const std::vector<char> needs0 = st.needs;
        greedy_cover(L, st);
        std::size_t fallback = 0;
        CoverLists L2;
        if (st.remaining > 0) {
            for (std::size_t v = 0; v < nv; ++v) {
                if (static_cast<std::size_t>(mesh.anti_vertex[v]) < v || !inV[v]) continue;
                if (!shielded(s.grad(mesh.pts[v]))) continue;
                cov.append(L2, static_cast<int>(v), st.needs);
            }
            const std::size_t before = st.chosen.size();
            greedy_cover(L2, st);
            fallback = st.chosen.size() - before;
        }
        if (st.remaining > 0) {
            h *= 0.5;
            rec.stats.refinements = attempt + 1;
            continue;
        }

        // Best certified depth of each class over the chosen slices.
        std::vector<char> chosen_flag(nv, 0);
        for (int v : st.chosen) chosen_flag[v] = 1;
        for (const CoverLists* LL : {&L, &L2})
            for (std::size_t i = 0; i < LL->vertex.size(); ++i) {
                if (!chosen_flag[LL->vertex[i]]) continue;
                for (std::size_t k = LL->off[i]; k < LL->off[i + 1]; ++k)
                    st.best[LL->cls[k]] = std::max(st.best[LL->cls[k]], LL->depth[k]);
            }
        double D = std::numeric_limits<double>::infinity();
        for (std::size_t cc = 0; cc < nc; ++cc)
            if (static_cast<std::size_t>(mesh.anti_cell[cc]) >= cc) D = std::min(D, st.best[cc]);
        (void)needs0;

        std::sort(st.chosen.begin(), st.chosen.end());
        for (int v : st.chosen) {
            const Slice S = make_slice(s, mesh.pts[v], delta, 1);
            Slice T = S;
            T.sign = -1;
            rec.omega.push_back(S);
            rec.omega.push_back(T);
        }
        rec.budget.eps = eps;
        rec.budget.theta = std::min(eps, 0.5 * D);
        rec.budget.delta_F = rec.omega.empty() ? enlarge_margin(rec.omega, eps, s) : delta_pre;
        rec.stats.slice_delta = delta;
        rec.stats.depth_cert = D;
        rec.stats.mesh_spacing = mesh.spacing;
        rec.stats.mesh_resolution = mesh.resolution;
        rec.stats.mesh_points = nv;
        rec.stats.mesh_cells = nc;
        rec.stats.candidates = L.vertex.size();
        rec.stats.shielded_out = shielded_out;
        rec.stats.fallback_used = fallback;
        rec.stats.covering_certified = mesh.certified;
        if (!(rec.budget.theta > 0.0)) throw ConstructionError("nonpositive covering depth for " + F.label());
        return rec;
    }
    throw ConstructionError("mesh refinements exhausted without a cover of " + F.label());
}

SliceAtlas run_construction(const Space& s, const ConstructionConfig& cfg)
{
    if (!(cfg.eps_global > 0.0 && cfg.eps_global < 1.0)) throw std::invalid_argument("eps_global must lie in (0,1)");
    if (!(cfg.cover_margin > 0.0 && cfg.cover_margin < 1.0)) throw std::invalid_argument("cover_margin must lie in (0,1)");
    if (!(cfg.ribbon_margin > 0.0 && cfg.ribbon_margin < 1.0)) throw std::invalid_argument("ribbon_margin must lie in (0,1)");
    if (!(cfg.enlarge_fraction > 0.0 && cfg.enlarge_fraction <= 1.0)) throw std::invalid_argument("enlarge_fraction must lie in (0,1]");
    if (!(s.base.eps0 > 0.0)) throw std::invalid_argument("the construction needs eps0 > 0");
    SliceAtlas atlas;
    atlas.d = s.d;
    atlas.space = s;
    atlas.eps_global = cfg.eps_global;
    atlas.mesh_h = cfg.mesh_h;
    atlas.cover_margin = cfg.cover_margin;
    atlas.ribbon_margin = cfg.ribbon_margin;
    atlas.enlarge_fraction = cfg.enlarge_fraction;
    atlas.seed = cfg.seed;
    atlas.budget_policy = cfg.budget_policy;
    AtlasIndex index;
    for (SubspaceId F : enumerate_lattice(s.d, cfg.d_max)) {
        atlas.records.push_back(build_record(atlas, index, F, cfg));
        index.build_record(atlas, static_cast<int>(atlas.records.size()) - 1);
    }
    return atlas;
}

namespace {

json per_f(const SliceAtlas& atlas) { return json{{"subspaces", atlas.records.size()}}; }

// Lower bound on dist_N(p, C) from the Euclidean projection q: (p-q) separates p from C.
struct MarginSample {
    double lower = 0.0;
    double upper = 0.0;
    bool converged = false;
};

MarginSample margin_at(const SliceAtlas& atlas, const AtlasIndex& index, SubspaceId F, const Point& p)
{
    const Space& s = atlas.space;
    const Scope scope = Scope::single(F);
    double dmax = 0.0;
    for (const auto& R : atlas.records)
        if (scope.includes(R.F) && !R.omega.empty()) dmax = std::max(dmax, R.omega.front().delta);
    std::vector<std::pair<int, int>> active;
    auto collect = [&](const Point& y, double slack) {
        bool added = false;
        for (std::size_t r = 0; r < atlas.records.size(); ++r) {
            if (!scope.includes(atlas.records[r].F)) continue;
            index.visit(static_cast<int>(r), y, 1.0 - slack, [&](int j) {
                if (atlas.records[r].omega[j].depth(y) > -slack) {
                    const std::pair<int, int> key{static_cast<int>(r), j};
                    if (std::find(active.begin(), active.end(), key) == active.end()) {
                        active.push_back(key);
                        added = true;
                    }
                }
            });
        }
        return added;
    };
    collect(p, 2.0 * dmax);
    MarginSample out;
    Point q = p;
    for (int round = 0; round < 10; ++round) {
        std::vector<Halfspace> hs;
        for (auto [r, j] : active) {
            const Slice& S = atlas.records[r].omega[j];
            hs.push_back({S.sign * S.psi, 1.0 - S.delta});
        }
        const DykstraResult res = dykstra_project(s, p, hs, 1e-13, 200000);
        q = res.q;
        out.converged = res.converged;
        if (!collect(q, -1e-12)) break;
    }
    const Vec nrm = p - q;
    const double e2 = nrm.squaredNorm();
    out.upper = s.norm(nrm);
    out.lower = e2 > 0 ? e2 / s.dual_norm(nrm) : 0.0;
    return out;
}

}  // namespace

std::vector<CheckEntry> check_construction(const SliceAtlas& atlas, const AtlasIndex& index, int k, std::uint64_t seed)
{
    const Space& s = atlas.space;
    const double M = s.M;
    std::vector<CheckEntry> out;

    CheckEntry c1{"budget_i", true}, c2{"budget_ii", true}, c3{"budget_iii", true};
    CheckEntry c4{"negation_iv", true}, c5{"diameter_v", true}, c6{"exposed_vi", true};
    CheckEntry c7{"margin_vii", true}, c8{"tube_cover_vii", true};
    for (auto* e : {&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8}) e->seed = seed;
    c1.tolerances["exact"] = true;
    c2.tolerances["exact"] = true;
    c3.tolerances["exact"] = true;
    c5.tolerances["strict"] = true;
    c6.tolerances = {{"norm", 1e-9}, {"dist", 1e-9}};
    c7.tolerances = {{"slack", 1e-9}, {"dykstra", 1e-13}};
    c8.tolerances["samples_per_subspace"] = k;

    for (const auto& R : atlas.records) {
        const SubspaceId F = R.F;
        const int n = F.dim();
        const std::string lab = F.label();
        const auto& b = R.budget;

        const bool i_ok = b.theta <= b.eps && b.eps <= atlas.eps_global;
        c1.measured[lab] = {{"theta", b.theta}, {"eps", b.eps}, {"eps_global", atlas.eps_global}};
        c1.pass = c1.pass && i_ok;

        const double cap = 1.0 / (4.0 * n * M);
        c2.measured[lab] = {{"eps", b.eps}, {"cap", cap}};
        c2.pass = c2.pass && b.eps <= cap;

        json viol = json::array();
        for (const auto& G : atlas.records)
            if (G.F.proper_subset_of(F)) {
                const double capG = G.budget.theta / (4.0 * n * M);
                if (!(b.eps <= capG)) viol.push_back({{"G", G.F.label()}, {"cap", capG}});
            }
        c3.measured[lab] = {{"eps", b.eps}, {"violations", viol}};
        c3.pass = c3.pass && viol.empty();

        std::size_t unmatched = 0;
        for (std::size_t j = 0; j < R.omega.size(); ++j) {
            const Slice& S = R.omega[j];
            bool found = false;
            for (std::size_t t : {j + 1, j - 1}) {
                if (t >= R.omega.size()) continue;
                const Slice& T = R.omega[t];
                if (T.sign == -S.sign && T.delta == S.delta && T.x == S.x && T.psi == S.psi) found = true;
            }
            if (!found) {
                for (const Slice& T : R.omega)
                    if (T.sign == -S.sign && T.delta == S.delta && T.x == S.x && T.psi == S.psi) {
                        found = true;
                        break;
                    }
            }
            unmatched += found ? 0 : 1;
        }
        c4.measured[lab] = {{"slices", R.omega.size()}, {"unmatched", unmatched}};
        c4.pass = c4.pass && unmatched == 0;

        double dmax = 0.0;
        for (const Slice& S : R.omega) dmax = std::max(dmax, diam_upper_bound(S, s));
        c5.measured[lab] = {{"max_certified_diameter", dmax}, {"eps", b.eps}};
        c5.pass = c5.pass && (R.omega.empty() || dmax < b.eps);

        double worst_norm = 0.0, worst_gap = std::numeric_limits<double>::infinity();
        bool off_span = false;
        for (const Slice& S : R.omega) {
            if (S.sign < 0) continue;
            worst_norm = std::max(worst_norm, std::abs(s.norm(S.x) - 1.0));
            for (int a = 0; a < s.d; ++a)
                if (!F.contains(a) && S.x[a] != 0.0) off_span = true;
            for (const auto& G : atlas.records)
                if (G.F.proper_subset_of(F))
                    worst_gap = std::min(worst_gap, dist_to_subspace(s, S.x, G.F).dist - G.budget.theta);
        }
        const bool vi_ok = worst_norm <= 1e-9 && !off_span && !(worst_gap < -1e-9);
        c6.measured[lab] = {{"max_norm_defect", worst_norm}, {"off_span", off_span},
                            {"min_dist_minus_theta", std::isfinite(worst_gap) ? json(worst_gap) : json(nullptr)}};
        c6.pass = c6.pass && vi_ok;

        CounterRng rng(seed, F.mask, "margin_vii");
        double min_lower = std::numeric_limits<double>::infinity(), min_upper = min_lower;
        bool all_conv = true;
        const int km = std::min(k, 40);
        for (int t = 0; t < km; ++t) {
            const Point p = sphere_point(rng, s, F);
            const MarginSample ms = margin_at(atlas, index, F, p);
            min_lower = std::min(min_lower, ms.lower);
            min_upper = std::min(min_upper, ms.upper);
            all_conv = all_conv && ms.converged;
        }
        c7.measured[lab] = {{"two_theta", 2.0 * b.theta}, {"min_dist_lower", min_lower}, {"min_dist_upper", min_upper},
                            {"depth_certificate", R.stats.depth_cert}, {"samples", km}, {"dykstra_converged", all_conv}};
        c7.pass = c7.pass && 2.0 * b.theta <= min_lower + 1e-9 && 2.0 * b.theta <= R.stats.depth_cert;

        CounterRng trng(seed, F.mask, "tube_cover_vii");
        std::size_t misses = 0, tested = 0;
        const Scope scope = Scope::single(F);
        while (tested < static_cast<std::size_t>(k)) {
            const Point w = sphere_point(trng, s, F);
            const Point dir = sphere_point(trng, s);
            const Point raw = w + (trng.uniform() * b.theta) * dir;
            const Point y = raw / s.norm(raw);
            if (!(dist_to_subspace(s, y, F).dist < b.theta)) continue;
            ++tested;
            if (!in_union_of_slices(atlas, index, scope, y)) ++misses;
        }
        c8.measured[lab] = {{"tested", tested}, {"misses", misses}};
        c8.pass = c8.pass && misses == 0;
    }
    (void)per_f;
    for (auto* e : {&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8}) out.push_back(*e);
    return out;
}

CheckEntry check_compatibility(const SliceAtlas& atlas, const AtlasIndex& index, SubspaceId F, int n, int k,
                               std::uint64_t seed)
{
    if (F.dim() > n) throw std::invalid_argument("check_compatibility needs dim F <= n");
    const Space& s = atlas.space;
    const auto& R = atlas.at(F);
    const double rad = 0.5 * R.budget.theta;
    CounterRng rng(seed, F.mask ^ (std::uint64_t(n) << 32), "compatibility");
    std::size_t bad = 0, inside_F = 0, tested = 0;
    json witness = nullptr;
    while (tested < static_cast<std::size_t>(k)) {
        const Point u = sphere_point(rng, s, F);
        // Radius mixture: interior, across the boundary of P_F in span F, near the sphere.
        const double pick = rng.uniform();
        double r;
        if (pick < 0.25) r = rng.uniform();
        else if (pick < 0.75) r = (1.0 + 4.0 * R.budget.theta * (rng.uniform() - 0.5)) / mu_p_eval(atlas, index, u);
        else r = 1.0 - 0.05 * rng.uniform();
        const Point z = sphere_point(rng, s) * (rng.uniform() * rad);
        const Point y = r * u + z;
        if (s.norm(y) > 1.0) continue;
        ++tested;
        const bool a = body_membership(atlas, index, Scope::level(n), y);
        const bool b = body_membership(atlas, index, Scope::single(F), y);
        if (b) ++inside_F;
        if (a != b) {
            ++bad;
            if (witness.is_null()) witness = std::vector<double>(y.data(), y.data() + y.size());
        }
    }
    CheckEntry e;
    e.id = "compatibility" + F.label() + "_n" + std::to_string(n);
    e.pass = bad == 0;
    e.seed = seed;
    e.measured = {{"samples", tested}, {"discrepancies", bad}, {"inside_P_F", inside_F}, {"tube_radius", rad}};
    if (!witness.is_null()) e.measured["witness"] = witness;
    e.tolerances["linear"] = kLinearTol;
    return e;
}

}  // namespace renorm
