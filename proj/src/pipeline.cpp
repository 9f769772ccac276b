#include "renorm/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "renorm/atlas_io.hpp"
#include "renorm/construction.hpp"
#include "renorm/lur.hpp"
#include "renorm/polyhedral.hpp"
#include "renorm/sampling.hpp"
#include "renorm/slices.hpp"
#include "renorm/smoothing.hpp"
#include "renorm/verify.hpp"

namespace renorm {

namespace {

Space build_space(const RunConfig& cfg)
{
    try {
        if (cfg.E) return normalize_system(*cfg.E, *cfg.Phi, cfg.base);
        return make_space(cfg.d, cfg.base);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("system: ") + e.what());
    }
}

std::vector<CheckEntry> space_checks(const Space& s, std::uint64_t seed)
{
    std::vector<CheckEntry> out;
    {
        const double resid = (s.Phi * s.E - Mat::Identity(s.d, s.d)).cwiseAbs().maxCoeff();
        double unit = 0.0;
        for (int a = 0; a < s.d; ++a) unit = std::max(unit, std::abs(s.norm(s.unit(a)) - 1.0));
        CheckEntry e;
        e.id = "space_biorthogonality";
        e.seed = seed;
        e.pass = resid <= 1e-10 && unit <= 1e-12;
        e.measured = {{"residual", resid}, {"unit_defect", unit}, {"M", s.M}};
        e.tolerances = {{"residual", 1e-10}, {"unit", 1e-12}};
        out.push_back(e);
    }
    {
        CounterRng rng(seed, 0, "space_distance_bounds");
        const auto lattice = enumerate_lattice(s.d);
        std::size_t bad = 0;
        const int k = 100;
        for (int t = 0; t < k; ++t) {
            const SubspaceId F = lattice[rng() % lattice.size()];
            const SubspaceId G = lattice[rng() % lattice.size()];
            const Point x = sphere_point(rng, s, F);
            if (!check_biorthogonal_bounds(s, x, F, G).pass) ++bad;
        }
        CheckEntry e;
        e.id = "space_distance_bounds";
        e.seed = seed;
        e.pass = bad == 0;
        e.measured = {{"triples", k}, {"violations", bad}};
        e.tolerances = {{"additive", 1e-8}};
        out.push_back(e);
    }
    return out;
}

CheckEntry polyhedral_lfc(const SliceAtlas& atlas, const AtlasIndex& index, int points, int neighbors,
                          std::uint64_t seed)
{
    const Space& s = atlas.space;
    CounterRng rng(seed, 0, "polyhedral_lfc_points");
    std::size_t bad = 0, functionals = 0;
    for (int p = 0; p < points; ++p) {
        const SubspaceId F = atlas.records[rng() % atlas.records.size()].F;
        const Point u = sphere_point(rng, s, F);
        const Point x = u / mu_p_eval(atlas, index, u);
        const LfcWitness w = lfc_witness(atlas, index, x);
        functionals = std::max(functionals, w.functionals.size());
        bad += lfc_violations(atlas, index, x, w, neighbors, seed + std::uint64_t(p));
    }
    CheckEntry e;
    e.id = "polyhedral_lfc";
    e.seed = seed;
    e.pass = bad == 0;
    e.measured = {{"points", points}, {"neighbors_each", neighbors}, {"violations", bad},
                  {"max_witness_functionals", functionals}};
    e.tolerances = {{"linear", kLinearTol}};
    return e;
}

CheckEntry diameter_oracle(const Space& s, int k, std::uint64_t seed)
{
    const double delta = 0.02;
    const Slice S = make_slice(s, s.unit(0), delta);
    const DiameterBound b = diam_monte_carlo(S, s, k, seed);
    const double exact = s.d == 1 ? delta : 2.0 * std::sqrt(2.0 * delta - delta * delta);
    const double rel = std::abs(b.lower - exact) / exact;
    CheckEntry e;
    e.id = "euclidean_slice_diameter";
    e.seed = seed;
    e.pass = rel <= 0.02 && b.lower <= b.upper;
    e.measured = {{"delta", delta}, {"monte_carlo", b.lower}, {"exact", exact}, {"rel_error", rel},
                  {"certified_upper", b.upper}, {"samples", k}};
    e.tolerances = {{"rel", 0.02}};
    return e;
}

CheckEntry euclidean_modulus(const NormHandle& base, int d, int k, std::uint64_t seed)
{
    const std::vector<double> taus = {0.1, 0.01};
    const auto rows = smoothness_modulus_estimate(base, taus, k, seed, d);
    std::size_t bad = 0;
    json table = json::array();
    for (const auto& r : rows) {
        const double exact = std::sqrt(1.0 + r.tau * r.tau) - 1.0;
        if (r.rho > exact + 1e-12 || r.rho < 0.0) ++bad;
        table.push_back({{"tau", r.tau}, {"rho", r.rho}, {"exact", exact}});
    }
    CheckEntry e;
    e.id = "euclidean_modulus";
    e.seed = seed;
    e.pass = bad == 0;
    e.measured = {{"pairs", k}, {"table", table}};
    e.tolerances = {{"abs", 1e-12}};
    return e;
}

CheckEntry face_modulus_entry(const NormHandle& mu_p, const std::vector<Point>& vertices, std::uint64_t seed)
{
    const FaceModulus fm = polyhedral_face_modulus(mu_p, vertices, {0.1, 0.01, 0.001});
    const double r_hi = fm.rho[0] / fm.taus[0];
    const double r_lo = fm.rho[2] / fm.taus[2];
    const double ratio = r_hi > 0.0 ? r_lo / r_hi : 0.0;
    json table = json::array();
    for (std::size_t i = 0; i < fm.taus.size(); ++i)
        table.push_back({{"tau", fm.taus[i]}, {"rho", fm.rho[i]}, {"rho_over_tau", fm.rho[i] / fm.taus[i]}});
    CheckEntry e;
    e.id = "polyhedral_face_modulus";
    e.seed = seed;
    e.pass = ratio >= 0.1;
    e.measured = {{"pairs", fm.pairs}, {"table", table}, {"ratio_small_over_large", ratio}};
    e.tolerances = {{"min_ratio", 0.1}};
    return e;
}

CheckEntry modulus_report(const NormHandle& h, int d, int k, std::uint64_t seed)
{
    const auto rows = smoothness_modulus_estimate(h, {0.1, 0.01, 0.001}, k, seed, d);
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.rho >= -1e-15;
    CheckEntry e;
    e.id = "modulus_" + h.name;
    e.seed = seed;
    e.pass = ok;
    e.measured = {{"pairs", k}, {"table", modulus_json(rows)}};
    e.tolerances = {{"rho_min", -1e-15}};
    return e;
}

CheckEntry failure_entry(const std::string& id, const std::string& what, json diag, std::uint64_t seed)
{
    CheckEntry e;
    e.id = id;
    e.seed = seed;
    e.pass = false;
    e.measured = {{"error", what}};
    if (!diag.is_null()) e.measured["diagnostics"] = std::move(diag);
    return e;
}

}  // namespace

FaceModulus polyhedral_face_modulus(const NormHandle& mu_p, const std::vector<Point>& vertices,
                                    const std::vector<double>& taus, std::size_t max_pairs)
{
    FaceModulus fm;
    fm.taus = taus;
    fm.rho.assign(taus.size(), 0.0);
    if (vertices.size() < 2) return fm;
    const std::size_t stride = std::max<std::size_t>(1, vertices.size() / max_pairs);
    for (std::size_t i = 0; i < vertices.size(); i += stride) {
        const Point& v = vertices[i];
        std::size_t best = i;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < vertices.size(); ++j) {
            if (j == i) continue;
            const double dd = (vertices[j] - v).squaredNorm();
            if (dd > 0.0 && dd < bd) {
                bd = dd;
                best = j;
            }
        }
        if (best == i) continue;
        const auto rows = modulus_along(mu_p, v, Point(vertices[best] - v), taus);
        for (std::size_t t = 0; t < taus.size(); ++t) fm.rho[t] = std::max(fm.rho[t], rows[t].rho);
        ++fm.pairs;
    }
    return fm;
}

std::string ball_sections_csv(int d, const std::vector<NormHandle>& norms)
{
    std::ostringstream os;
    os.precision(17);
    if (d == 2) {
        os << "norm,angle,radius\n";
        for (const auto& n : norms)
            for (int i = 0; i < 720; ++i) {
                const double a = 2.0 * M_PI * i / 720.0;
                Point u(2);
                u << std::cos(a), std::sin(a);
                os << n.name << ',' << a << ',' << 1.0 / n.eval(u) << '\n';
            }
    } else if (d == 3) {
        os << "norm,polar,azimuth,radius\n";
        for (const auto& n : norms)
            for (int i = 0; i < 40; ++i)
                for (int k = 0; k < 80; ++k) {
                    const double th = M_PI * (i + 0.5) / 40.0;
                    const double ph = 2.0 * M_PI * k / 80.0;
                    Point u(3);
                    u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
                    os << n.name << ',' << th << ',' << ph << ',' << 1.0 / n.eval(u) << '\n';
                }
    }
    return os.str();
}

PipelineOutput run_pipeline(const RunConfig& cfg_in)
{
    RunConfig cfg = cfg_in;
    cfg.construction.seed = cfg.seed;
    cfg.validate();
    const CheckSizes checks = effective_checks(cfg);
    const std::uint64_t seed = cfg.seed;

    PipelineOutput out;
    out.cert.config = cfg.to_json();
    out.cert.authoritative = cfg.tolerance_scale == 1.0;

    const Space space = build_space(cfg);
    std::vector<NormHandle> sections_norms = {base_norm_handle(space)};
    sections_norms[0].name = "base";

    std::unique_ptr<SliceAtlas> atlas;
    std::unique_ptr<AtlasIndex> index;
    std::unique_ptr<SmoothBody> body;
    std::unique_ptr<LurNorm> lur;
    NormHandle mu_p;

    if (cfg.has("atlas")) {
        for (auto& e : space_checks(space, seed)) out.cert.add("space", std::move(e));
        try {
            atlas = std::make_unique<SliceAtlas>(run_construction(space, cfg.construction));
        } catch (const InfeasibleBudget& e) {
            out.cert.add("atlas", failure_entry("construction", e.what(), e.diagnostics, seed));
        } catch (const ConstructionError& e) {
            out.cert.add("atlas", failure_entry("construction", e.what(), nullptr, seed));
        }
        if (atlas) {
            index = std::make_unique<AtlasIndex>(*atlas);
            out.atlas = atlas_to_json(*atlas);
            out.cert.atlas_hash = out.atlas.at("content_hash").get<std::string>();
            for (auto& e : check_construction(*atlas, *index, checks.construction_samples, seed))
                out.cert.add("atlas", std::move(e));
            const SliceAtlas* a = atlas.get();
            const AtlasIndex* ix = index.get();
            mu_p = {"mu_P", [a, ix](const Point& x) { return mu_p_eval(*a, *ix, x); }, nullptr};
        }
    }

    if (cfg.has("polyhedral") && atlas) {
        for (const auto& R : atlas->records)
            for (int n = R.F.dim(); n <= cfg.d; ++n)
                out.cert.add("polyhedral",
                             check_compatibility(*atlas, *index, R.F, n, checks.compatibility_samples, seed));
        for (const auto& R : atlas->records)
            out.cert.add("polyhedral",
                         verify_polyhedral_restriction(*atlas, *index, R.F, checks.polyhedral_samples, seed));
        CheckEntry sw = equivalence_audit(sections_norms[0], mu_p, 1.0 / (1.0 - cfg.construction.eps_global),
                                          checks.polyhedral_sandwich, seed, space);
        sw.id = "polyhedral_sandwich";
        out.cert.add("polyhedral", std::move(sw));
        out.cert.add("polyhedral", polyhedral_lfc(*atlas, *index, checks.lfc_points, checks.lfc_neighbors, seed));
    }

    if (cfg.has("smooth") && atlas) {
        body = std::make_unique<SmoothBody>(*atlas, *index);
        for (auto& e : check_smooth(*body, checks.smooth, seed)) out.cert.add("smooth", std::move(e));
    }

    if (cfg.has("lur") && (body || cfg.lur_ambient == "base")) {
        const NormHandle amb = cfg.lur_ambient == "base" ? base_norm_handle(space) : smooth_norm_handle(*body);
        lur = std::make_unique<LurNorm>(space, amb, cfg.lur);
        for (auto& e : check_lur(*lur, checks.lur, seed)) out.cert.add("lur", std::move(e));
    }

    if (atlas) sections_norms.push_back(mu_p);
    if (body) sections_norms.push_back(smooth_norm_handle(*body));
    if (lur) sections_norms.push_back(lur_norm_handle(*lur));

    if (cfg.has("verify")) {
        const NormHandle base = base_norm_handle(space);
        out.cert.add("verify", gradient_check(base, space.unit(0)));
        const double factor = 1.0 / (1.0 - cfg.construction.eps_global);
        if (atlas) out.cert.add("verify", equivalence_audit(base, mu_p, factor, checks.equivalence_samples, seed, space));
        if (body) {
            const NormHandle mb = smooth_norm_handle(*body);
            out.cert.add("verify", equivalence_audit(base, mb, factor, checks.equivalence_samples, seed, space));
            out.cert.add("verify", modulus_report(mb, cfg.d, checks.modulus_pairs, seed));
        }
        if (lur) {
            const double c = std::sqrt(1.0 + 4.0 * cfg.lur.eps) / (1.0 - cfg.lur.eps);
            out.cert.add("verify", equivalence_audit(lur->ambient, lur_norm_handle(*lur), c,
                                                     checks.equivalence_samples / 10, seed, space, 1e-12));
            out.cert.add("verify", modulus_report(lur_norm_handle(*lur), cfg.d, checks.modulus_pairs / 10, seed));
        }
        // N is a multiple of |.|_2 in system coordinates.
        const bool euclid = space.quadratic &&
                            (space.Q - space.Q(0, 0) * Mat::Identity(cfg.d, cfg.d)).cwiseAbs().maxCoeff() <=
                                1e-14 * space.Q(0, 0);
        if (euclid) {
            out.cert.add("verify", diameter_oracle(space, checks.diameter_samples, seed));
            out.cert.add("verify", euclidean_modulus(base, cfg.d, checks.modulus_pairs, seed));
        }
        if (atlas && cfg.d >= 2 && cfg.d <= 3) {
            const VertexReport vr = enumerate_vertices(*atlas, full_subspace(cfg.d));
            out.cert.add("verify", face_modulus_entry(mu_p, vr.points, seed));
        }
    }

    if (cfg.d == 2 || cfg.d == 3) out.csv = ball_sections_csv(cfg.d, sections_norms);

    if (!out.cert.passed()) {
        json fails = json::array();
        for (const auto& [name, list] : out.cert.sections)
            for (const auto& e : list)
                if (!e.pass) fails.push_back({{"section", name}, {"entry", e.to_json()}});
        out.repro = {{"config", out.cert.config}, {"seed", seed}, {"failures", fails}};
    }
    return out;
}

void write_artifacts(const PipelineOutput& out, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    auto write = [&](const char* name, const std::string& text) {
        std::ofstream f(path(name), std::ios::binary);
        if (!f) throw std::runtime_error(std::string("cannot write ") + path(name));
        f << text;
    };
    if (!out.atlas.is_null()) write("atlas.json", out.atlas.dump() + "\n");
    write("certificate.json", out.cert.to_json().dump(1) + "\n");
    if (!out.csv.empty()) write("ball_sections.csv", out.csv);
    std::filesystem::remove(path("repro.json"));
    if (!out.repro.is_null()) write("repro.json", out.repro.dump(1) + "\n");
}

}  // namespace renorm
