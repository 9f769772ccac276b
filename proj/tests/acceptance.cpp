#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "renorm/config.hpp"
#include "renorm/construction.hpp"
#include "renorm/pipeline.hpp"
#include "renorm/slice_index.hpp"

using namespace renorm;

namespace {

// Pinned sizes and tolerances; the pipeline defaults must match them.
constexpr int kCompatibilitySamples = 1000;
constexpr int kRestrictionSamples = 1000;
constexpr int kSandwichSamples = 10000;
constexpr int kLfcPoints = 100;
constexpr int kLfcNeighbors = 1000;
constexpr int kSmoothSandwich = 10000;
constexpr int kGradientSamples = 1000;
constexpr double kGradientTol = 1e-5;
constexpr double kLocalityTol = 1e-12;
constexpr double kLfcTol = 1e-10;
constexpr int kJSandwich = 10000;
constexpr double kLipschitzSlack = 1e-6;
constexpr int kZSamples = 1000;
constexpr double kTailTol = 1e-6;
constexpr int kLurK = 8;
constexpr int kProbePoints = 10;
constexpr int kDiameterSamples = 10000;
constexpr double kD3BudgetSeconds = 60.0;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

// All entries of the certificate whose id starts with prefix.
std::vector<const CheckEntry*> entries(const Certificate& c, const std::string& prefix)
{
    std::vector<const CheckEntry*> out;
    for (const auto& [name, list] : c.sections)
        for (const auto& e : list)
            if (e.id.rfind(prefix, 0) == 0) out.push_back(&e);
    return out;
}

void require_all(Verdict& v, const Certificate& c, const std::string& prefix, const std::string& tag)
{
    const auto es = entries(c, prefix);
    v.require(!es.empty(), tag + " missing " + prefix);
    for (const CheckEntry* e : es) v.require(e->pass, tag + " " + e->id);
}

void report(int k, const Verdict& v, const std::string& summary)
{
    std::ostringstream os;
    for (const auto& n : v.notes) os << "; " << n;
    std::printf("criterion %d %s: %s%s\n", k, v.pass ? "PASS" : "FAIL", summary.c_str(), os.str().c_str());
    std::fflush(stdout);
}

RunConfig default_config(int d)
{
    RunConfig cfg;
    cfg.d = d;
    cfg.seed = 0;
    return cfg;
}

void pin_defaults(Verdict& v, const RunConfig& cfg)
{
    const CheckSizes& c = cfg.checks;
    v.require(cfg.tolerance_scale == 1.0, "tolerance_scale is not 1");
    v.require(c.compatibility_samples == kCompatibilitySamples && c.polyhedral_samples == kRestrictionSamples &&
                  c.polyhedral_sandwich == kSandwichSamples && c.lfc_points == kLfcPoints &&
                  c.lfc_neighbors == kLfcNeighbors && c.diameter_samples == kDiameterSamples,
              "polyhedral sample sizes differ from the pinned values");
    v.require(c.smooth.sandwich_samples == kSmoothSandwich && c.smooth.gradient_samples == kGradientSamples &&
                  c.smooth.gradient_tol == kGradientTol && c.smooth.locality_tol == kLocalityTol &&
                  c.smooth.lfc_tol == kLfcTol,
              "smooth settings differ from the pinned values");
    v.require(c.lur.sandwich_samples == kJSandwich && c.lur.lipschitz_slack == kLipschitzSlack &&
                  c.lur.z_samples == kZSamples && c.lur.tail_tol == kTailTol && c.lur.probe_points == kProbePoints &&
                  cfg.lur.K == kLurK,
              "LUR settings differ from the pinned values");
}

}  // namespace

int main()
{
    bool all = true;
    const auto t_total = std::chrono::steady_clock::now();

    // 1. Slice budgets (i)-(vii) under the strict coupling.
    {
        Verdict v;
        std::ostringstream sum;
        for (int d = 1; d <= 3; ++d) {
            const auto t0 = std::chrono::steady_clock::now();
            ConstructionConfig cc;
            cc.budget_policy = "strict";
            cc.seed = 0;
            try {
                const SliceAtlas a = run_construction(make_space(d, BaseNorm{}), cc);
                const AtlasIndex idx(a);
                bool ok = true;
                for (const CheckEntry& e : check_construction(a, idx, 200, 0)) {
                    v.require(e.pass, "d=" + std::to_string(d) + " " + e.id);
                    ok = ok && e.pass;
                }
                const double t = seconds_since(t0);
                sum << "d=" << d << " strict " << (ok ? "ok" : "violations") << " (" << t << " s) ";
                if (d == 3) v.require(t <= kD3BudgetSeconds, "d=3 runtime above budget");
            } catch (const InfeasibleBudget& e) {
                v.require(false, "d=" + std::to_string(d) + " strict infeasible: " + e.what() + " eps_F=" +
                                     e.diagnostics.value("eps_F", json(nullptr)).dump() +
                                     " slice_delta=" + e.diagnostics.value("slice_delta", json(nullptr)).dump());
                sum << "d=" << d << " strict infeasible (" << seconds_since(t0) << " s) ";
            }
        }
        report(1, v, sum.str());
        all = all && v.pass;
    }

    // Default pipelines (uncoupled budgets, seed 0) feed criteria 2-7.
    const auto t3 = std::chrono::steady_clock::now();
    const RunConfig cfg3 = default_config(3);
    const PipelineOutput run3 = run_pipeline(cfg3);
    const double secs3 = seconds_since(t3);
    const auto t2 = std::chrono::steady_clock::now();
    const RunConfig cfg2 = default_config(2);
    const PipelineOutput run2 = run_pipeline(cfg2);
    const double secs2 = seconds_since(t2);
    std::printf("pipelines: d=3 %.1f s, d=2 %.1f s\n", secs3, secs2);
    for (const auto* run : {&run3, &run2})
        for (const CheckEntry* e : entries(run->cert, "budget_iii"))
            std::printf("note: %s %s under the uncoupled policy\n", e->id.c_str(), e->pass ? "passes" : "fails");

    // 2. Compatibility at d = 3 for every F and n >= dim F.
    {
        Verdict v;
        pin_defaults(v, cfg3);
        const auto es = entries(run3.cert, "compatibility");
        v.require(es.size() == 3 * 3 + 3 * 2 + 1, "expected 16 (F, n) pairs");
        std::size_t samples = 0;
        for (const CheckEntry* e : es) {
            v.require(e->pass, e->id);
            v.require(e->measured["samples"].get<int>() == kCompatibilitySamples, e->id + " sample count");
            samples += e->measured["samples"].get<std::size_t>();
        }
        report(2, v, std::to_string(es.size()) + " (F, n) pairs, " + std::to_string(samples) + " samples");
        all = all && v.pass;
    }

    // 3. Polyhedrality: restriction identity, vertex interiority, sandwich.
    {
        Verdict v;
        for (const auto* run : {&run3, &run2}) {
            const std::string tag = run == &run3 ? "d=3" : "d=2";
            require_all(v, run->cert, "polyhedral_restriction", tag);
            require_all(v, run->cert, "polyhedral_sandwich", tag);
            for (const CheckEntry* e : entries(run->cert, "polyhedral_sandwich"))
                v.require(e->measured["samples"].get<int>() == kSandwichSamples, tag + " sandwich sample count");
        }
        std::size_t vertices = 0;
        for (const CheckEntry* e : entries(run3.cert, "polyhedral_restriction"))
            if (e->measured.contains("vertices")) vertices += e->measured["vertices"].get<std::size_t>();
        report(3, v, "d=3 vertices enumerated over all F: " + std::to_string(vertices));
        all = all && v.pass;
    }

    // 4. LFC witnesses of the polyhedral norm.
    {
        Verdict v;
        for (const auto* run : {&run3, &run2}) {
            const std::string tag = run == &run3 ? "d=3" : "d=2";
            require_all(v, run->cert, "polyhedral_lfc", tag);
            for (const CheckEntry* e : entries(run->cert, "polyhedral_lfc"))
                v.require(e->measured["points"].get<int>() == kLfcPoints &&
                              e->measured["neighbors_each"].get<int>() == kLfcNeighbors,
                          tag + " lfc sample sizes");
        }
        report(4, v, "100 sphere points x 1000 neighbours at d=2 and d=3");
        all = all && v.pass;
    }

    // 5. Smooth norm: sandwich chain, gradient, locality, LFC invariance.
    {
        Verdict v;
        pin_defaults(v, cfg2);
        std::ostringstream sum;
        for (const auto* run : {&run2, &run3}) {
            const std::string tag = run == &run3 ? "d=3" : "d=2";
            for (const char* id : {"smooth_sandwich", "smooth_gradient", "smooth_locality", "smooth_lfc"})
                require_all(v, run->cert, id, tag);
            for (const CheckEntry* e : entries(run->cert, "smooth_gradient"))
                sum << tag << " gradient failures " << e->measured.value("failures", json(nullptr)).dump()
                    << " max rel " << e->measured.value("max_rel_error", json(nullptr)).dump() << " ";
        }
        report(5, v, sum.str());
        all = all && v.pass;
    }

    // 6. LUR norm.
    {
        Verdict v;
        std::ostringstream sum;
        for (const auto* run : {&run2, &run3}) {
            const std::string tag = run == &run3 ? "d=3" : "d=2";
            for (const char* id : {"lur_j_sandwich", "lur_lipschitz", "lur_z_bracket", "lur_tail", "lur_probe",
                                   "lur_c1_modulus", "lur_norm_bracket", "lur_flats", "lur_psi_monotone"})
                require_all(v, run->cert, id, tag);
        }
        for (const CheckEntry* e : entries(run2.cert, "lur_tail"))
            sum << "d=2 tail " << e->measured.value("tail_envelope", json(nullptr)).dump();
        report(6, v, sum.str());
        all = all && v.pass;
    }

    // 7. Oracles.
    {
        Verdict v;
        std::ostringstream sum;
        for (const auto* run : {&run2, &run3}) {
            const std::string tag = run == &run3 ? "d=3" : "d=2";
            for (const char* id : {"euclidean_slice_diameter", "euclidean_modulus", "polyhedral_face_modulus"})
                require_all(v, run->cert, id, tag);
            for (const CheckEntry* e : entries(run->cert, "euclidean_slice_diameter")) {
                v.require(e->measured["samples"].get<int>() == kDiameterSamples, tag + " diameter samples");
                sum << tag << " diameter rel " << e->measured["rel_error"].get<double>() << " ";
            }
            for (const CheckEntry* e : entries(run->cert, "polyhedral_face_modulus"))
                sum << tag << " face ratio " << e->measured["ratio_small_over_large"].get<double>() << " ";
        }
        report(7, v, sum.str());
        all = all && v.pass;
    }

    // 8. Determinism.
    {
        Verdict v;
        const PipelineOutput again = run_pipeline(cfg2);
        v.require(again.atlas.dump() == run2.atlas.dump(), "atlas bytes differ");
        v.require(again.cert.content_hash() == run2.cert.content_hash(), "certificate hashes differ");
        v.require(again.csv == run2.csv, "ball sections differ");
        report(8, v, "d=2 certificate " + run2.cert.content_hash().substr(0, 16));
        all = all && v.pass;
    }

    std::printf("acceptance %s (%.1f s)\n", all ? "PASS" : "FAIL", seconds_since(t_total));
    return all ? 0 : 1;
}
