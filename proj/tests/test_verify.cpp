#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "renorm/certificate.hpp"
#include "renorm/pipeline.hpp"
#include "renorm/verify.hpp"

using namespace renorm;

TEST_CASE("gradient check on the Euclidean norm")
{
    const Space s = make_space(3, BaseNorm{});
    const NormHandle n = base_norm_handle(s);
    CHECK(gradient_rel_error(n, s.unit(0)) <= 1e-10);
    const CheckEntry e = gradient_check(n, s.unit(2));
    CHECK(e.pass);
    CHECK(e.id == "gradient_base");
    const NormHandle no_grad{"plain", n.eval, nullptr};
    CHECK_THROWS_AS(gradient_rel_error(no_grad, s.unit(0)), std::invalid_argument);
}

TEST_CASE("gradient of the smooth norm")
{
    const auto& b = fixtures::euclidean(2);
    const NormHandle mu = smooth_norm_handle(*b.body);
    CounterRng rng(61, 0, "smooth_grad");
    for (int t = 0; t < 100; ++t) {
        const Point x = sphere_point(rng, b.atlas.space) * rng.uniform(0.5, 2.0);
        CHECK(gradient_rel_error(mu, x, 1e-8) <= 1e-5);
        CHECK((mu.grad(x) - mu.grad(3.0 * x)).norm() <= 1e-9);
    }
}

TEST_CASE("equivalence audits")
{
    const auto& b = fixtures::euclidean(2);
    const Space& s = b.atlas.space;
    const NormHandle base = base_norm_handle(s);
    const CheckEntry same = equivalence_audit(base, base, 1.0, 1000, 0, s);
    CHECK(same.pass);
    CHECK(same.measured["min_ratio"].get<double>() == 1.0);
    CHECK(same.measured["max_ratio"].get<double>() == 1.0);

    const SliceAtlas& a = b.atlas;
    const AtlasIndex& idx = *b.index;
    const NormHandle mu_p{"mu_P", [&a, &idx](const Point& x) { return mu_p_eval(a, idx, x); }, nullptr};
    const double f = 1.0 / (1.0 - a.eps_global);
    CHECK(equivalence_audit(base, mu_p, f, 2000, 1, s).pass);
    CHECK(equivalence_audit(base, smooth_norm_handle(*b.body), f, 2000, 1, s).pass);

    // A factor below the true ratio is caught.
    const CheckEntry tight = equivalence_audit(base, mu_p, 1.0 + 1e-6, 2000, 1, s);
    CHECK_FALSE(tight.pass);
    CHECK(tight.measured.contains("witness"));
    CHECK_THROWS_AS(equivalence_audit(base, base, 0.0, 10, 0, s), std::invalid_argument);
}

TEST_CASE("property: modulus of the Euclidean norm")
{
    const Space s = make_space(3, BaseNorm{});
    const NormHandle n = base_norm_handle(s);
    const std::vector<double> taus = {1.0, 0.5, 0.1, 0.01, 0.001};
    const auto rows = smoothness_modulus_estimate(n, taus, 2000, 0, 3);
    for (const auto& r : rows) {
        CHECK(r.rho >= 0.0);
        CHECK(r.rho <= std::sqrt(1.0 + r.tau * r.tau) - 1.0 + 1e-15);
        // The sampled sup approaches the closed form for orthogonal pairs.
        CHECK(r.rho >= 0.95 * (std::sqrt(1.0 + r.tau * r.tau) - 1.0));
    }
    CounterRng rng(62, 0, "modulus_pairs");
    for (int t = 0; t < 200; ++t) {
        const Point x = sphere_point(rng, s), h = sphere_point(rng, s);
        for (const auto& r : modulus_along(n, x, h, taus)) {
            CHECK(r.rho >= -1e-15);
            CHECK(r.rho <= std::sqrt(1.0 + r.tau * r.tau) - 1.0 + 1e-15);
        }
    }
    CHECK(modulus_json(rows).size() == taus.size());
}

TEST_CASE("modulus of the polyhedral norm stays linear along faces")
{
    const auto& b = fixtures::euclidean(2);
    const SliceAtlas& a = b.atlas;
    const AtlasIndex& idx = *b.index;
    const NormHandle mu_p{"mu_P", [&a, &idx](const Point& x) { return mu_p_eval(a, idx, x); }, nullptr};
    const VertexReport vr = enumerate_vertices(a, full_subspace(2));
    const FaceModulus fm = polyhedral_face_modulus(mu_p, vr.points, {0.1, 0.01, 0.001});
    REQUIRE(fm.rho.size() == 3);
    CHECK(fm.pairs > 0);
    CHECK(fm.rho[2] / 0.001 >= 0.1 * fm.rho[0] / 0.1);
}

TEST_CASE("certificate hashing")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    Certificate empty;
    empty.config = {{"d", 2}};
    const json doc = empty.to_json();
    CHECK(doc["sections"].empty());
    CHECK(doc["config"]["d"] == 2);
    CHECK(doc["status"] == "pass");
    CHECK(verify_certificate_hash(doc));

    Certificate c;
    CheckEntry e;
    e.id = "x";
    e.pass = true;
    e.measured["value"] = 0.5;
    c.add("s", e);
    CHECK_THROWS_AS(c.add("s", e), std::logic_error);
    const json signed_doc = c.to_json();
    CHECK(verify_certificate_hash(signed_doc));
    json tampered = signed_doc;
    tampered["sections"]["s"][0]["measured"]["value"] = 0.25;
    CHECK_FALSE(verify_certificate_hash(tampered));
    json unsigned_doc = signed_doc;
    unsigned_doc.erase("content_hash");
    CHECK_FALSE(verify_certificate_hash(unsigned_doc));

    const CheckEntry back = CheckEntry::from_json(e.to_json());
    CHECK(back.id == e.id);
    CHECK(back.pass);
    CHECK(back.measured == e.measured);
}

TEST_CASE("pipeline on the line is deterministic")
{
    RunConfig cfg;
    cfg.d = 1;
    const PipelineOutput a = run_pipeline(cfg);
    const PipelineOutput b = run_pipeline(cfg);
    CHECK(a.cert.content_hash() == b.cert.content_hash());
    CHECK(a.atlas.dump() == b.atlas.dump());
    CHECK(a.exit_code() == 0);
    for (const auto& [name, list] : a.cert.sections)
        for (const auto& e : list) CHECK_MESSAGE(e.pass, name << "/" << e.id);
    CHECK(a.repro.is_null());
    CHECK(verify_certificate_hash(a.cert.to_json()));

    RunConfig other = cfg;
    other.seed = 5;
    CHECK(run_pipeline(other).cert.content_hash() != a.cert.content_hash());
}
