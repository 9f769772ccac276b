#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "renorm/atlas_io.hpp"
#include "renorm/construction.hpp"
#include "renorm/mesh.hpp"

using namespace renorm;

TEST_CASE("subspace lattice order")
{
    const auto l1 = enumerate_lattice(1);
    REQUIRE(l1.size() == 1);
    CHECK(l1[0].mask == 1u);

    const auto l2 = enumerate_lattice(2);
    REQUIRE(l2.size() == 3);
    CHECK(l2[0].label() == "{0}");
    CHECK(l2[1].label() == "{1}");
    CHECK(l2[2].label() == "{0,1}");

    const auto l3 = enumerate_lattice(3);
    REQUIRE(l3.size() == 7);
    int by_dim[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < l3.size(); ++i) {
        ++by_dim[l3[i].dim()];
        if (i > 0) CHECK(l3[i - 1].dim() <= l3[i].dim());
    }
    CHECK(by_dim[1] == 3);
    CHECK(by_dim[2] == 3);
    CHECK(by_dim[3] == 1);
    CHECK(enumerate_lattice(4).size() == 15);
    CHECK_THROWS_AS(enumerate_lattice(5), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_lattice(0), std::invalid_argument);
}

TEST_CASE("sphere meshes")
{
    const Space s = make_space(3, BaseNorm{});
    const SphereMesh m1 = mesh_sphere(s, SubspaceId::from_members({1}), 0.1);
    REQUIRE(m1.pts.size() == 2);
    CHECK(std::abs(m1.pts[0][1]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((m1.pts[0] + m1.pts[1]).norm() == 0.0);

    const SphereMesh m2 = mesh_sphere(s, SubspaceId::from_members({0, 2}), 0.1);
    CHECK(m2.pts.size() >= static_cast<std::size_t>(std::ceil(2 * M_PI / 0.1)));
    CHECK(m2.spacing <= 0.1);
    for (std::size_t c = 0; c < m2.num_cells(); ++c) {
        const int* v = m2.cell(c);
        CHECK(s.norm(m2.pts[v[0]] - m2.pts[v[1]]) <= 0.1);
    }

    for (const SphereMesh* m : {&m1, &m2}) {
        for (std::size_t i = 0; i < m->pts.size(); ++i) {
            CHECK(s.norm(m->pts[i]) == doctest::Approx(1.0).epsilon(1e-14));
            const int j = m->anti_vertex[i];
            CHECK((m->pts[i] + m->pts[j]).norm() <= 1e-15);
        }
    }

    const SphereMesh m3 = mesh_sphere(s, full_subspace(3), 0.2);
    CHECK(m3.arity == 3);
    CHECK(m3.spacing <= 0.2);
    CHECK(m3.certified);
}

TEST_CASE("epsilon budget")
{
    SliceAtlas partial;
    partial.d = 2;
    partial.space = make_space(2, BaseNorm{});
    partial.eps_global = 0.1;
    const SubspaceId F = SubspaceId::from_members({0});
    CHECK(choose_epsilon(F, partial, 1.0, "strict") == doctest::Approx(0.1));
    CHECK(choose_epsilon(F, partial, 1.0, "uncoupled") == doctest::Approx(0.1));
    partial.eps_global = 1.0;
    CHECK(choose_epsilon(F, partial, 1.0, "strict") == doctest::Approx(0.25));

    // A small theta on a lower subspace caps the strict budget only.
    SubspaceRecord r;
    r.F = F;
    r.budget.eps = 0.1;
    r.budget.theta = 0.01;
    partial.records.push_back(r);
    r.F = SubspaceId::from_members({1});
    r.budget.theta = 0.02;
    partial.records.push_back(r);
    const SubspaceId full = full_subspace(2);
    CHECK(choose_epsilon(full, partial, 1.0, "strict") == doctest::Approx(0.01 / 8.0));
    CHECK(choose_epsilon(full, partial, 1.0, "uncoupled") == doctest::Approx(1.0 / 8.0));
    partial.records[0].budget.theta = 0.005;
    CHECK(choose_epsilon(full, partial, 1.0, "strict") == doctest::Approx(0.005 / 8.0));
}

TEST_CASE("one dimensional atlas")
{
    const auto& b = fixtures::euclidean(1);
    const SliceAtlas& a = b.atlas;
    REQUIRE(a.records.size() == 1);
    const SubspaceRecord& R = a.records[0];
    REQUIRE(R.omega.size() == 2);
    CHECK(R.omega[0].sign == -R.omega[1].sign);
    CHECK(R.omega[0].x == R.omega[1].x);
    CHECK(std::abs(R.omega[0].x[0]) == doctest::Approx(1.0));
    CHECK(R.budget.theta > 0.0);
    CHECK(R.budget.theta <= R.budget.eps);
    CHECK(R.budget.eps <= a.eps_global);
    for (const CheckEntry& e : check_construction(a, *b.index, 100, 0)) CHECK_MESSAGE(e.pass, e.id);
    for (int n = 1; n <= 1; ++n) CHECK(check_compatibility(a, *b.index, R.F, n, 200, 0).pass);
}

TEST_CASE("strict policy at d = 1 matches the uncoupled atlas")
{
    ConstructionConfig cfg;
    const SliceAtlas strict = run_construction(make_space(1, BaseNorm{}), cfg);
    cfg.budget_policy = "uncoupled";
    const SliceAtlas unc = run_construction(make_space(1, BaseNorm{}), cfg);
    CHECK(strict.records[0].budget.eps == unc.records[0].budget.eps);
    CHECK(strict.records[0].omega.size() == unc.records[0].omega.size());
}

TEST_CASE("two dimensional uncoupled atlas")
{
    const auto& b = fixtures::euclidean(2);
    const SliceAtlas& a = b.atlas;
    REQUIRE(a.records.size() == 3);
    for (const auto& R : a.records) {
        CHECK(R.budget.theta > 0.0);
        CHECK(R.budget.theta <= R.budget.eps);
        CHECK(R.omega.size() % 2 == 0);
        for (const Slice& S : R.omega) {
            CHECK(diam_upper_bound(S, a.space) < R.budget.eps);
            CHECK(support_of(S.x).subset_of(R.F));
        }
    }
    for (const CheckEntry& e : check_construction(a, *b.index, 200, 0)) {
        // Dropping the coupling cap is what makes the uncoupled policy feasible.
        if (e.id == "budget_iii") continue;
        CHECK_MESSAGE(e.pass, e.id << " " << e.measured.dump());
    }
    for (const auto& R : a.records)
        for (int n = R.F.dim(); n <= 2; ++n) {
            const CheckEntry e = check_compatibility(a, *b.index, R.F, n, 1000, 3);
            CHECK_MESSAGE(e.pass, e.id);
            CHECK(e.measured["samples"].get<int>() == 1000);
        }
    CHECK_THROWS_AS(check_compatibility(a, *b.index, full_subspace(2), 1, 10, 0), std::invalid_argument);
}

TEST_CASE("property: mesh points of each sphere are covered by the atlas")
{
    const auto& b = fixtures::euclidean(2);
    const SliceAtlas& a = b.atlas;
    for (const auto& R : a.records) {
        const SphereMesh m = mesh_sphere(a.space, R.F, 0.01);
        for (const Point& p : m.pts) {
            bool covered = false;
            for (const auto& G : a.records)
                if (G.F.subset_of(R.F))
                    for (const Slice& S : G.omega)
                        if (slice_membership(S, p, a.space)) covered = true;
            CHECK(covered);
        }
    }
}

TEST_CASE("tube membership")
{
    const Space s = make_space(2, BaseNorm{});
    const Tube T{SubspaceId::from_members({0}), 0.1};
    Point y(2);
    y << 0.5, 0.0;
    CHECK(tube_membership(y, T, s));
    y << 0.0, 1.01;
    CHECK_FALSE(tube_membership(y, T, s));
    y << 0.0, 1.0 - 0.1 / 4;
    CHECK_FALSE(tube_membership(y, T, s));
    y << 0.6, 0.05;
    CHECK(tube_membership(y, T, s));
}

TEST_CASE("construction is deterministic")
{
    const auto& b = fixtures::euclidean(2);
    const SliceAtlas again = fixtures::build(2).atlas;
    CHECK(atlas_to_json(again).dump() == atlas_to_json(b.atlas).dump());
    CHECK(atlas_hash(again) == atlas_hash(b.atlas));
}

TEST_CASE("atlas serialization round trip")
{
    const auto& b = fixtures::euclidean(2);
    const json doc = atlas_to_json(b.atlas);
    const SliceAtlas back = atlas_from_json(doc);
    CHECK(atlas_hash(back) == atlas_hash(b.atlas));
    CHECK(back.total_slices() == b.atlas.total_slices());
    json tampered = doc;
    tampered["config"]["eps_global"] = 0.3;
    CHECK_THROWS(atlas_from_json(tampered));
}
