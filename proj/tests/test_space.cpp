#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "renorm/space.hpp"

using namespace renorm;

namespace {

Vec v2(double a, double b)
{
    Vec v(2);
    v << a, b;
    return v;
}

Vec v3(double a, double b, double c)
{
    Vec v(3);
    v << a, b, c;
    return v;
}

BaseNorm euclid(double eps0)
{
    BaseNorm b;
    b.eps0 = eps0;
    return b;
}

BaseNorm pnorm(double p, double eps0)
{
    BaseNorm b;
    b.kind = BaseKind::PNorm;
    b.p = p;
    b.eps0 = eps0;
    return b;
}

}  // namespace

TEST_CASE("pairing of coordinate functionals")
{
    CHECK(pairing(v2(1, 0), v2(1, 0)) == 1.0);
    CHECK(pairing(v2(1, 0), v2(0, 1)) == 0.0);
    CHECK(pairing(v2(1, 1), v2(2, -3)) == -1.0);
    CHECK_THROWS_AS(pairing(v2(1, 1), v3(1, 1, 1)), std::invalid_argument);
}

TEST_CASE("normalize_system rescales to unit vectors")
{
    const Mat I = Mat::Identity(2, 2);
    const Space s = normalize_system(2.0 * I, 0.5 * I, euclid(0.0));
    CHECK(s.M == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((s.E - I).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((s.Phi * s.E - I).cwiseAbs().maxCoeff() <= 1e-15);

    const Space t = normalize_system(I, I, euclid(0.0));
    CHECK(t.M == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.identity_frame);
}

TEST_CASE("normalize_system on a sheared basis")
{
    Mat E(2, 2);
    E << 1, 1, 0, 1;
    const Mat Phi = E.inverse();
    const Space s = normalize_system(E, Phi, BaseNorm{});
    CHECK((s.Phi * s.E - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    // Both rescaled coordinate functionals have dual norm sqrt 2.
    CHECK(s.M == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    for (int a = 0; a < 2; ++a) CHECK(s.norm(s.unit(a)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(s.identity_frame);
}

TEST_CASE("normalize_system rejects bad systems")
{
    Mat E(2, 2);
    E << 1, 2, 2, 4;
    CHECK_THROWS_AS(normalize_system(E, Mat::Identity(2, 2), BaseNorm{}), std::invalid_argument);
    Mat F(2, 2);
    F << 1, 0.1, 0, 1;
    CHECK_THROWS_AS(normalize_system(F, Mat::Identity(2, 2), BaseNorm{}), std::invalid_argument);
    CHECK_THROWS_AS(normalize_system(Mat::Identity(2, 2), Mat::Identity(2, 2), pnorm(1.0, 0.05)), std::invalid_argument);
}

TEST_CASE("base norm evaluation")
{
    CHECK(euclid(0.01).eval(v2(0, 0)) == 0.0);
    CHECK(euclid(0.01).eval(v2(1, 0)) == doctest::Approx(std::sqrt(1.01)).epsilon(1e-15));
    CHECK(pnorm(4, 0).eval(v2(1, 1)) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
}

TEST_CASE("norming functionals")
{
    const Vec a = euclid(0).grad(v2(1, 0));
    CHECK(a[0] == doctest::Approx(1.0));
    CHECK(std::abs(a[1]) <= 1e-15);
    const Vec b = euclid(0).grad(v2(3, 4));
    CHECK(b[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(0.8).epsilon(1e-14));

    const BaseNorm p4 = pnorm(4, 0.01);
    const Vec x = v2(1, 2);
    const Vec g = p4.grad(x);
    CHECK(g.dot(x) == doctest::Approx(p4.eval(x)).epsilon(1e-9));
    CHECK(dual_norm_external(p4, g) == doctest::Approx(1.0).epsilon(1e-9));
    // Central differences of the norm agree with the analytic gradient.
    for (int i = 0; i < 2; ++i) {
        Vec h = Vec::Zero(2);
        h[i] = 1e-6;
        const double fd = (p4.eval(x + h) - p4.eval(x - h)) / 2e-6;
        CHECK(std::abs(fd - g[i]) <= 1e-8);
    }
    const Space s = make_space(2, BaseNorm{});
    CHECK_THROWS_AS(norming_functional(s, v2(0, 0)), std::invalid_argument);
}

TEST_CASE("dual norms")
{
    CHECK(dual_norm_external(euclid(0), v2(3, 4)) == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(dual_norm_external(euclid(0), v2(1, 0)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(dual_norm_external(pnorm(4, 0), v2(1, 1)) == doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-8));
    CHECK(dual_norm_external(euclid(0), v2(0, 0)) == 0.0);
}

TEST_CASE("distance to coordinate subspaces")
{
    const Space s = make_space(3, euclid(0));
    const DistResult a = dist_to_subspace(s, v3(1, 0, 0), SubspaceId::from_members({1}));
    CHECK(a.dist == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(a.w.norm() <= 1e-10);

    const Vec x = v3(0.3, -0.2, 0);
    const DistResult b = dist_to_subspace(s, x, SubspaceId::from_members({0, 1}));
    CHECK(b.dist <= 1e-12);
    CHECK((b.w - x).norm() <= 1e-12);

    const DistResult c = dist_to_subspace(s, v3(1, 1, 1), SubspaceId::from_members({0, 1}));
    CHECK(c.dist == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((c.w - v3(1, 1, 0)).norm() <= 1e-10);
}

TEST_CASE("distance bounds between coordinate subspaces")
{
    const Space s = make_space(2, euclid(0));
    const SubspaceId F = SubspaceId::from_members({0}), G = SubspaceId::from_members({1});
    const CheckEntry e = check_biorthogonal_bounds(s, s.unit(0), F, G);
    CHECK(e.pass);
    CHECK(e.measured["dist_x_G"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));

    const SubspaceId full = SubspaceId(3u);
    const CheckEntry z = check_biorthogonal_bounds(s, s.unit(1), full, G);
    CHECK(z.pass);
    CHECK(z.measured["dist_x_G"].get<double>() <= 1e-12);
    CHECK(z.measured["dist_x_FG"].get<double>() <= 1e-12);
}

TEST_CASE("property: skewed systems stay biorthogonal and satisfy the distance bounds")
{
    CounterRng rng(11, 0, "skewed_systems");
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 2 + trial % 3;
        const Mat E = fixtures::skewed_system(rng, d);
        BaseNorm base;
        if (trial % 2) base = pnorm(3.0, 0.05);
        const Space s = normalize_system(E, E.inverse(), base);
        CHECK((s.Phi * s.E - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10);
        for (int a = 0; a < d; ++a) CHECK(s.norm(s.unit(a)) == doctest::Approx(1.0).epsilon(1e-12));
        const auto lattice = enumerate_lattice(d);
        for (int t = 0; t < 25; ++t) {
            const SubspaceId F = lattice[rng() % lattice.size()];
            const SubspaceId G = lattice[rng() % lattice.size()];
            const Point x = sphere_point(rng, s, F);
            CHECK(check_biorthogonal_bounds(s, x, F, G).pass);
        }
    }
}

TEST_CASE("property: norm axioms")
{
    CounterRng rng(12, 0, "norm_axioms");
    for (const BaseNorm& base : {euclid(0.05), pnorm(1.5, 0.05), pnorm(4.0, 0.01)}) {
        for (int t = 0; t < 300; ++t) {
            Vec x(3), y(3);
            for (int i = 0; i < 3; ++i) {
                x[i] = rng.normal();
                y[i] = rng.normal();
            }
            const double c = rng.uniform(-3, 3);
            CHECK(base.eval(c * x) == doctest::Approx(std::abs(c) * base.eval(x)).epsilon(1e-13));
            CHECK(base.eval(x + y) <= base.eval(x) + base.eval(y) + 1e-13);
            CHECK(base.eval(x) >= base.lower_constant(3) * x.norm() * (1 - 1e-12));
            CHECK(base.eval(x) <= base.upper_constant(3) * x.norm() * (1 + 1e-12));
        }
    }
}

TEST_CASE("property: norming functional contract")
{
    CounterRng rng(13, 0, "norming_contract");
    for (const BaseNorm& base : {euclid(0.05), pnorm(3.0, 0.05)}) {
        const Space s = make_space(3, base);
        for (int t = 0; t < 40; ++t) {
            const Point x = gaussian_in(rng, 3, full_subspace(3));
            const Functional psi = norming_functional(s, x);
            CHECK(psi.dot(x) == doctest::Approx(s.norm(x)).epsilon(1e-12));
            CHECK(s.dual_norm(psi) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("restricted extension keeps the dual norm on the subspace")
{
    CounterRng rng(14, 0, "restricted_extension");
    const Mat E = fixtures::skewed_system(rng, 3);
    const Space s = normalize_system(E, E.inverse(), BaseNorm{});
    const SubspaceId H = SubspaceId::from_members({0, 2});
    for (int t = 0; t < 20; ++t) {
        const Functional phi = gaussian_in(rng, 3, full_subspace(3));
        const auto ext = s.restricted_extension(phi, H);
        CHECK(s.dual_norm(ext.ext) == doctest::Approx(ext.value).epsilon(1e-10));
        for (int a : H.members()) CHECK(ext.ext[a] == doctest::Approx(phi[a]).epsilon(1e-10));
    }
}
