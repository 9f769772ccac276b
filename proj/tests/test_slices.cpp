#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "renorm/slices.hpp"

using namespace renorm;

namespace {

double euclidean_slice_diameter(double delta) { return 2.0 * std::sqrt(2.0 * delta - delta * delta); }

BaseNorm p4()
{
    BaseNorm b;
    b.kind = BaseKind::PNorm;
    b.p = 4.0;
    b.eps0 = 0.05;
    return b;
}

}  // namespace

TEST_CASE("slice membership")
{
    const Space s = make_space(2, BaseNorm{});
    const Point x = s.unit(0);
    const Slice S = make_slice(s, x, 0.1);
    CHECK(slice_membership(S, x, s));
    CHECK_FALSE(slice_membership(S, -x, s));
    CHECK_FALSE(slice_membership(S, Point::Zero(2), s));
    CHECK_FALSE(slice_membership(S, 1.01 * x, s));
    const Slice T = make_slice(s, x, 0.1, -1);
    CHECK(slice_membership(T, -x, s));
    CHECK_FALSE(slice_membership(T, x, s));
}

TEST_CASE("certified diameter bound")
{
    CHECK(diam_upper_bound(1.0, 1.0, 0.02) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(euclidean_slice_diameter(0.02) <= 0.4);
    CHECK(euclidean_slice_diameter(0.02) == doctest::Approx(0.39799).epsilon(1e-5));
    CHECK_THROWS_AS(diam_upper_bound(1.0, 0.0, 0.02), std::invalid_argument);

    double prev = diam_upper_bound(1.0, 0.05, 0.5);
    for (double delta = 0.25; delta > 1e-12; delta *= 0.5) {
        const double b = diam_upper_bound(1.0, 0.05, delta);
        CHECK(b < prev);
        prev = b;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("Monte Carlo diameter of a Euclidean slice")
{
    for (int d : {2, 3}) {
        const Space s = make_space(d, BaseNorm{});
        const Slice S = make_slice(s, s.unit(0), 0.02);
        const DiameterBound a = diam_monte_carlo(S, s, 10000, 5);
        const double exact = euclidean_slice_diameter(0.02);
        CHECK(a.lower <= exact * (1 + 1e-12));
        CHECK(a.lower >= 0.98 * exact);
        CHECK_FALSE(a.empty_warning);
        const DiameterBound b = diam_monte_carlo(S, s, 10000, 5);
        CHECK(a.lower == b.lower);
        CHECK(a.upper == b.upper);
    }
}

TEST_CASE("Monte Carlo diameter vanishes with the margin")
{
    const Space s = make_space(2, BaseNorm{});
    const DiameterBound a = diam_monte_carlo(make_slice(s, s.unit(1), 1e-8), s, 2000, 1);
    CHECK(a.lower <= euclidean_slice_diameter(1e-8) * (1 + 1e-9));
    CHECK(a.lower < 1e-3);
}

TEST_CASE("certified bound dominates the sampled diameter for a p = 4 base")
{
    const Space s = make_space(3, p4());
    CHECK(diam_upper_bound(s.L, 0.05, 1e-3) == doctest::Approx(s.L * std::sqrt(0.16)).epsilon(1e-14));
    CounterRng rng(21, 0, "slice_points");
    for (int t = 0; t < 5; ++t) {
        const Point x = sphere_point(rng, s);
        const Slice S = make_slice(s, x, 1e-3);
        const DiameterBound b = diam_monte_carlo(S, s, 2000, t);
        CHECK(b.lower > 0.0);
        CHECK(b.lower <= diam_upper_bound(S, s));
    }
}

TEST_CASE("property: slices are symmetric under negation")
{
    CounterRng rng(22, 0, "slice_symmetry");
    const Space s = make_space(3, p4());
    for (int t = 0; t < 50; ++t) {
        const Point x = sphere_point(rng, s);
        const double delta = rng.uniform(1e-3, 0.3);
        const Slice S = make_slice(s, x, delta, 1), T = make_slice(s, x, delta, -1);
        for (int k = 0; k < 20; ++k) {
            const Point y = sphere_point(rng, s) * rng.uniform();
            CHECK(slice_membership(S, y, s) == slice_membership(T, -y, s));
        }
    }
}

TEST_CASE("margin for a target diameter")
{
    CHECK(margin_for_diameter(1e6, 1.0, 0.05) == kDeltaMax);
    const double delta = margin_for_diameter(0.4, 1.0, 1.0);
    CHECK(delta > 0.0);
    CHECK(diam_upper_bound(1.0, 1.0, delta) <= 0.36);
    CHECK(diam_upper_bound(1.0, 1.0, 2.0 * delta) > 0.36);
    for (double target : {0.3, 0.1, 0.01, 1e-4}) {
        const double a = margin_for_diameter(target, 1.3, 0.05);
        const double b = margin_for_diameter(0.5 * target, 1.3, 0.05);
        CHECK(b <= 0.25 * a);
        CHECK(b > 0.0);
    }
}

TEST_CASE("enlargement margin")
{
    const Space s = make_space(2, BaseNorm{});
    CHECK(enlarge_margin({}, 0.1, s) == kEnlargeCap);

    const double eps_F = 0.05;
    // Margin whose certified diameter is half of eps_F.
    const double half = 0.5 * eps_F / s.L;
    const double delta = half * half * s.base.eps0 / 8.0;
    const Slice S = make_slice(s, s.unit(0), delta);
    CHECK(diam_upper_bound(S, s) == doctest::Approx(0.5 * eps_F).epsilon(1e-12));
    const double dF = enlarge_margin({S}, eps_F, s);
    CHECK(dF > 0.0);
    CHECK(diam_upper_bound(s.L, s.base.eps0, delta + dF) < eps_F);

    double prev = dF;
    for (double frac : {0.7, 0.9, 0.99}) {
        const double dl = frac * eps_F / s.L;
        const Slice T = make_slice(s, s.unit(0), dl * dl * s.base.eps0 / 8.0);
        const double e = enlarge_margin({T}, eps_F, s);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("Euclidean equivalence constants")
{
    for (int d = 1; d <= 4; ++d) {
        const Space s = make_space(d, BaseNorm{});
        CHECK(s.L / s.ell <= std::sqrt(2.0));
        CHECK(s.L / s.ell == doctest::Approx(1.0).epsilon(1e-12));
    }
}
