#pragma once

#include "renorm/rng.hpp"
#include "renorm/space.hpp"

namespace renorm {

// Gaussian direction supported on the coordinates of F.
inline Point gaussian_in(CounterRng& rng, int d, SubspaceId F)
{
    Point u = Point::Zero(d);
    do {
        for (int a = 0; a < d; ++a)
            if (F.contains(a)) u[a] = rng.normal();
    } while (u.squaredNorm() == 0.0);
    return u;
}

inline SubspaceId full_subspace(int d) { return SubspaceId((1u << d) - 1u); }

// Point of the N-sphere of span F, by radial rescaling of a Gaussian direction.
inline Point sphere_point(CounterRng& rng, const Space& s, SubspaceId F)
{
    const Point u = gaussian_in(rng, s.d, F);
    return u / s.norm(u);
}

inline Point sphere_point(CounterRng& rng, const Space& s) { return sphere_point(rng, s, full_subspace(s.d)); }

// Support set of x as a coordinate subspace.
inline SubspaceId support_of(const Point& x)
{
    std::uint32_t m = 0;
    for (int a = 0; a < x.size(); ++a)
        if (x[a] != 0.0) m |= 1u << a;
    return SubspaceId(m);
}

}  // namespace renorm
