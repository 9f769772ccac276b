#pragma once

#include <memory>

#include "renorm/construction.hpp"
#include "renorm/polyhedral.hpp"
#include "renorm/rng.hpp"
#include "renorm/sampling.hpp"
#include "renorm/slice_index.hpp"
#include "renorm/smoothing.hpp"

namespace fixtures {

using namespace renorm;

struct Built {
    SliceAtlas atlas;
    std::unique_ptr<AtlasIndex> index;
    std::unique_ptr<SmoothBody> body;
};

inline Built build(int d, const BaseNorm& base = BaseNorm{}, double eps_global = 0.2)
{
    ConstructionConfig cfg;
    cfg.budget_policy = "uncoupled";
    cfg.eps_global = eps_global;
    Built b;
    b.atlas = run_construction(make_space(d, base), cfg);
    b.index = std::make_unique<AtlasIndex>(b.atlas);
    b.body = std::make_unique<SmoothBody>(b.atlas, *b.index);
    return b;
}

// Euclidean base atlases shared across test cases of one binary.
inline const Built& euclidean(int d)
{
    static Built b1 = build(1);
    if (d == 1) return b1;
    static Built b2 = build(2);
    return b2;
}

// Random system on the unit sphere of |.|_2 with a well-conditioned skew.
inline Mat skewed_system(CounterRng& rng, int d)
{
    Mat E = Mat::Identity(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) E(i, j) = rng.uniform(-0.4, 0.4);
    return E;
}

}  // namespace fixtures
