#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "renorm/atlas.hpp"
#include "renorm/certificate.hpp"
#include "renorm/mesh.hpp"
#include "renorm/slice_index.hpp"

namespace renorm {

struct ConstructionConfig {
    double eps_global = 0.2;
    double mesh_h = 0.05;
    double cover_margin = 0.25;
    // Depth target on lower subspaces, whose cover must reach under the shielded band of higher ones.
    double ribbon_margin = 0.5;
    // delta_F is capped at this fraction of the slice margin.
    double enlarge_fraction = 0.1;
    std::uint64_t seed = 0;
    // "strict": eps_F also capped by theta_G / (4 n M) for G strictly inside F.
    // "uncoupled": that cap is dropped.
    std::string budget_policy = "strict";
    int d_max = 4;
    double delta_floor = 1e-10;
    std::size_t max_mesh_cells = 8000000;
    int max_refinements = 3;
    bool allow_random_mesh = false;
};

// Budget too small to realize in double precision or within the mesh cap.
struct InfeasibleBudget : std::runtime_error {
    InfeasibleBudget(const std::string& what, json diag) : std::runtime_error(what), diagnostics(std::move(diag)) {}
    json diagnostics;
};

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double choose_epsilon(SubspaceId F, const SliceAtlas& partial, double M, const std::string& policy);

// Omega_F over the mesh, given all records of lower dimension. Fills the record's budget and stats.
SubspaceRecord build_record(const SliceAtlas& partial, const AtlasIndex& index, SubspaceId F, const ConstructionConfig& cfg);

SliceAtlas run_construction(const Space& s, const ConstructionConfig& cfg);

// Conditions (i)-(vii) of the slice induction, one entry per condition.
std::vector<CheckEntry> check_construction(const SliceAtlas& atlas, const AtlasIndex& index, int k, std::uint64_t seed);

// P_n and P_F agree on T(F, theta_F / 2).
CheckEntry check_compatibility(const SliceAtlas& atlas, const AtlasIndex& index, SubspaceId F, int n, int k,
                               std::uint64_t seed);

}  // namespace renorm
