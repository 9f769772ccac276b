#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renorm/slices.hpp"
#include "renorm/subspace.hpp"

namespace renorm {

struct SliceBudget {
    double eps = 0.0;
    double theta = 0.0;
    double delta_F = 0.0;
};

struct BuildStats {
    double slice_delta = 0.0;   // common margin of the slices in Omega_F
    double depth_cert = 0.0;    // min over cells of the best covering depth
    double mesh_spacing = 0.0;
    int mesh_resolution = 0;
    std::size_t mesh_points = 0;
    std::size_t mesh_cells = 0;
    int refinements = 0;
    std::size_t candidates = 0;
    std::size_t shielded_out = 0;
    std::size_t fallback_used = 0;
    bool covering_certified = true;
};

struct SubspaceRecord {
    SubspaceId F;
    SliceBudget budget;
    std::vector<Slice> omega;
    BuildStats stats;
};

struct SliceAtlas {
    int d = 0;
    Space space;
    double eps_global = 0.2;
    double mesh_h = 0.05;
    double cover_margin = 0.25;
    double ribbon_margin = 0.5;
    double enlarge_fraction = 0.1;
    std::uint64_t seed = 0;
    std::string budget_policy = "strict";
    std::vector<SubspaceRecord> records;  // lattice order

    int find(SubspaceId F) const;
    const SubspaceRecord& at(SubspaceId F) const;
    std::size_t total_slices() const;
};

struct Tube {
    SubspaceId F;
    double theta = 0.0;
};

bool tube_membership(const Point& y, const Tube& tube, const Space& s);

}  // namespace renorm
