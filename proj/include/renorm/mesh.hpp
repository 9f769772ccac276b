#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "renorm/space.hpp"

namespace renorm {

// Triangulated unit sphere S_F with cones over cells covering span F.
struct SphereMesh {
    SubspaceId F;
    int dim = 0;
    int arity = 0;  // vertices per cell: 1, 2 or 3
    bool certified = true;
    std::vector<Point> pts;
    std::vector<int> cells;  // arity entries per cell
    std::vector<int> anti_vertex;
    std::vector<int> anti_cell;
    std::vector<int> vc_off, vc_idx;  // vertex -> incident cells
    std::vector<int> vn_off, vn_idx;  // vertex -> neighbouring vertices
    double spacing = 0.0;             // max N-length of a cell edge
    int resolution = 0;               // angular count (dim 2) or subdivision frequency (dim 3)

    std::size_t num_cells() const { return arity ? cells.size() / arity : 0; }
    const int* cell(std::size_t c) const { return cells.data() + c * arity; }
};

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mesh of S_F with N-spacing at most h. Dimensions above 3 need the random fallback,
// which carries no covering certificate.
SphereMesh mesh_sphere(const Space& s, SubspaceId F, double h, bool allow_random = false, std::size_t max_cells = 8000000,
                       std::uint64_t seed = 0);

// Estimated cell count of mesh_sphere for the given spacing.
double estimate_mesh_cells(const Space& s, SubspaceId F, double h);

}  // namespace renorm
