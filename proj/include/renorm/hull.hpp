#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace renorm {

struct HullError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vertices of the polytope {v : <q_i, v> <= 1 for all i}. The origin must be interior
// to conv{q_i}; each vertex is the polar of a hull facet. Near-duplicates closer than
// merge_tol (relative) are merged.
std::vector<Eigen::Vector2d> polar_vertices_2d(const std::vector<Eigen::Vector2d>& q, double merge_tol = 1e-9);
std::vector<Eigen::Vector3d> polar_vertices_3d(const std::vector<Eigen::Vector3d>& q, double merge_tol = 1e-9);

// Facets of the 3D hull as vertex triples with outward orientation.
struct Hull3 {
    std::vector<std::array<int, 3>> faces;
    std::vector<Eigen::Vector3d> normals;
    std::vector<double> offsets;
};
Hull3 convex_hull_3d(const std::vector<Eigen::Vector3d>& pts);

}  // namespace renorm
