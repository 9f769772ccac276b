#pragma once

#include <cstdint>
#include <vector>

#include "renorm/atlas.hpp"
#include "renorm/bump.hpp"
#include "renorm/certificate.hpp"
#include "renorm/norm_handle.hpp"
#include "renorm/slice_index.hpp"

namespace renorm {

// Phi(y) = sum over records F and slices j of rho_F(sign_j <psi_j, y> / (1 - delta_j)).
// B = {Phi <= 1 - eps}, D = {Phi < 1}.
struct SmoothBody {
    const SliceAtlas* atlas = nullptr;
    const AtlasIndex* index = nullptr;
    std::vector<BumpSpec> bumps;  // per record, flat radius 1 - delta_F
    double eps = 0.2;

    SmoothBody() = default;
    SmoothBody(const SliceAtlas& atlas, const AtlasIndex& index);

    // Theta_F entry of slice j in record r.
    Functional theta(int r, int j) const;
};

double phi_eval(const SmoothBody& body, const Point& y);
// Partial sum over records G subset of F.
double phi_f_eval(const SmoothBody& body, SubspaceId F, const Point& y);
Functional phi_grad(const SmoothBody& body, const Point& y);

// U = T(F, theta_F / 2) intersected with {N < 1, |<theta, z>| < 1 for theta in Theta_G, G subset of F}.
struct LocalityNeighborhood {
    SubspaceId F;
    Point center;
    double tube_radius = 0.0;
};
LocalityNeighborhood locality_neighborhood(const SmoothBody& body, const Point& y);
bool in_neighborhood(const SmoothBody& body, const LocalityNeighborhood& U, const Point& z);

double smooth_mu_eval(const SmoothBody& body, const Point& x);
Functional smooth_mu_grad(const SmoothBody& body, const Point& x);
NormHandle smooth_norm_handle(const SmoothBody& body);

struct SmoothChecks {
    int sandwich_samples = 10000;
    int gradient_samples = 1000;
    int locality_centers = 1000;
    int locality_neighbors = 5;
    int lfc_points = 100;
    int lfc_perturbations = 10;
    double gradient_tol = 1e-5;
    double locality_tol = 1e-12;
    double lfc_tol = 1e-10;
};

// Sandwich chain, gradient agreement, locality and LFC invariance, one entry each.
std::vector<CheckEntry> check_smooth(const SmoothBody& body, const SmoothChecks& cfg, std::uint64_t seed);

}  // namespace renorm
