#pragma once

#include <cstdint>
#include <vector>

#include "renorm/certificate.hpp"
#include "renorm/norm_handle.hpp"
#include "renorm/space.hpp"

namespace renorm {

constexpr int kCertificateSchema = 1;

// Central differences with step h_rel * |x|_2 per coordinate against the analytic gradient.
double gradient_rel_error(const NormHandle& norm, const Point& x, double h_rel = 1e-6);
Functional numeric_gradient(const NormHandle& norm, const Point& x, double h_rel = 1e-6);
CheckEntry gradient_check(const NormHandle& norm, const Point& x, double h_rel = 1e-6, double tol = 1e-5);

// normA <= normB <= factor * normA on k samples drawn from the base sphere of s.
CheckEntry equivalence_audit(const NormHandle& a, const NormHandle& b, double factor, int k, std::uint64_t seed,
                             const Space& s, double tol = 1e-12);

struct ModulusRow {
    double tau = 0.0;
    double rho = 0.0;  // sampled sup of (|x + tau h| + |x - tau h| - 2) / 2
    double ratio = 0.0;
};

// Random unit pairs (x, h) of the norm, the same k pairs for every tau.
std::vector<ModulusRow> smoothness_modulus_estimate(const NormHandle& norm, const std::vector<double>& taus, int k,
                                                    std::uint64_t seed, int d);
// Single pair (x, h) rescaled to the unit sphere of the norm.
std::vector<ModulusRow> modulus_along(const NormHandle& norm, const Point& x, const Point& h,
                                      const std::vector<double>& taus);
json modulus_json(const std::vector<ModulusRow>& rows);

NormHandle base_norm_handle(const Space& s);

}  // namespace renorm
