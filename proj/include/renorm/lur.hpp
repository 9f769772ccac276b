#pragma once

#include <cstdint>
#include <vector>

#include "renorm/certificate.hpp"
#include "renorm/norm_handle.hpp"
#include "renorm/space.hpp"

namespace renorm {

// (A, B) with B a nonempty subset of A and |A| <= n.
struct LambdaIndex {
    SubspaceId A;
    SubspaceId B;
};

std::vector<LambdaIndex> enumerate_lambda_n(int d, int n, int d_max = 4);

// Per-level parameters for indices 1..K; indices past K use the default formulas.
struct LurParams {
    int K = 8;
    double eps = 0.1;
    std::vector<double> rho;                 // rho[n-1]
    std::vector<std::vector<double>> theta;  // theta[n-1][m-1]
    std::vector<std::vector<double>> kappa;  // kappa[n-1][m-1]

    // rho_n = 1/4, kappa_nm = rho_n / (m + 1), theta_nm = 1 / (m + 1).
    static LurParams defaults(int K = 8, double eps = 0.1);
    void validate() const;

    double rho_n(int n) const;
    double theta_nm(int n, int m) const;
    double kappa_nm(int n, int m) const;
    double eta_nm(int n, int m) const { return rho_n(n) - kappa_nm(n, m); }

    json to_json() const;
};

// g(t, s) = exp(-10 / t) (s^2 / 100 + s / 10 + 1) for t > 0, else 0.
double g_eval(double t, double s);
double g_nml_eval(int n, int m, int l, double t, double s, const LurParams& p, double M);

// Always 0 on a finite index set.
double ceil_seminorm(const std::vector<double>& z);
// A_eta = {z : ceil(z) < (1 - eta) |z|_inf}.
bool in_a_eta(double eta, const std::vector<double>& z);

// Minkowski functional of {sum psi_eta(|z_i|) <= 1}.
double z_eta_eval(double eta, const std::vector<double>& z);

struct LurNorm {
    const Space* space = nullptr;
    NormHandle ambient;
    LurParams params;
    std::vector<std::vector<LambdaIndex>> lambda;  // lambda[n-1]
    double ambient_unit_max = 1.0;                 // max ambient norm of the unit vectors e_a
    double z_envelope = 0.0;                       // uniform bound on Z_eta(H_nm y) over the open ball

    LurNorm() = default;
    LurNorm(const Space& s, NormHandle ambient, LurParams params);
};

// Per-point data reused along a ray: ambient norms scale linearly, so residual norms are computed once.
struct LurRay {
    Point x;
    double ambient = 0.0;
    std::vector<double> residual;  // ambient norm of x minus its B part, indexed by mask of B
};
LurRay lur_ray(const LurNorm& L, const Point& x);

std::vector<double> h_nm_eval(const LurNorm& L, int n, int m, const Point& y);
double j_component_eval(const LurNorm& L, int j, int n, int m, const Point& y);

struct JValue {
    double value = 0.0;
    double tail_uniform = 0.0;   // eps * 2^2 * (sum of weights past K), squared-J units
    double tail_envelope = 0.0;  // same sum with the per-term envelope min(2, max(0, z_envelope - 1/j))
};

// Truncated sum over 1 <= j, n, m <= K. Throws for y outside the open ambient ball.
JValue j_eval(const LurNorm& L, const Point& y);
JValue j_eval(const LurNorm& L, const LurRay& ray, double scale);

// Minkowski functional of {J <= 1 - eps}.
double lur_norm_eval(const LurNorm& L, const Point& x);
NormHandle lur_norm_handle(const LurNorm& L);

struct ProbeRow {
    double delta = 0.0;
    double R = 0.0;
    std::size_t admissible = 0;
    std::size_t proposed = 0;
};
// R(delta) = max N(x - y) over sampled y with |||y||| <= 1 and |||x + y||| > 2 - delta.
std::vector<ProbeRow> lur_probe(const NormHandle& norm, const Space& s, const Point& x,
                                const std::vector<double>& deltas, int k, std::uint64_t seed);

struct LurChecks {
    int sandwich_samples = 10000;
    int lipschitz_pairs = 1000;
    int z_samples = 1000;
    int norm_samples = 10000;
    int probe_points = 10;
    int probe_samples = 200;
    int modulus_points = 20;
    double lipschitz_slack = 1e-6;
    double tail_tol = 1e-6;
    double homogeneity_tol = 1e-11;
};

std::vector<CheckEntry> check_lur(const LurNorm& L, const LurChecks& cfg, std::uint64_t seed);

}  // namespace renorm
