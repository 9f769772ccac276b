#pragma once

#include <string>
#include <vector>

#include "renorm/certificate.hpp"
#include "renorm/subspace.hpp"
#include "renorm/types.hpp"

namespace renorm {

enum class BaseKind { Euclidean, PNorm, Weighted };

std::string to_string(BaseKind k);
BaseKind base_kind_from_string(const std::string& s);

// N(u)^2 = N0(u)^2 + eps0 |u|_2^2, evaluated in the external frame.
struct BaseNorm {
    BaseKind kind = BaseKind::Euclidean;
    double p = 2.0;
    std::vector<double> weights;
    double eps0 = 0.05;

    void validate(int d) const;

    double n0(const Vec& u) const;
    double eval(const Vec& u) const;
    // Gradient of N at u != 0.
    Vec grad(const Vec& u) const;
    // Gradient of N^2 / 2.
    Vec half_sq_grad(const Vec& u) const;

    // sup N(u)/|u|_2 and inf N(u)/|u|_2 over u != 0.
    double upper_constant(int d) const;
    double lower_constant(int d) const;
};

// Coordinate model after rescaling: points and functionals are expressed in the
// normalized system, so phi'_a is the a-th coordinate functional.
struct Space {
    int d = 0;
    BaseNorm base;
    Mat E;       // columns e'_a in the external frame
    Mat Phi;     // rows phi'_a in the external frame
    Mat E_inv_t; // maps system functionals to external ones
    bool identity_frame = true;
    double M = 1.0;
    double L = 1.0;
    double ell = 1.0;
    // Equivalence constants against |.|_2 in system coordinates.
    double L_sys = 1.0;
    double ell_sys = 1.0;
    // N(x)^2 = x^T Q x when the base norm is quadratic.
    bool quadratic = true;
    Mat Q;
    Mat Q_inv;

    Vec to_external(const Point& x) const { return identity_frame ? Vec(x) : Vec(E * x); }

    double norm(const Point& x) const;
    Functional grad(const Point& x) const;
    // Gradient of N^2/2 in system coordinates.
    Vec half_sq_grad(const Point& x) const;
    double dual_norm(const Functional& phi) const;
    // Dual norm of phi restricted to span H.
    double restricted_dual(const Functional& phi, SubspaceId H) const;
    // Norm-preserving extension of phi restricted to span H: value is its dual norm
    // and ext agrees with phi on span H up to rounding.
    struct Extension {
        double value = 0.0;
        Functional ext;
    };
    Extension restricted_extension(const Functional& phi, SubspaceId H) const;

    Point unit(int a) const;
};

double dual_norm_external(const BaseNorm& base, const Vec& c);

Space normalize_system(const Mat& E, const Mat& Phi, const BaseNorm& base);
Space make_space(int d, const BaseNorm& base);

double norm_eval(const Space& s, const Point& x);
Functional norming_functional(const Space& s, const Point& x);
double dual_norm_eval(const Space& s, const Functional& phi);

struct DistResult {
    double dist = 0.0;
    Point w;
};

DistResult dist_to_subspace(const Space& s, const Point& x, SubspaceId F);

// Distance inequalities between coordinate subspaces for x in span F.
CheckEntry check_biorthogonal_bounds(const Space& s, const Point& x, SubspaceId F, SubspaceId G);

Point restrict_to(const Point& x, SubspaceId F);

}  // namespace renorm
