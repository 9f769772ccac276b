#pragma once

#include <cmath>
#include <limits>

namespace renorm {

// m(t) = integral of exp(-1/u) over (0, max(t, 0)), handled in log form so that
// arguments down to 1e-300 stay representable. Returns -inf for t <= 0.
double log_m(double t);
double m_eval(double t);
// log m'(t) = -1/t.
inline double log_m_prime(double t) { return t > 0.0 ? -1.0 / t : -std::numeric_limits<double>::infinity(); }

// Even convex bump: rho(s) = m(|s| - a) / m(1 - a).
struct BumpSpec {
    double a = 0.5;
    double log_norm = 0.0;  // log m(1 - a)

    static BumpSpec with_flat_radius(double a);
    double eval(double s) const;
    double grad(double s) const;
};

// sigma(v) = m(v) / (m(v) + m(1 - v)); sigma(v) + sigma(1 - v) = 1.
double sigma_eval(double v);
// Integral of sigma over (0, w); equals w - 1/2 for w >= 1.
double sigma_integral(double w);

// xi_n(t) = integral of sigma(n(u - 1/n)/2) over (0, t): zero on [0, 1/n], t - 2/n past 3/n.
double xi_eval(int n, double t);
double xi_grad(int n, double t);

// psi_eta(t) = m(t - 1 + eta) / m(eta).
double psi_eta_eval(double eta, double t);
double psi_eta_grad(double eta, double t);

}  // namespace renorm
