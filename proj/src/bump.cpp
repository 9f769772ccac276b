#include "renorm/bump.hpp"

#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/expint.hpp>

namespace renorm {

namespace {

// exp(x) E_2(x) for x >= 1 by the Lentz continued fraction.
double scaled_e2(double x)
{
    constexpr double tiny = 1e-300;
    double b = x + 2.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -double(i) * double(1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) return h;
    }
    throw std::runtime_error("continued fraction for E_2 did not converge");
}

constexpr int kSigmaNodes = 4096;

struct SigmaTable {
    double step = 0.5 / kSigmaNodes;
    std::vector<double> value, slope;
    SigmaTable() : value(kSigmaNodes + 1, 0.0), slope(kSigmaNodes + 1, 0.0)
    {
        for (int i = 0; i <= kSigmaNodes; ++i) slope[i] = sigma_eval(i * step);
        for (int i = 0; i < kSigmaNodes; ++i) {
            const double lo = i * step;
            value[i + 1] = value[i] + boost::math::quadrature::gauss<double, 20>::integrate(sigma_eval, lo, lo + step);
        }
    }
    double at(double w) const
    {
        const double u = w / step;
        int i = static_cast<int>(u);
        if (i >= kSigmaNodes) i = kSigmaNodes - 1;
        const double t = u - i;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        return h00 * value[i] + h10 * step * slope[i] + h01 * value[i + 1] + h11 * step * slope[i + 1];
    }
};

const SigmaTable& sigma_table()
{
    static const SigmaTable table;
    return table;
}

}  // namespace

double log_m(double t)
{
    if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
    const double x = 1.0 / t;
    // m(t) = t E_2(1/t).
    if (x >= 1.0) return std::log(t) + std::log(scaled_e2(x)) - x;
    return std::log(t) + std::log(boost::math::expint(2, x));
}

double m_eval(double t) { return t > 0.0 ? std::exp(log_m(t)) : 0.0; }

BumpSpec BumpSpec::with_flat_radius(double a)
{
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("bump flat radius must lie in (0,1)");
    return {a, log_m(1.0 - a)};
}

double BumpSpec::eval(double s) const
{
    const double t = std::abs(s) - a;
    return t > 0.0 ? std::exp(log_m(t) - log_norm) : 0.0;
}

double BumpSpec::grad(double s) const
{
    const double t = std::abs(s) - a;
    if (!(t > 0.0)) return 0.0;
    const double g = std::exp(-1.0 / t - log_norm);
    return s > 0 ? g : -g;
}

double sigma_eval(double v)
{
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    return 1.0 / (1.0 + std::exp(log_m(1.0 - v) - log_m(v)));
}

double sigma_integral(double w)
{
    if (w <= 0.0) return 0.0;
    if (w >= 1.0) return w - 0.5;
    if (w <= 0.5) return sigma_table().at(w);
    return w - 0.5 + sigma_table().at(1.0 - w);
}

double xi_eval(int n, double t)
{
    if (n < 1) throw std::invalid_argument("xi_n needs n >= 1");
    if (t < 0.0) throw std::invalid_argument("xi_n needs t >= 0");
    return (2.0 / n) * sigma_integral(0.5 * n * (t - 1.0 / n));
}

double xi_grad(int n, double t)
{
    if (n < 1) throw std::invalid_argument("xi_n needs n >= 1");
    return sigma_eval(0.5 * n * (t - 1.0 / n));
}

double psi_eta_eval(double eta, double t)
{
    const double u = t - 1.0 + eta;
    return u > 0.0 ? std::exp(log_m(u) - log_m(eta)) : 0.0;
}

double psi_eta_grad(double eta, double t)
{
    const double u = t - 1.0 + eta;
    return u > 0.0 ? std::exp(-1.0 / u - log_m(eta)) : 0.0;
}

}  // namespace renorm
