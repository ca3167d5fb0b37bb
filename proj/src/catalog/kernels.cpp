#include "detail.hpp"

#include "fksym/specfun.hpp"

#include <limits>

namespace fksym::catalog_detail {

double par(const Params& p, const char* name) {
    const auto it = p.find(name);
    if (it == p.end()) {
        throw ValidityError(std::string("missing parameter '") + name + "'");
    }
    return it->second;
}

void require(bool ok, const std::string& entry, const std::string& constraint) {
    if (!ok) {
        throw ValidityError(entry + ": requires " + constraint);
    }
}

double log_sinh(double h) {
    if (h > 20.0) {
        return h - std::log(2.0) + std::log1p(-std::exp(-2.0 * h));
    }
    return std::log(std::sinh(h));
}

double log_i(double nu, double z) {
    if (z == 0.0) {
        if (nu == 0.0) return 0.0;
        if (nu > 0.0) return -std::numeric_limits<double>::infinity();
    }
    return specfun::log_bessel_i(nu, z);
}

double log_i_scaled(double nu, double z) {
    if (z == 0.0) return log_i(nu, z);
    return specfun::log_bessel_i_scaled(nu, z);
}

double log_laplace_kernel(double sigma, double A, double B, double Fx, double Fy, double t,
                          double x, double y) {
    const double nu = std::sqrt(2.0 * B + sigma * sigma) / sigma;
    // -(x + y)/(σt) + z with z = 2√(xy)/(σt), folded into one square before subtracting.
    const double d = std::sqrt(x) - std::sqrt(y);
    return 0.5 * std::log(x / y) + (Fy - Fx) / (2.0 * sigma) - std::log(sigma * t) -
           d * d / (sigma * t) - A * t / (2.0 * sigma) +
           log_i_scaled(nu, 2.0 * std::sqrt(x * y) / (sigma * t));
}

double log_quadratic_kernel(double sigma, double A, double B, double C, double Fx, double Fy,
                            double t, double x, double y) {
    const double rA = std::sqrt(A);
    const double h = 0.5 * rA * t;
    const double nu = std::sqrt(sigma * sigma + 2.0 * C) / sigma;
    const double ls = log_sinh(h);
    // (x + y)coth h - 2√(xy)/sinh h = (√x - √y)² coth h + 2√(xy) tanh(h/2).
    const double d = std::sqrt(x) - std::sqrt(y);
    return std::log(rA) + (Fy - Fx) / (2.0 * sigma) - std::log(2.0 * sigma) - ls +
           0.5 * std::log(x / y) - B * t / (2.0 * sigma) -
           rA / (2.0 * sigma) * (d * d / std::tanh(h) + 2.0 * std::sqrt(x * y) * std::tanh(0.5 * h)) +
           log_i_scaled(nu, std::exp(0.5 * std::log(A * x * y) - ls) / sigma);
}

namespace {

double log_1f1(double a, double b, double z) {
    if (z > 50.0) {
        const double v = specfun::hypergeom_1f1(b - a, b, -z);
        if (!(v > 0.0)) {
            throw NumericalError("1F1 is not positive in a log-domain closed form");
        }
        return z + std::log(v);
    }
    const double v = specfun::hypergeom_1f1(a, b, z);
    if (!(v > 0.0)) {
        throw NumericalError("1F1 is not positive in a log-domain closed form");
    }
    return std::log(v);
}

} // namespace

double log_bessel_laplace(double k, double nu, double c, double beta) {
    const double a0 = k + 0.5 * nu + 0.5;
    if (!(a0 > 0.0) || !(c > 0.0)) {
        throw DomainError("Bessel-Laplace integral diverges");
    }
    const double z = beta * beta / c;
    return specfun::gamma_ln(a0) - specfun::gamma_ln(nu + 1.0) - (k + 0.5) * std::log(c) +
           0.5 * nu * std::log(z) + log_1f1(a0, nu + 1.0, z);
}

} // namespace fksym::catalog_detail
