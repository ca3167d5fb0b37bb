#include "fksym/quadrature.hpp"

#include "fksym/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace fksym {

namespace {

double gk(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate(f, a, b, spec.max_subdivisions,
                                                          0.1 * spec.rel_tol, &err);
    if (!std::isfinite(v)) {
        throw ConvergenceError("quadrature: non-finite integrand on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]");
    }
    return v;
}

// First panel [0, b]: substitute y = w^q so a declared y^{-p} singularity becomes bounded.
double origin_panel(const std::function<double(double)>& f, double b, const QuadratureSpec& spec) {
    if (spec.singular_power <= 0.0) {
        return gk(f, 0.0, b, spec);
    }
    if (spec.singular_power >= 1.0) {
        throw DomainError("quadrature: singular_power must be < 1");
    }
    const double q = 1.0 / (1.0 - spec.singular_power);
    auto g = [&](double w) { return w > 0.0 ? q * std::pow(w, q - 1.0) * f(std::pow(w, q)) : 0.0; };
    return gk(g, 0.0, std::pow(b, 1.0 / q), spec);
}

} // namespace

double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
        throw DomainError("quadrature: tolerances must be positive");
    }
    if (a == b) return 0.0;
    if (a == 0.0) return origin_panel(f, b, spec);
    return gk(f, a, b, spec);
}

double integrate_semi_infinite(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0) || !(spec.scale > 0.0)) {
        throw DomainError("quadrature: tolerances and scale must be positive");
    }
    double lo = spec.scale / 16.0;
    double sum = origin_panel(f, lo, spec);
    double prev = std::fabs(sum);
    int small = 0;
    for (int k = 0; k < spec.max_panels; ++k) {
        const double hi = 2.0 * lo;
        const double piece = gk(f, lo, hi, spec);
        sum += piece;
        const double mag = std::fabs(piece);
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(sum));
        if (hi >= spec.scale) {
            const double ratio = prev > 0.0 ? mag / prev : 0.0;
            const double tail = ratio < spec.tail_ratio ? mag * ratio / (1.0 - ratio) : mag * 1e3;
            small = (tail <= 0.1 * tol || mag <= 1e-3 * spec.abs_tol) ? small + 1 : 0;
            if (small >= 2) return sum;
        }
        prev = mag;
        lo = hi;
    }
    throw ConvergenceError("quadrature: tail did not decay within " +
                           std::to_string(spec.max_panels) + " panels");
}

} // namespace fksym
