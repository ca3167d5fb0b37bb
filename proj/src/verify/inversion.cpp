#include "fksym/errors.hpp"
#include "fksym/specfun.hpp"
#include "fksym/verify.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fksym {

namespace {

long double factorial(int n) {
    long double r = 1.0L;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::vector<long double> stehfest_weights(int order) {
    const int half = order / 2;
    std::vector<long double> v(order + 1, 0.0L);
    for (int k = 1; k <= order; ++k) {
        long double s = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            s += std::pow(static_cast<long double>(j), half) * factorial(2 * j) /
                 (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) *
                  factorial(2 * j - k));
        }
        v[k] = ((k + half) % 2 == 0 ? 1.0L : -1.0L) * s;
    }
    return v;
}

} // namespace

double gaver_stehfest(const std::function<double(double)>& Phi, double y, int order) {
    if (order < 2 || order % 2 != 0 || order > 30) {
        throw DomainError("gaver_stehfest: order must be even and in [2, 30]");
    }
    if (!(y > 0.0)) throw DomainError("gaver_stehfest: y must be > 0");
    const auto v = stehfest_weights(order);
    const long double a = std::numbers::ln2_v<long double> / y;
    long double sum = 0.0L;
    for (int k = 1; k <= order; ++k) {
        sum += v[k] * static_cast<long double>(Phi(static_cast<double>(k * a)));
    }
    return static_cast<double>(a * sum);
}

InversionResult laplace_invert(const std::function<double(double)>& Phi, double y, int order,
                               double stability_tol) {
    InversionResult r;
    if (order < 4) throw DomainError("laplace_invert: order must be >= 4");
    r.value = gaver_stehfest(Phi, y, order);
    r.previous = gaver_stehfest(Phi, y, order - 2);
    r.spread = std::fabs(r.value - r.previous) /
               std::max(std::fabs(r.value), std::numeric_limits<double>::min());
    if (!(r.spread <= stability_tol)) {
        throw InstabilityError("laplace_invert: orders " + std::to_string(order - 2) + " and " +
                               std::to_string(order) + " differ by " + std::to_string(r.spread) +
                               " (relative) at y = " + std::to_string(y));
    }
    return r;
}

double whittaker_forward(const std::function<double(double)>& phi, double k, double nu,
                         double lambda, const QuadratureSpec& spec) {
    if (!(lambda > 0.0)) throw DomainError("whittaker_forward: lambda must be > 0");
    const double m = std::fabs(nu);
    // (λy)^{-k-1/2} e^{-λy/2} W_{k+1/2,m}(λy) = e^{-z} z^{m-k} U(m-k, 1+2m, z), z = λy.
    auto f = [&](double y) {
        const double p = phi(y);
        if (p == 0.0) return 0.0;
        const double z = lambda * y;
        return std::exp(-z + (m - k) * std::log(z)) * specfun::tricomi_u(m - k, 1.0 + 2.0 * m, z) *
               p;
    };
    return integrate_semi_infinite(f, spec);
}

} // namespace fksym
