#include "fksym/errors.hpp"
#include "fksym/specfun.hpp"
#include "specfun_detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace fksym::specfun {

namespace {

constexpr double kMaxLog = 709.78;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_nonpos_integer(double v) { return v <= 0.0 && std::floor(v) == v; }

detail::SignedLog to_signed_log(double v) {
    if (v == 0.0) {
        return {kNegInf, 1.0};
    }
    return {std::log(std::fabs(v)), v < 0.0 ? -1.0 : 1.0};
}

double from_signed_log(const detail::SignedLog& r, const char* name) {
    if (r.log_abs > kMaxLog) {
        throw OverflowError(std::string(name) + ": result overflows double");
    }
    return r.sign * std::exp(r.log_abs);
}

double series_eps(const EvalPolicy& policy) {
    return std::max(0.25 * policy.rel_tol, std::numeric_limits<double>::epsilon());
}

// Terminating ₁F₁(-n; b; z).
detail::SignedLog hyp1f1_polynomial(int n, double a, double b, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < n; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1.0);
        sum += term;
    }
    return to_signed_log(sum);
}

// Ascending series for z > 0 with overflow-safe rescaling.
detail::SignedLog hyp1f1_series(double a, double b, double z, const EvalPolicy& policy) {
    const double eps = series_eps(policy);
    double term = 1.0;
    double sum = 1.0;
    double log_scale = 0.0;
    const int cap = policy.max_terms + static_cast<int>(4.0 * z + std::fabs(a) + std::fabs(b));
    for (int k = 0; k < cap; ++k) {
        const double ratio = (a + k) / (b + k) * z / (k + 1.0);
        term *= ratio;
        sum += term;
        if (std::fabs(term) <= eps * std::fabs(sum) && std::fabs(ratio) < 1.0) {
            detail::SignedLog r = to_signed_log(sum);
            r.log_abs += log_scale;
            return r;
        }
        if (std::fabs(sum) > 1e280) {
            sum *= 1e-280;
            term *= 1e-280;
            log_scale += 280.0 * std::numbers::ln10;
        }
    }
    throw ConvergenceError("hypergeom_1f1: series did not converge");
}

// Leading large-z expansion Γ(b)/Γ(a) e^z z^{a-b} Σ (b-a)_k (1-a)_k / (k! z^k).
std::optional<detail::SignedLog> hyp1f1_asymptotic(double a, double b, double z,
                                                   const EvalPolicy& policy) {
    const double eps = series_eps(policy);
    // Skip when the recessive branch (relative size ~ Γ(a)/Γ(b-a) z^{b-2a} e^{-z}) is visible.
    if (!is_nonpos_integer(b - a)) {
        const double rec = detail::lgamma_signed(a).log_abs - detail::lgamma_signed(b - a).log_abs +
                           (b - 2.0 * a) * std::log(z) - z;
        if (rec > std::log(eps)) {
            return std::nullopt;
        }
    }
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 0; k < policy.max_terms; ++k) {
        term *= (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z);
        sum += term;
        const double at = std::fabs(term);
        if (at <= eps * std::fabs(sum)) {
            const auto gb = detail::lgamma_signed(b);
            const auto ga = detail::lgamma_signed(a);
            return detail::SignedLog{gb.log_abs - ga.log_abs + z + (a - b) * std::log(z) +
                                         std::log(std::fabs(sum)),
                                     gb.sign * ga.sign * (sum < 0.0 ? -1.0 : 1.0)};
        }
        if (k > 1 && at > prev) {
            return std::nullopt;
        }
        prev = at;
    }
    return std::nullopt;
}

// U(a,b,z) ~ z^{-a} Σ (a)_k (a-b+1)_k / k! (-1/z)^k.
std::optional<detail::SignedLog> tricomi_asymptotic(double a, double b, double z,
                                                    const EvalPolicy& policy) {
    const double eps = series_eps(policy);
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 0; k < policy.max_terms; ++k) {
        term *= -(a + k) * (a - b + 1.0 + k) / ((k + 1.0) * z);
        sum += term;
        const double at = std::fabs(term);
        if (at <= eps * std::fabs(sum)) {
            return detail::SignedLog{-a * std::log(z) + std::log(std::fabs(sum)),
                                     sum < 0.0 ? -1.0 : 1.0};
        }
        if (k > 1 && at > prev) {
            return std::nullopt;
        }
        prev = at;
    }
    return std::nullopt;
}

// U(-m, b, z) = (-1)^m Σ_s C(m,s) (b+s)_{m-s} (-z)^s.
detail::SignedLog tricomi_polynomial(int m, double b, double z) {
    double sum = 0.0;
    double binom = 1.0;
    for (int s = 0; s <= m; ++s) {
        double poch = 1.0;
        for (int j = 0; j < m - s; ++j) {
            poch *= b + s + j;
        }
        sum += binom * poch * std::pow(-z, s);
        binom *= static_cast<double>(m - s) / (s + 1.0);
    }
    if (m % 2 == 1) {
        sum = -sum;
    }
    return to_signed_log(sum);
}

// Backward Taylor integration of z u'' + (b - z) u' - a u = 0 from the asymptotic region.
detail::SignedLog tricomi_ode(double a, double b, double z, const EvalPolicy& policy) {
    const double eps = std::max(0.01 * policy.rel_tol, 1e-17);
    double z0 = std::max(2.0 * z, 20.0 + 2.0 * (std::fabs(a) + std::fabs(a - b + 1.0)));
    std::optional<detail::SignedLog> u0;
    std::optional<detail::SignedLog> u1;
    for (; z0 < 1e7; z0 *= 2.0) {
        u0 = tricomi_asymptotic(a, b, z0, policy);
        u1 = tricomi_asymptotic(a + 1.0, b + 1.0, z0, policy);
        if (u0 && u1) {
            break;
        }
    }
    if (!u0 || !u1) {
        throw ConvergenceError("tricomi_u: no asymptotic starting point");
    }
    // Work with w = U / U(z0).
    double w = 1.0;
    double wp = -a * u1->sign * u0->sign * std::exp(u1->log_abs - u0->log_abs);
    double log_scale = u0->log_abs;
    double zc = z0;
    while (zc > z) {
        const double h = -std::min({zc - z, 0.5 * zc, 2.0});
        double c0 = w;
        double c1 = wp;
        double sw = c0 + c1 * h;
        double swp = c1;
        double hn = h;  // h^{n+1}
        int quiet = 0;
        int n = 0;
        for (; n < 2000; ++n) {
            const double c2 =
                (-(n + 1.0) * (n + b - zc) * c1 + (n + a) * c0) / (zc * (n + 2.0) * (n + 1.0));
            const double dw = c2 * hn * h;
            const double dwp = (n + 2.0) * c2 * hn;
            sw += dw;
            swp += dwp;
            hn *= h;
            c0 = c1;
            c1 = c2;
            if (std::fabs(dw) <= eps * std::fabs(sw) && std::fabs(dwp) <= eps * std::fabs(swp)) {
                if (++quiet == 2) {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if (n >= 2000) {
            throw ConvergenceError("tricomi_u: Taylor step did not converge");
        }
        w = sw;
        wp = swp;
        zc += h;
        const double mag = std::max(std::fabs(w), std::fabs(wp));
        if (mag > 1e200 || (mag < 1e-200 && mag > 0.0)) {
            w /= mag;
            wp /= mag;
            log_scale += std::log(mag);
        }
    }
    if (w == 0.0) {
        return {kNegInf, 1.0};
    }
    return {log_scale + std::log(std::fabs(w)), u0->sign * (w < 0.0 ? -1.0 : 1.0)};
}

} // namespace

namespace detail {

SignedLog lgamma_signed(double x) {
    if (is_nonpos_integer(x)) {
        throw PoleError("gamma: pole at non-positive integer " + std::to_string(x));
    }
    const double l = std::lgamma(x);
    double sign = 1.0;
    if (x < 0.0 && static_cast<long long>(std::floor(x)) % 2 != 0) {
        sign = -1.0;
    }
    return {l, sign};
}

SignedLog log_hyp1f1_signed(double a, double b, double z, const EvalPolicy& policy) {
    policy.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
        throw DomainError("hypergeom_1f1: arguments must be finite");
    }
    const bool a_poly = is_nonpos_integer(a);
    if (is_nonpos_integer(b) && !(a_poly && a > b)) {
        throw PoleError("hypergeom_1f1: b is a non-positive integer");
    }
    if (z == 0.0) {
        return {0.0, 1.0};
    }
    if (a_poly) {
        return hyp1f1_polynomial(static_cast<int>(-a), a, b, z);
    }
    if (z < 0.0) {
        SignedLog r = log_hyp1f1_signed(b - a, b, -z, policy);
        r.log_abs += z;
        return r;
    }
    if (z >= 30.0) {
        if (auto r = hyp1f1_asymptotic(a, b, z, policy)) {
            return *r;
        }
    }
    return hyp1f1_series(a, b, z, policy);
}

SignedLog log_tricomi_signed(double a, double b, double z, const EvalPolicy& policy) {
    policy.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
        throw DomainError("tricomi_u: arguments must be finite");
    }
    if (!(z > 0.0)) {
        throw DomainError("tricomi_u: requires z > 0");
    }
    if (is_nonpos_integer(a)) {
        return tricomi_polynomial(static_cast<int>(-a), b, z);
    }
    if (is_nonpos_integer(a - b + 1.0)) {
        SignedLog r = tricomi_polynomial(static_cast<int>(-(a - b + 1.0)), 2.0 - b, z);
        r.log_abs += (1.0 - b) * std::log(z);
        return r;
    }
    if (auto r = tricomi_asymptotic(a, b, z, policy)) {
        return *r;
    }
    return tricomi_ode(a, b, z, policy);
}

} // namespace detail

double hypergeom_1f1(double a, double b, double z, const EvalPolicy& policy) {
    return from_signed_log(detail::log_hyp1f1_signed(a, b, z, policy), "hypergeom_1f1");
}

double tricomi_u(double a, double b, double z, const EvalPolicy& policy) {
    return from_signed_log(detail::log_tricomi_signed(a, b, z, policy), "tricomi_u");
}

double whittaker_m(double k, double m, double z, const EvalPolicy& policy) {
    if (!(z > 0.0)) {
        throw DomainError("whittaker_m: requires z > 0");
    }
    if (is_nonpos_integer(1.0 + 2.0 * m)) {
        throw PoleError("whittaker_m: 1+2m is a non-positive integer");
    }
    auto r = detail::log_hyp1f1_signed(m - k + 0.5, 1.0 + 2.0 * m, z, policy);
    r.log_abs += -0.5 * z + (m + 0.5) * std::log(z);
    return from_signed_log(r, "whittaker_m");
}

double whittaker_w(double k, double m, double z, const EvalPolicy& policy) {
    if (!(z > 0.0)) {
        throw DomainError("whittaker_w: requires z > 0");
    }
    auto r = detail::log_tricomi_signed(0.5 + m - k, 1.0 + 2.0 * m, z, policy);
    r.log_abs += -0.5 * z + (m + 0.5) * std::log(z);
    return from_signed_log(r, "whittaker_w");
}

} // namespace fksym::specfun
