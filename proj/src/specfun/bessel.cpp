#include "fksym/specfun.hpp"

#include "fksym/errors.hpp"
#include "specfun_detail.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace fksym::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxLog = 709.78;

// Taylor coefficients of 1/Γ(x) about 0: 1/Γ(x) = Σ_{k>=1} c_k x^k.
constexpr std::array<double, 27> kRGammaCoeffs = {
    1.00000000000000000e+00,  5.77215664901532866e-01,  -6.55878071520253902e-01,
    -4.20026350340952370e-02, 1.66538611382291479e-01,  -4.21977345555443334e-02,
    -9.62197152787697303e-03, 7.21894324666309990e-03,  -1.16516759185906517e-03,
    -2.15241674114950975e-04, 1.28050282388116196e-04,  -2.01348547807882387e-05,
    -1.25049348214267063e-06, 1.13302723198169593e-06,  -2.05633841697760707e-07,
    6.11609510448141609e-09,  5.00200764446922295e-09,  -1.18127457048702004e-09,
    1.04342671169110054e-10,  7.78226343990507081e-12,  -3.69680561864220598e-12,
    5.10037028745447575e-13,  -2.05832605356650664e-14, -5.34812253942301782e-15,
    1.22677862823826084e-15,  -1.18125930169745883e-16, 1.18669225475160037e-18};

// gam1 = (1/Γ(1-μ) - 1/Γ(1+μ))/(2μ), gam2 = (1/Γ(1-μ) + 1/Γ(1+μ))/2 for |μ| <= 1/2.
void temme_gammas(double mu, double& gam1, double& gam2) {
    gam1 = 0.0;
    gam2 = 0.0;
    // c_k multiplies μ^{k-1} in 1/Γ(1+μ); index k-1 in the array.
    double pw_odd = 1.0;   // μ^{k-1} for odd k
    double pw_even = 1.0;  // μ^{k-2} for even k
    for (std::size_t i = 0; i < kRGammaCoeffs.size(); ++i) {
        const std::size_t k = i + 1;
        if (k % 2 == 1) {
            gam2 += kRGammaCoeffs[i] * pw_odd;
            pw_odd *= mu * mu;
        } else {
            gam1 -= kRGammaCoeffs[i] * pw_even;
            pw_even *= mu * mu;
        }
    }
}

bool is_integer(double v) { return std::floor(v) == v; }

// ln I_ν(z) by the ascending series, ν >= 0, z > 0. Terms are all positive.
double log_i_series(double nu, double z, const EvalPolicy& policy) {
    const double q = 0.25 * z * z;
    double log_scale = nu * std::log(0.5 * z) - std::lgamma(nu + 1.0);
    double term = 1.0;
    double sum = 1.0;
    const int cap = policy.max_terms + static_cast<int>(2.0 * z);
    for (int k = 1; k <= cap; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (term < 0.25 * policy.rel_tol * sum) {
            return log_scale + std::log(sum);
        }
        if (sum > 1e280) {
            sum *= 1e-280;
            term *= 1e-280;
            log_scale += 280.0 * std::numbers::ln10;
        }
    }
    throw ConvergenceError("bessel_i: ascending series did not converge (nu=" + std::to_string(nu) +
                           ", z=" + std::to_string(z) + ")");
}

// ln(e^{-z} I_ν(z)) by the Hankel expansion; empty when the expansion cannot reach rel_tol.
std::optional<double> log_i_scaled_hankel(double nu, double z, const EvalPolicy& policy) {
    const double mu4 = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k <= policy.max_terms; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu4 - odd * odd) / (k * 8.0 * z);
        sum += term;
        const double at = std::fabs(term);
        if (at <= 0.25 * policy.rel_tol * std::fabs(sum)) {
            return -0.5 * std::log(2.0 * kPi * z) + std::log(sum);
        }
        if (k > 2 && at > prev) {
            return std::nullopt;
        }
        prev = at;
    }
    return std::nullopt;
}

// ln I_ν(z), ν >= 0.
double log_i_nonneg(double nu, double z, const EvalPolicy& policy) {
    if (z == 0.0) {
        return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    if (z > std::max(30.0, 0.25 * nu * nu)) {
        if (auto h = log_i_scaled_hankel(nu, z, policy)) {
            return *h + z;
        }
    }
    return log_i_series(nu, z, policy);
}

// ln(e^{-z} I_ν(z)) for ν >= 0. The large-z branch never forms z + O(ln z), so the result keeps
// full relative accuracy when z is huge.
double log_i_nonneg_scaled(double nu, double z, const EvalPolicy& policy) {
    if (z > std::max(30.0, 0.25 * nu * nu)) {
        if (auto h = log_i_scaled_hankel(nu, z, policy)) return *h;
    }
    return log_i_nonneg(nu, z, policy) - z;
}

// K_ν(z) for ν >= 0, z > 0, returned as ln K_ν(z). Temme series (z < 2) or
// Steed's continued fraction (z >= 2) for the fractional order, then upward recurrence.
double log_k_nonneg(double nu, double z, const EvalPolicy& policy) {
    const double eps = std::max(policy.rel_tol * 0.1, std::numeric_limits<double>::epsilon());
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / z;
    const double xi2 = 2.0 * xi;
    const int max_iter = std::max(policy.max_terms, 10000);

    double rkmu = 0.0;
    double rk1 = 0.0;
    double log_offset = 0.0;

    if (z < 2.0) {
        const double x2 = 0.5 * z;
        const double pimu = kPi * xmu;
        const double fact = std::fabs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = xmu * d;
        const double fact2 = std::fabs(e) < eps ? 1.0 : std::sinh(e) / e;
        double gam1 = 0.0;
        double gam2 = 0.0;
        temme_gammas(xmu, gam1, gam2);
        const double gampl = gam2 - xmu * gam1;  // 1/Γ(1+μ)
        const double gammi = gam2 + xmu * gam1;  // 1/Γ(1-μ)
        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        int i = 1;
        for (; i <= max_iter; ++i) {
            ff = (i * ff + p + q) / (i * i - xmu2);
            c *= d / i;
            p /= i - xmu;
            q /= i + xmu;
            const double del = c * ff;
            sum += del;
            const double del1 = c * (p - i * ff);
            sum1 += del1;
            if (std::fabs(del) < std::fabs(sum) * eps) {
                break;
            }
        }
        if (i > max_iter) {
            throw ConvergenceError("bessel_k: Temme series did not converge");
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        double b = 2.0 * (1.0 + z);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        int i = 1;
        for (; i <= max_iter; ++i) {
            a -= 2 * i;
            c = -a * c / (i + 1.0);
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::fabs(dels / s) < eps) {
                break;
            }
        }
        if (i > max_iter) {
            throw ConvergenceError("bessel_k: Steed continued fraction did not converge");
        }
        h = a1 * h;
        // Scaled by e^{z}; the offset restores it.
        rkmu = std::sqrt(kPi / (2.0 * z)) / s;
        rk1 = rkmu * (xmu + z + 0.5 - h) * xi;
        log_offset = -z;
    }

    for (int i = 1; i <= nl; ++i) {
        const double next = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
        if (std::fabs(rk1) > 1e250) {
            rkmu *= 1e-250;
            rk1 *= 1e-250;
            log_offset += 250.0 * std::numbers::ln10;
        }
    }
    return std::log(rkmu) + log_offset;
}

double log_add(double la, double lb) {
    if (la < lb) {
        std::swap(la, lb);
    }
    if (lb == -std::numeric_limits<double>::infinity()) {
        return la;
    }
    return la + std::log1p(std::exp(lb - la));
}

} // namespace

namespace detail {

SignedLog log_bessel_i_signed(double nu, double z, const EvalPolicy& policy, bool scaled) {
    policy.validate();
    if (!std::isfinite(nu) || !std::isfinite(z) || z < 0.0) {
        throw DomainError("bessel_i: requires finite nu and z >= 0");
    }
    auto log_i = [&](double v) {
        return scaled ? log_i_nonneg_scaled(v, z, policy) : log_i_nonneg(v, z, policy);
    };
    if (nu >= 0.0 || is_integer(nu)) {
        return {log_i(std::fabs(nu)), 1.0};
    }
    // I_{-v} = I_v + (2/π) sin(vπ) K_v for v = -nu > 0.
    const double v = -nu;
    if (z == 0.0) {
        const double s = std::sin(v * kPi);
        return {std::numeric_limits<double>::infinity(), s > 0.0 ? 1.0 : -1.0};
    }
    const double li = log_i(v);
    const double lk = log_k_nonneg(v, z, policy) - (scaled ? z : 0.0);
    const double s = 2.0 / kPi * std::sin(v * kPi);
    if (s == 0.0) {
        return {li, 1.0};
    }
    const double ls = std::log(std::fabs(s)) + lk;
    if (s > 0.0) {
        return {log_add(li, ls), 1.0};
    }
    // Difference of two positive terms.
    if (li > ls) {
        return {li + std::log1p(-std::exp(ls - li)), 1.0};
    }
    if (li == ls) {
        return {-std::numeric_limits<double>::infinity(), 1.0};
    }
    return {ls + std::log1p(-std::exp(li - ls)), -1.0};
}

double log_bessel_k_impl(double nu, double z, const EvalPolicy& policy) {
    policy.validate();
    if (!std::isfinite(nu) || !std::isfinite(z) || z <= 0.0) {
        throw DomainError("bessel_k: requires finite nu and z > 0");
    }
    return log_k_nonneg(std::fabs(nu), z, policy);
}

} // namespace detail

void EvalPolicy::validate() const {
    if (!(rel_tol > 0.0) || max_terms < 1) {
        throw DomainError("EvalPolicy: rel_tol must be > 0 and max_terms >= 1");
    }
}

double bessel_i(double nu, double z, const EvalPolicy& policy) {
    const auto r = detail::log_bessel_i_signed(nu, z, policy);
    if (r.log_abs > kMaxLog) {
        throw OverflowError("bessel_i: result overflows double (use bessel_i_scaled)");
    }
    return r.sign * std::exp(r.log_abs);
}

double bessel_i_scaled(double nu, double z, const EvalPolicy& policy) {
    const auto r = detail::log_bessel_i_signed(nu, z, policy, true);
    return r.sign * std::exp(r.log_abs);
}

namespace {

double positive_log(const detail::SignedLog& r, const char* name) {
    if (r.sign < 0.0 || r.log_abs == -std::numeric_limits<double>::infinity()) {
        if (r.log_abs == -std::numeric_limits<double>::infinity() && r.sign > 0.0) {
            return r.log_abs;
        }
        throw DomainError(std::string(name) + ": I_nu(z) is negative");
    }
    return r.log_abs;
}

} // namespace

double log_bessel_i(double nu, double z, const EvalPolicy& policy) {
    return positive_log(detail::log_bessel_i_signed(nu, z, policy), "log_bessel_i");
}

double log_bessel_i_scaled(double nu, double z, const EvalPolicy& policy) {
    return positive_log(detail::log_bessel_i_signed(nu, z, policy, true), "log_bessel_i_scaled");
}

double bessel_k(double nu, double z, const EvalPolicy& policy) {
    const double l = detail::log_bessel_k_impl(nu, z, policy);
    if (l > kMaxLog) {
        throw OverflowError("bessel_k: result overflows double");
    }
    return std::exp(l);
}

double bessel_k_scaled(double nu, double z, const EvalPolicy& policy) {
    return std::exp(detail::log_bessel_k_impl(nu, z, policy) + z);
}

double log_bessel_k(double nu, double z, const EvalPolicy& policy) {
    return detail::log_bessel_k_impl(nu, z, policy);
}

double gamma_ln(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gamma_ln: requires x > 0");
    }
    return std::lgamma(x);
}

double erf(double x) { return std::erf(x); }

} // namespace fksym::specfun
