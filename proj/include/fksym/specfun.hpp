/**
 * @file specfun.hpp
 * @brief Modified Bessel, confluent hypergeometric and Whittaker functions for real arguments.
 */

#pragma once

namespace fksym::specfun {

struct EvalPolicy {
    double rel_tol = 1e-13;
    int max_terms = 500;
    bool log_domain = false;  // reserved for callers that prefer log-scaled results

    void validate() const;
};

/// I_ν(z), z >= 0. Throws OverflowError when the result is not representable.
double bessel_i(double nu, double z, const EvalPolicy& policy = {});
/// e^{-z} I_ν(z).
double bessel_i_scaled(double nu, double z, const EvalPolicy& policy = {});
/// ln I_ν(z). Throws DomainError when I_ν(z) <= 0 (possible for ν < -1 non-integer).
double log_bessel_i(double nu, double z, const EvalPolicy& policy = {});
/// ln(e^{-z} I_ν(z)), accurate for arbitrarily large z.
double log_bessel_i_scaled(double nu, double z, const EvalPolicy& policy = {});

/// K_ν(z), z > 0.
double bessel_k(double nu, double z, const EvalPolicy& policy = {});
/// e^{z} K_ν(z).
double bessel_k_scaled(double nu, double z, const EvalPolicy& policy = {});
/// ln K_ν(z).
double log_bessel_k(double nu, double z, const EvalPolicy& policy = {});

/// Kummer's ₁F₁(a; b; z). Throws PoleError when b is a non-positive integer.
double hypergeom_1f1(double a, double b, double z, const EvalPolicy& policy = {});

/// Tricomi's Ψ(a, b, z) = U(a, b, z), z > 0.
double tricomi_u(double a, double b, double z, const EvalPolicy& policy = {});

/// M_{k,m}(z) = e^{-z/2} z^{m+1/2} ₁F₁(m-k+1/2; 1+2m; z).
double whittaker_m(double k, double m, double z, const EvalPolicy& policy = {});
/// W_{k,m}(z) = e^{-z/2} z^{m+1/2} U(m-k+1/2, 1+2m, z).
double whittaker_w(double k, double m, double z, const EvalPolicy& policy = {});

/// ln Γ(x), x > 0.
double gamma_ln(double x);
/// Error function.
double erf(double x);

} // namespace fksym::specfun
