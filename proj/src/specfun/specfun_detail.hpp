#pragma once

#include "fksym/specfun.hpp"

namespace fksym::specfun::detail {

// Value represented as sign * exp(log_abs).
struct SignedLog {
    double log_abs;
    double sign;
};

/// ln|I_ν(z)| with sign; `scaled` returns ln|e^{-z} I_ν(z)| instead.
SignedLog log_bessel_i_signed(double nu, double z, const EvalPolicy& policy, bool scaled = false);
double log_bessel_k_impl(double nu, double z, const EvalPolicy& policy);
SignedLog log_hyp1f1_signed(double a, double b, double z, const EvalPolicy& policy);
SignedLog log_tricomi_signed(double a, double b, double z, const EvalPolicy& policy);

// ln|Γ(x)| and sign of Γ(x); throws PoleError at non-positive integers.
SignedLog lgamma_signed(double x);

} // namespace fksym::specfun::detail
