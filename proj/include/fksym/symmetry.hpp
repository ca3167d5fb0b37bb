/**
 * @file symmetry.hpp
 * @brief Stationary solutions and closed-form symmetry solutions of u_t = σx^γu_xx + f u_x - g u.
 */

#pragma once

#include "fksym/riccati.hpp"

#include <functional>
#include <string>

namespace fksym {

enum class MuZeroLimit { constant_one, nonconstant, unknown };

struct StationarySolution {
    std::function<double(double)> eval;
    std::string description;
    MuZeroLimit limit_at_mu_zero = MuZeroLimit::unknown;
    RiccatiParams params;  // classification of (f, g) the solution was built from

    double operator()(double x) const { return eval(x); }
};

/// plus: I_ν, x^{d+}, ₁F₁. minus: K_ν, x^{d-}, Ψ. automatic: the branch (or the linear
/// combination of both) whose zero-potential counterpart is the constant 1.
enum class StationaryBranch { automatic, plus, minus };

StationarySolution stationary_solution(const DiffusionSpec& diff, const PotentialSpec& pot,
                                       StationaryBranch branch = StationaryBranch::automatic);

/// Max over sample points of |σx^γu'' + f u' - g u| / local scale.
double stationary_residual(const DiffusionSpec& diff, const PotentialSpec& pot,
                           const std::function<double(double)>& u,
                           const std::vector<double>& xs = {0.2, 0.5, 1.0, 2.0, 5.0});

enum class SymmetryFamily { thm31, thm34, eq51, eq55 };

struct SymmetrySolution {
    std::function<double(double, double, double)> eval;  // (λ or ε, x, t)
    SymmetryFamily family = SymmetryFamily::thm31;
    RiccatiParams params;
    std::string stationary;
    bool invariant = false;  // the symmetry leaves u₀ unchanged

    double operator()(double p, double x, double t) const { return eval(p, x, t); }
};

/// Power-law symmetry, γ ≠ 2. A is the Laplace-family constant (R = A x^{2-γ} + B).
/// U_λ(x,0) = e^{-λ x^{2-γ}} u₀(x).
SymmetrySolution symmetry_thm31(const DiffusionSpec& diff, const PotentialSpec& pot,
                                const StationarySolution& u0, double A);

/// γ = 2 via ξ = ln x. A is the log_constant constant. U_ε(x,0) = e^{-(ε/σ)(ln x)²} u₀(x).
SymmetrySolution symmetry_thm34(const DiffusionSpec& diff, const PotentialSpec& pot,
                                const StationarySolution& u0, double A);

/// The A > 0 symmetry (γ = 1, quadratic family):
/// U_ε = e^{-Bt/2σ} exp(-√A x ε/(2σ(E-ε)) + (F(X)-F(x))/2σ) (E-ε)^{B/(2σ√A)} u₀(X),
/// E = e^{√A t}, X = xE/(E-ε).
SymmetrySolution symmetry_eq51(const DiffusionSpec& diff, const PotentialSpec& pot,
                               const StationarySolution& u0, const RiccatiParams& params);

/// The Tricomi solution obtained from the Ψ stationary branch:
/// U_ε = e^{-Bt/2σ}(E-ε)^{B/(2σ√A)-β/2}E^{β/2} x^{β/2} e^{-F(x)/2σ}
///       exp(-√A x(E+ε)/(2σ(E-ε))) Ψ(α, β, √A x E/(σ(E-ε))),
/// β = 1 + √(1+2C/σ²), α = B/(2σ√A) + β/2.
SymmetrySolution symmetry_eq55(const RiccatiParams& params, double sigma,
                               const std::function<double(double)>& F);

/// δ-atom weight U₁(x,t): symmetry_eq51 at ε = 1 applied to the Ψ branch, normalised so that
/// x^{β/2}Ψ(α,β,√Ax/σ) ~ x^{1-β/2} near 0. Throws CapabilityError outside the A > 0 family.
std::function<double(double, double)> atom_weight(const DiffusionSpec& diff,
                                                  const PotentialSpec& pot);

/// Central-difference estimate of u_t - σx^γu_xx - f u_x + g u at (x, t) with step h.
double pde_residual(const std::function<double(double, double)>& u, const DiffusionSpec& diff,
                    const PotentialSpec& pot, double x, double t, double h);

struct ResidualConvergence {
    double r[3];      // residuals at h = 1e-2, 5e-3, 2.5e-3
    double order[2];  // log2 ratios of successive residuals
    bool exact;       // residuals are at roundoff level, so the order is undefined
    bool passes(double tol = 0.2) const;
};

ResidualConvergence pde_residual_convergence(const std::function<double(double, double)>& u,
                                             const DiffusionSpec& diff, const PotentialSpec& pot,
                                             double x, double t);

} // namespace fksym
