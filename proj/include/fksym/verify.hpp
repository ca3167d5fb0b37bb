/**
 * @file verify.hpp
 * @brief Independent numerical oracles and the cross-identity checks built on them.
 *
 * Every check returns a VerificationReport. Reports are deterministic given their inputs,
 * including Monte Carlo seeds.
 */

#pragma once

#include "fksym/catalog.hpp"
#include "fksym/quadrature.hpp"
#include "fksym/riccati.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace fksym {

// ---------------------------------------------------------------------------------------------
// Reports

struct ReportRow {
    std::string grid_point;
    double reference = 0.0;
    double computed = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double standard_error = std::numeric_limits<double>::quiet_NaN();  // MC rows only
    bool pass = false;
};

enum class Criterion {
    relative,        // rel_err < tolerance, or abs_err < abs_floor
    absolute,        // abs_err < tolerance
    standard_errors  // abs_err < tolerance · standard_error
};

struct VerificationReport {
    std::string identity;
    std::string oracle;  // what the reference column is
    Criterion criterion = Criterion::relative;
    double tolerance = 1e-8;
    double abs_floor = 0.0;
    std::vector<ReportRow> rows;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    bool pass = true;
    bool inconclusive = false;
    bool numerical_error = false;  // some evaluation threw a NumericalError
    std::string note;

    VerificationReport() = default;
    VerificationReport(std::string identity, std::string oracle, Criterion criterion,
                       double tolerance);

    /// Append a row; pass is decided by the report's criterion.
    void add(const std::string& grid_point, double reference, double computed,
             double standard_error = std::numeric_limits<double>::quiet_NaN());
    /// Append a row whose pass flag was decided elsewhere.
    void add_judged(const std::string& grid_point, double reference, double computed, bool pass);
    /// Append a row for a failed evaluation (the exception message goes to note).
    void add_error(const std::string& grid_point, const std::string& message);

    std::string to_json() const;
    /// RFC 4180 rows: identity, grid_point, reference, computed, abs_err, rel_err, pass.
    std::string to_csv(bool header = true) const;
};

std::string reports_to_json(const std::vector<VerificationReport>& reports);
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

/// "name=value,..." with values at 15 significant digits.
std::string grid_label(const std::vector<std::pair<std::string, double>>& coords);

// ---------------------------------------------------------------------------------------------
// Laplace inversion

/// Gaver–Stehfest estimate of f(y) from Φ(λ) = ∫e^{-λy}f(y)dy at the given even order.
double gaver_stehfest(const std::function<double(double)>& Phi, double y, int order);

struct InversionResult {
    double value = 0.0;     // at the requested order
    double previous = 0.0;  // at order - 2
    double spread = 0.0;    // |value - previous| / |value|
};

/// Gaver–Stehfest at `order` with a convergence diagnostic against order - 2. The spread bounds
/// the error of the lower order, so it overestimates the error of `value`. Throws
/// InstabilityError when the spread exceeds stability_tol. Φ is sampled in double precision,
/// which limits useful orders to about 18.
InversionResult laplace_invert(const std::function<double(double)>& Phi, double y, int order = 14,
                               double stability_tol = 1e-3);

// ---------------------------------------------------------------------------------------------
// Whittaker transform

/// Φ(λ) = ∫ (λy)^{-k-1/2} e^{-λy/2} W_{k+1/2,ν}(λy) φ(y) dy.
double whittaker_forward(const std::function<double(double)>& phi, double k, double nu,
                         double lambda, const QuadratureSpec& spec = {});

// ---------------------------------------------------------------------------------------------
// Monte Carlo

enum class McScheme { euler_full_truncation, exact_besq };

struct McSpec {
    std::size_t n_paths = 100000;
    int n_steps = 2000;
    McScheme scheme = McScheme::euler_full_truncation;
    std::uint64_t seed = 1;
    bool antithetic = false;
    /// γ = 0 only: simulate Y = X² (a γ = 1 diffusion) instead of X.
    bool simulate_square = false;
    /// Singular potentials are evaluated at max(x, x_floor).
    double x_floor = 1e-8;
    /// Worker threads; 0 uses std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct McResult {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_failed = 0;  // non-finite paths, dropped
    double clip_rate = 0.0;    // fraction of potential evaluations clipped at x_floor
};

/// E_x[exp(-λX_t^{2-γ} - ∫₀ᵗ g(X_s) ds)], path integral by the trapezoid rule on the time grid.
/// exact_besq needs γ = 1, σ = 2 and a constant drift n (squared Gaussians for integer n,
/// Poisson–gamma noncentral χ² otherwise). Per-path streams are seeded from (seed, path index)
/// and the reduction is a pairwise sum, so results do not depend on the thread count.
McResult mc_expectation(const DiffusionSpec& diff, const PotentialSpec& pot, double lambda,
                        double t, double x, const McSpec& spec);

// ---------------------------------------------------------------------------------------------
// Identity checks

/// Quadrature of ∫e^{-λy^m}u₀(y)p(t,x,y)dy (atoms included) against transform_rhs.
VerificationReport check_transform_identity(const CatalogEntry& entry, const Params& params,
                                            const std::vector<double>& lambdas,
                                            const std::vector<double>& ts,
                                            const std::vector<double>& xs, double tol = 1e-8);

/// Continuous mass plus order-0 atoms against 1, or against `expected(t, x)` when given.
VerificationReport check_normalization(
    const CatalogEntry& entry, const Params& params, const std::vector<double>& ts,
    const std::vector<double>& xs, double tol = 1e-8,
    const std::function<double(double, double)>& expected = nullptr);

/// Closed-form expectation against the quadrature fallback.
VerificationReport check_closed_form(const CatalogEntry& entry, const Params& params,
                                     const std::vector<double>& lambdas,
                                     const std::vector<double>& ts, const std::vector<double>& xs,
                                     double tol = 1e-8);

/// Density at param_name = v for each v of a sequence decreasing to 0, extrapolated to 0 by
/// Neville polynomial interpolation and compared with target(y) (default: the same entry at
/// param_name = 0). Extrapolation assumes the density is smooth in the parameter. A non-monotone error
/// sequence marks the report inconclusive instead of failed.
VerificationReport check_limit_reduction(const CatalogEntry& entry, const Params& params,
                                         const std::string& param_name,
                                         const std::vector<double>& sequence, double t, double x,
                                         const std::vector<double>& ys,
                                         const std::function<double(double)>& target = nullptr,
                                         double tol = 1e-6);

/// Bessel process of index ξ: the v-integral representation of E[e^{-λX_t² - (μ²/2)∫X⁻²}]
/// against the ₁F₁ closed form of the bessel entry.
VerificationReport check_alt_representation(double xi, double mu, double lambda, double t,
                                            double x, double tol = 1e-6);

/// ∫p(s,x,z)p(t,z,y)dz against p(s+t,x,y).
VerificationReport check_chapman_kolmogorov(const CatalogEntry& entry, const Params& params,
                                            const std::vector<std::pair<double, double>>& times,
                                            const std::vector<double>& xs,
                                            const std::vector<double>& ys, double tol = 1e-6);

/// Backward-variable PDE residual of the density at fixed y: observed order 2 ± tol.
VerificationReport check_density_pde(const CatalogEntry& entry, const Params& params,
                                     const std::vector<double>& ts, const std::vector<double>& xs,
                                     const std::vector<double>& ys, double tol = 0.2);

/// Residual convergence order for an arbitrary solution u(x, t).
VerificationReport check_solution_pde(const std::string& identity,
                                      const std::function<double(double, double)>& u,
                                      const DiffusionSpec& diff, const PotentialSpec& pot,
                                      const std::vector<std::pair<double, double>>& points,
                                      double tol = 0.2);

/// Riccati residual of the entry's documented constants on 50 log-spaced points in [1e-2, 1e2]
/// (tol relative to the left-hand side scale), and fit_riccati recovery to fit_tol.
VerificationReport check_riccati(const CatalogEntry& entry, const Params& params,
                                 double tol = 1e-10, double fit_tol = 1e-6);

/// BESQ density ratio q/p for killing (μ²/2)/x against I_{√(μ²+ν²)}(√(xy)/t)/I_{|ν|}(√(xy)/t).
VerificationReport check_hartman_watson(double n, const std::vector<double>& mus,
                                        const std::vector<double>& ts,
                                        const std::vector<double>& xs,
                                        const std::vector<double>& ys, double tol = 1e-10);

/// Gaver–Stehfest inversion of the BESQ(3) transform against the closed-form density.
VerificationReport check_laplace_inversion(const std::vector<double>& ys, double t, double x,
                                           double tol = 1e-4, int order = 16);

/// Whittaker transform of h̃ built from the CIR-family kernel (drift a - bx, killing μx + ν/x)
/// against λ^{B/(σ√A)} times the Tricomi symmetry solution at ε = 1 - √A/(λσ).
VerificationReport check_whittaker_identity(const Params& cir_params,
                                            const std::vector<double>& lambdas, double t,
                                            double x, double tol = 1e-4);

/// Branch-wise form of the same identity: each Kummer branch of Ψ propagates through the
/// kernel with the matching Bessel index (I_ν or I_{-ν}). Needs 0 < ν < 1 for the second.
VerificationReport check_whittaker_branches(const Params& cir_params,
                                            const std::vector<double>& lambdas, double t,
                                            double x, double tol = 1e-8);

/// Whittaker transform with W_{k+1/2,k} against the Laplace transform of φ.
VerificationReport check_whittaker_laplace_reduction(const std::function<double(double)>& phi,
                                                     double k, const std::vector<double>& lambdas,
                                                     double tol = 1e-8);

/// Monte Carlo estimate against a reference value; passes within n_se standard errors.
VerificationReport check_mc(const std::string& identity, const DiffusionSpec& diff,
                            const PotentialSpec& pot, double lambda, double t, double x,
                            double reference, const McSpec& spec, double n_se = 3.0);

// ---------------------------------------------------------------------------------------------
// Suites

struct SuiteOptions {
    std::string entry;  // restrict to one catalog entry; empty runs all
    std::size_t mc_paths = 100000;
    int mc_steps = 2000;
    std::uint64_t seed = 7;
    double tolerance_scale = 1.0;  // multiplies every default tolerance
};

/// Suites: riccati, transform, normalization, closed_form, pde, limits, mc, chapman, whittaker,
/// altrep, inversion, hartman_watson, all. Reports are sorted by identity name.
std::vector<std::string> suite_names();
std::vector<VerificationReport> run_suite(const std::string& suite, const SuiteOptions& options);

} // namespace fksym
