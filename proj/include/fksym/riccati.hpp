/**
 * @file riccati.hpp
 * @brief Drift/potential pairs and the Riccati equations that give them nontrivial symmetries.
 *
 * For h(x) = x^{1-γ} f(x) the pair (f, g) is classified by
 *   R(x) = σ x h' - σ h + h²/2 + 2σ x^{2-γ} g(x),
 * which must equal one of the family right-hand sides below. For γ = 2 the same
 * form is used in ξ = ln x with H(ξ) = ξ(e^{-ξ} f(e^ξ) - σ).
 */

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fksym {

/// Generator σ x^γ ∂² + f ∂ on (0, ∞). F satisfies F'(x) = f(x)/x^γ.
struct DiffusionSpec {
    double gamma = 1.0;
    double sigma = 1.0;
    std::function<double(double)> drift;
    std::function<double(double)> drift_antiderivative;
    std::function<double(double)> drift_derivative;  // optional f'
    std::string label;

    double f(double x) const { return drift(x); }
    double F(double x) const { return drift_antiderivative(x); }

    /// Throws ValidityError if σ <= 0 or F' differs from f/x^γ by more than 1e-8 (relative).
    void validate(const std::vector<double>& sample_x = {0.3, 0.7, 1.0, 2.5, 6.0}) const;
};

/// Killing rate g(x).
struct PotentialSpec {
    enum class Form { power, inverse_plus_linear, power_sum, tabulated };

    struct Term {
        double coeff;
        double exponent;
    };

    Form form = Form::power_sum;
    double mu = 0.0;        // power: μ x^n; inverse_plus_linear: coefficient of x
    double nu_coeff = 0.0;  // inverse_plus_linear: coefficient of 1/x
    double n = 0.0;         // power: exponent
    std::vector<Term> terms;                    // power_sum: Σ c_i x^{e_i}
    std::vector<double> table_x, table_g;       // tabulated (log-linear interpolation in x)

    static PotentialSpec zero();
    static PotentialSpec power(double mu, double n);
    static PotentialSpec inverse_plus_linear(double nu, double mu);
    static PotentialSpec sum(std::vector<Term> terms);
    static PotentialSpec tabulated(std::vector<double> xs, std::vector<double> gs);

    double operator()(double x) const;
    /// g'(x); throws CapabilityError for tabulated potentials.
    double derivative(double x) const;
    bool has_derivative() const { return form != Form::tabulated; }
    /// True when g is unbounded at the origin (a negative power with nonzero coefficient).
    bool singular_at_origin() const;
    bool is_zero() const;
};

enum class RiccatiFamily {
    laplace,       // R = A x^{2-γ} + B
    quadratic,     // R = A/2 x^{2(2-γ)} + B x^{2-γ} + C
    cubic,         // R = A/2 x^{2(2-γ)} + 2B/3 x^{3(2-γ)/2} + C x^{2-γ} - 3σ²/(8(2-γ)); residual only
    log_constant,  // γ = 2: R(ξ) = (2σA + σ²/2) ξ² + C
    log_linear,    // γ = 2: R(ξ) = (4σA/3) ξ³ + (2σB + σ²/2) ξ² + C
};

std::string to_string(RiccatiFamily family);

struct RiccatiParams {
    RiccatiFamily family = RiccatiFamily::laplace;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

/// Right-hand side of the family at x (γ ≠ 2) or at ξ = ln x (γ = 2).
double riccati_rhs(const RiccatiParams& params, double sigma, double gamma, double x);

/// Left-hand side R(x) of the Riccati form (in ξ = ln x when γ = 2).
double riccati_lhs(const DiffusionSpec& diff, const PotentialSpec& pot, double x);

enum class ResidualForm {
    h_form,         // R(x) - RHS
    operator_form,  // Lf - (A' x^{2-γ} + B'), the differentiated form; needs g'
};

double riccati_residual(const DiffusionSpec& diff, const PotentialSpec& pot,
                        const RiccatiParams& params, double x,
                        ResidualForm form = ResidualForm::h_form);

/// Least-squares classification. Families are tried with the fewest free parameters first.
std::optional<RiccatiParams> fit_riccati(const DiffusionSpec& diff, const PotentialSpec& pot,
                                         const std::vector<double>& grid);

/// Log-spaced grid of n points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

/// Drift f = 2σ x y'/y with y = √x (c1 I_α(√(2Ax)/σ) + c2 K_α(√(2Ax)/σ)), α = √(σ²+2B)/σ.
/// For A = 0, y = c1 x^{(1+α)/2} + c2 x^{(1-α)/2}. The result satisfies
/// σ x f' - σ f + f²/2 = A x + B, and F = 2σ ln y exactly (no additive constant).
DiffusionSpec build_drift(double A, double B, double sigma, double c1, double c2);

} // namespace fksym
