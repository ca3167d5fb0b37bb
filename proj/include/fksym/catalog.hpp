/**
 * @file catalog.hpp
 * @brief Worked diffusions with closed-form fundamental solutions, transform identities and
 *        Feynman–Kac expectations E_x[exp(-λ X_t^{2-γ} - ∫₀ᵗ g(X_s) ds)].
 *
 * Entries are immutable singletons; all evaluation is pure and thread-safe. Parameters are
 * passed as a name → value map; missing names take the entry's defaults and unknown names are
 * rejected with ValidityError.
 */

#pragma once

#include "fksym/quadrature.hpp"
#include "fksym/riccati.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fksym {

using Params = std::map<std::string, double>;

struct ParamSpec {
    std::string name;
    double default_value;
    std::string description;
};

/// Boundary atom at y = location. order 0 is δ, order 1 is δ′ (signed, never counted as mass).
struct AtomSpec {
    double location = 0.0;
    int order = 0;
    double weight = 0.0;
};

/// sign · exp(log_abs); sign is 0 for an exact zero.
struct LogValue {
    double log_abs = 0.0;
    double sign = 1.0;
    double value() const;
};

struct Kernel {
    std::function<double(double)> continuous;  // y ↦ p(t, x, y)
    std::vector<AtomSpec> atoms;
};

/// u₀ and u₀′ at 0⁺, used for atom contributions to transform identities.
struct OriginValue {
    double value = 1.0;
    double derivative = 0.0;
};

class CatalogEntry {
public:
    virtual ~CatalogEntry() = default;

    virtual std::string name() const = 0;
    virtual std::string description() const = 0;
    virtual std::vector<ParamSpec> parameters() const = 0;
    /// Human-readable constraints, as enforced by validate().
    virtual std::vector<std::string> validity() const = 0;
    /// Short formula descriptions keyed by "density", "transform", "expectation", ...
    virtual std::map<std::string, std::string> formulas() const = 0;

    /// Fill defaults, reject unknown names, then validate().
    Params resolve(const Params& given) const;
    virtual void validate(const Params& p) const = 0;

    virtual DiffusionSpec diffusion(const Params& p) const = 0;
    virtual PotentialSpec potential(const Params& p) const = 0;
    virtual RiccatiParams riccati(const Params& p) const = 0;

    /// Continuous part of the fundamental solution at y > 0.
    virtual LogValue log_density(const Params& p, double t, double x, double y) const = 0;
    virtual std::vector<AtomSpec> atoms(const Params& p, double t, double x) const;
    /// True when the kernel is a probability density (no killing, mass one).
    virtual bool is_transition_density(const Params& p) const;

    // Transform identity ∫ e^{-λ y^{2-γ}} u₀(y) p(t,x,y) dy = rhs(λ, t, x).
    virtual bool has_transform(const Params& p) const;
    virtual double stationary(const Params& p, double y) const;
    virtual OriginValue stationary_at_origin(const Params& p) const;
    virtual double transform_rhs(const Params& p, double lambda, double t, double x) const;

    virtual std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                                     double x) const;

    /// Hints for the quadrature fallback.
    virtual double quadrature_scale(const Params& p, double t, double x) const;
    virtual double density_singular_power(const Params& p) const;
    /// Power of the u₀·density singularity at 0; defaults to density_singular_power.
    virtual double transform_singular_power(const Params& p) const;

    double gamma() const { return observable_power_ == 1 ? 1.0 : 0.0; }
    /// Exponent m = 2 - γ of the observable e^{-λ X_t^m}.
    int observable_power() const { return observable_power_; }

protected:
    explicit CatalogEntry(int observable_power) : observable_power_(observable_power) {}

private:
    int observable_power_;
};

std::vector<std::string> entry_names();
/// Throws ValidityError naming the available entries when `name` is unknown.
const CatalogEntry& get_entry(const std::string& name);

// The free functions resolve and validate params, then check t > 0, x > 0, y >= 0.

double density(const CatalogEntry& e, const Params& p, double t, double x, double y);
LogValue log_density(const CatalogEntry& e, const Params& p, double t, double x, double y);
Kernel kernel(const CatalogEntry& e, const Params& p, double t, double x);

double transform_rhs(const CatalogEntry& e, const Params& p, double lambda, double t, double x);
/// Quadrature of the transform left-hand side including atom terms: order-0 atoms contribute
/// w·u₀(0⁺), order-1 atoms contribute -w·d/dy[e^{-λy^m}u₀(y)] at 0.
double transform_lhs(const CatalogEntry& e, const Params& p, double lambda, double t, double x,
                     const QuadratureSpec& spec = {});

/// ∫ continuous dy + Σ order-0 weights.
double total_mass(const CatalogEntry& e, const Params& p, double t, double x,
                  const QuadratureSpec& spec = {});

/// Closed form when available, otherwise quadrature of e^{-λy^m}·(density + order-0 atoms).
double expectation(const CatalogEntry& e, const Params& p, double lambda, double t, double x,
                   const QuadratureSpec& spec = {});
double expectation_quadrature(const CatalogEntry& e, const Params& p, double lambda, double t,
                              double x, const QuadratureSpec& spec = {});

/// (μ, E[e^{-λX^m - ∫g}]) rows for an increasing positive μ grid. The entry must have a "mu"
/// parameter.
std::vector<std::pair<double, double>> joint_laplace_in_mu(const CatalogEntry& e, const Params& p,
                                                           double lambda, double t, double x,
                                                           const std::vector<double>& mu_grid);

/// JSON manifest: {"schema": "fksym-catalog/1", "entries": [{name, description, gamma,
/// parameters: [{name, default, description}], validity: [...], formulas: {...}}]}.
std::string manifest_json();

} // namespace fksym
