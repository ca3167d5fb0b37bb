#pragma once

#include <functional>

namespace fksym {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 15;  // bisection depth per panel
    int max_panels = 200;
    double scale = 1.0;         // where the integrand's bulk lives; the first panel is [0, scale/16]
    // Declared integrable singularity f ~ y^{-singular_power} at 0 (0 <= power < 1).
    double singular_power = 0.0;
    // Geometric tail estimate: stop once successive panel ratios fall below this and the
    // extrapolated tail is under tolerance.
    double tail_ratio = 0.7;
};

/// ∫₀^∞ f(y) dy over doubling panels. Throws ConvergenceError if the tail does not decay
/// or the result is not finite.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {});

/// ∫_a^b f(y) dy, adaptive Gauss–Kronrod; a declared singularity is removed by y = w^q when a = 0.
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

} // namespace fksym
