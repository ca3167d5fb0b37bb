#include "fksym/symmetry.hpp"

#include "fksym/errors.hpp"
#include "fksym/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace fksym {

namespace {

constexpr double kFitLo = 1e-2;
constexpr double kFitHi = 1e2;
constexpr int kFitPoints = 40;
constexpr double kStationaryTol = 1e-8;

void require_positive_x(double x, const char* where) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(where) + ": requires x > 0");
    }
}

RiccatiParams classify(const DiffusionSpec& diff, const PotentialSpec& pot, const char* where) {
    auto fit = fit_riccati(diff, pot, log_grid(kFitLo, kFitHi, kFitPoints));
    if (!fit) {
        throw CapabilityError(std::string(where) + ": (f, g) is in no Riccati family");
    }
    return *fit;
}

// One branch of v'' = R v / (2σ²x²), lifted to u = e^{-F/2σ} v and returned as ln|u|, sign.
struct Branch {
    std::function<double(double)> log_abs;
    std::function<double(double)> sign;
    std::string description;

    double operator()(double x) const { return sign(x) * std::exp(log_abs(x)); }
};

// match_power_limit rescales I/K so that A → 0 recovers x^{r±}; needed only when the
// zero-potential counterpart has A = 0.
Branch make_branch(const DiffusionSpec& diff, const RiccatiParams& p, bool plus,
                   bool match_power_limit = false) {
    const double sigma = diff.sigma;
    const double gamma = diff.gamma;
    auto F = diff.drift_antiderivative;
    auto positive = [](double) { return 1.0; };
    std::ostringstream desc;
    if (p.family == RiccatiFamily::laplace) {
        const double disc = 1.0 + 2.0 * p.B / (sigma * sigma);
        if (disc < 0.0) {
            throw CapabilityError("stationary_solution: 1 + 2B/σ² < 0 gives oscillatory solutions");
        }
        const double root = std::sqrt(disc);
        if (std::fabs(p.A) <= 1e-12) {
            const double r = 0.5 + (plus ? 0.5 : -0.5) * root;
            desc << "x^" << r << " e^{-F/2σ}";
            return {[=](double x) { return r * std::log(x) - F(x) / (2 * sigma); }, positive,
                    desc.str()};
        }
        if (p.A < 0.0) {
            throw CapabilityError("stationary_solution: A < 0 gives oscillatory solutions");
        }
        const double m = 2.0 - gamma;
        const double pw = 0.5 * m;
        const double c = std::sqrt(p.A / (2 * sigma * sigma)) / pw;
        const double q = root / m;
        double norm = 0.0;
        if (match_power_limit && plus) {
            norm = specfun::gamma_ln(q + 1.0) + q * std::log(2.0 / c);
        } else if (match_power_limit && q > 0.0) {
            norm = std::log(2.0) + q * std::log(0.5 * c) - specfun::gamma_ln(q);
        }
        desc << "√x " << (plus ? "I_" : "K_") << q << "(" << c << " x^" << pw << ") e^{-F/2σ}";
        return {[=](double x) {
                    const double z = c * std::pow(x, pw);
                    const double lz = plus ? specfun::log_bessel_i(q, z) : specfun::log_bessel_k(q, z);
                    return 0.5 * std::log(x) + lz + norm - F(x) / (2 * sigma);
                },
                positive, desc.str()};
    }
    if (p.family == RiccatiFamily::quadratic) {
        if (gamma != 1.0) {
            throw CapabilityError("stationary_solution: quadratic family solved for γ = 1 only");
        }
        if (!(p.A > 0.0)) {
            throw CapabilityError("stationary_solution: quadratic family needs A > 0");
        }
        const double disc = 1.0 + 2.0 * p.C / (sigma * sigma);
        if (disc < 0.0) {
            throw CapabilityError("stationary_solution: 1 + 2C/σ² < 0 gives complex β");
        }
        const double sa = std::sqrt(p.A);
        const double beta = 1.0 + std::sqrt(disc);
        const double alpha = p.B / (2 * sigma * sa) + 0.5 * beta;
        auto special = [=](double x) {
            const double z = sa * x / sigma;
            return plus ? specfun::hypergeom_1f1(alpha, beta, z) : specfun::tricomi_u(alpha, beta, z);
        };
        desc << "x^{β/2} e^{-(F+√A x)/2σ} " << (plus ? "1F1" : "U") << "(" << alpha << ", " << beta
             << ", √A x/σ)";
        return {[=](double x) {
                    return 0.5 * beta * std::log(x) - (F(x) + sa * x) / (2 * sigma) +
                           std::log(std::fabs(special(x)));
                },
                [=](double x) { return special(x) < 0.0 ? -1.0 : 1.0; }, desc.str()};
    }
    throw CapabilityError("stationary_solution: no closed-form stationary solution for the " +
                          to_string(p.family) + " family");
}

bool is_constant(const Branch& b, const std::vector<double>& xs, double& value) {
    double lo = b(xs.front()), hi = lo;
    for (double x : xs) {
        const double v = b(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    value = 0.5 * (lo + hi);
    return value != 0.0 && hi - lo <= 1e-9 * std::fabs(value);
}

double fd_step(double x) { return 1e-3 * x; }

} // namespace

double stationary_residual(const DiffusionSpec& diff, const PotentialSpec& pot,
                           const std::function<double(double)>& u, const std::vector<double>& xs) {
    double worst = 0.0;
    for (double x : xs) {
        require_positive_x(x, "stationary_residual");
        const double d = fd_step(x);
        const double up2 = u(x + 2 * d), up1 = u(x + d), u0 = u(x), um1 = u(x - d), um2 = u(x - 2 * d);
        const double du = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * d);
        const double d2u = (-up2 + 16 * up1 - 30 * u0 + 16 * um1 - um2) / (12 * d * d);
        const double diffusion = diff.sigma * std::pow(x, diff.gamma) * d2u;
        const double drift = diff.f(x) * du;
        const double kill = pot(x) * u0;
        const double scale = std::fabs(diffusion) + std::fabs(drift) + std::fabs(kill) +
                             diff.sigma * std::pow(x, diff.gamma - 2.0) * std::fabs(u0);
        if (!(scale > 0.0)) {
            continue;
        }
        worst = std::max(worst, std::fabs(diffusion + drift - kill) / scale);
    }
    return worst;
}

StationarySolution stationary_solution(const DiffusionSpec& diff, const PotentialSpec& pot,
                                       StationaryBranch branch) {
    if (diff.gamma == 2.0) {
        throw CapabilityError("stationary_solution: γ = 2 needs a user-supplied u₀");
    }
    const RiccatiParams params = classify(diff, pot, "stationary_solution");

    const std::vector<double> probe{0.3, 0.8, 1.7, 3.1, 5.0};
    StationarySolution out;
    out.params = params;

    // Zero-potential counterparts decide the branch and the normalisation.
    std::optional<Branch> z_plus, z_minus;
    bool power_limit = false;
    try {
        const RiccatiParams zp = classify(diff, PotentialSpec::zero(), "stationary_solution");
        power_limit = zp.family == RiccatiFamily::laplace && std::fabs(zp.A) <= 1e-12;
        z_plus = make_branch(diff, zp, true);
        z_minus = make_branch(diff, zp, false);
    } catch (const CapabilityError&) {
    }
    const Branch bp_plus = make_branch(diff, params, true, power_limit);
    auto minus_branch = [&] { return make_branch(diff, params, false, power_limit); };

    auto finish = [&](std::function<double(double)> fn, std::string description) {
        out.eval = std::move(fn);
        out.description = std::move(description);
        const double res = stationary_residual(diff, pot, out.eval);
        if (!(res <= kStationaryTol)) {
            throw ConstructionError("stationary_solution: ODE residual above tolerance", res);
        }
        return out;
    };

    if (branch != StationaryBranch::automatic) {
        const bool plus = branch == StationaryBranch::plus;
        const Branch b = plus ? bp_plus : minus_branch();
        const std::optional<Branch>& z = plus ? z_plus : z_minus;
        double c = 1.0;
        if (z) {
            double value = 0.0;
            if (is_constant(*z, probe, value)) {
                c = value;
                out.limit_at_mu_zero = MuZeroLimit::constant_one;
            } else {
                out.limit_at_mu_zero = MuZeroLimit::nonconstant;
            }
        }
        return finish([b, c](double x) { return b(x) / c; }, b.description);
    }

    if (!z_plus) {
        out.limit_at_mu_zero = MuZeroLimit::unknown;
        return finish([bp_plus](double x) { return bp_plus(x); }, bp_plus.description);
    }
    double value = 0.0;
    if (is_constant(*z_plus, probe, value)) {
        out.limit_at_mu_zero = MuZeroLimit::constant_one;
        return finish([bp_plus, value](double x) { return bp_plus(x) / value; }, bp_plus.description);
    }
    if (is_constant(*z_minus, probe, value)) {
        const Branch bm = minus_branch();
        out.limit_at_mu_zero = MuZeroLimit::constant_one;
        return finish([bm, value](double x) { return bm(x) / value; }, bm.description);
    }
    // Look for c₊u₊ + c₋u₋ = 1 at zero potential.
    Eigen::MatrixXd M(probe.size(), 2);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(probe.size()));
    for (std::size_t i = 0; i < probe.size(); ++i) {
        M(static_cast<Eigen::Index>(i), 0) = (*z_plus)(probe[i]);
        M(static_cast<Eigen::Index>(i), 1) = (*z_minus)(probe[i]);
    }
    const Eigen::Vector2d coef = M.colPivHouseholderQr().solve(ones);
    if ((M * coef - ones).cwiseAbs().maxCoeff() <= 1e-9) {
        const Branch bm = minus_branch();
        const double cp = coef(0), cm = coef(1);
        out.limit_at_mu_zero = MuZeroLimit::constant_one;
        std::ostringstream desc;
        desc << cp << "·[" << bp_plus.description << "] + " << cm << "·[" << bm.description << "]";
        return finish([bp_plus, bm, cp, cm](double x) { return cp * bp_plus(x) + cm * bm(x); },
                      desc.str());
    }
    out.limit_at_mu_zero = MuZeroLimit::nonconstant;
    return finish([bp_plus](double x) { return bp_plus(x); }, bp_plus.description);
}

// ---------------------------------------------------------------------------------------------

SymmetrySolution symmetry_thm31(const DiffusionSpec& diff, const PotentialSpec&,
                                const StationarySolution& u0, double A) {
    const double gamma = diff.gamma;
    if (gamma == 2.0) {
        throw ValidityError("symmetry_thm31: γ = 2 is handled by symmetry_thm34");
    }
    const double sigma = diff.sigma;
    const double m = 2.0 - gamma;
    const double a31 = A / (2 * sigma);
    auto F = diff.drift_antiderivative;
    auto u = u0.eval;
    SymmetrySolution s;
    s.family = SymmetryFamily::thm31;
    s.params = {RiccatiFamily::laplace, A, 0.0, 0.0};
    s.stationary = u0.description;
    s.eval = [=](double lambda, double x, double t) {
        require_positive_x(x, "symmetry_thm31");
        const double eps = sigma * m * m * lambda / 4.0;
        const double s1 = 1.0 + 4.0 * eps * t;
        if (!(s1 > 0.0)) {
            throw DomainError("symmetry_thm31: requires 1 + 4εt > 0");
        }
        const double X = x * std::pow(s1, -2.0 / m);
        const double log_pref = -(1.0 - gamma) / m * std::log(s1) -
                                lambda * (std::pow(x, m) + a31 * sigma * m * m * t * t) / s1 +
                                (F(X) - F(x)) / (2 * sigma);
        return std::exp(log_pref) * u(X);
    };
    return s;
}

SymmetrySolution symmetry_thm34(const DiffusionSpec& diff, const PotentialSpec&,
                                const StationarySolution& u0, double A) {
    if (diff.gamma != 2.0) {
        throw ValidityError("symmetry_thm34: requires γ = 2");
    }
    const double sigma = diff.sigma;
    auto F = diff.drift_antiderivative;
    auto u = u0.eval;
    SymmetrySolution s;
    s.family = SymmetryFamily::thm34;
    s.params = {RiccatiFamily::log_constant, A, 0.0, 0.0};
    s.stationary = u0.description;
    s.eval = [=](double eps, double x, double t) {
        require_positive_x(x, "symmetry_thm34");
        const double s1 = 1.0 + 4.0 * eps * t;
        if (!(s1 > 0.0)) {
            throw DomainError("symmetry_thm34: requires 1 + 4εt > 0");
        }
        const double xi = std::log(x);
        const double X = std::exp(xi / s1);
        const double log_pref =
            -0.5 * std::log(s1) -
            eps * (xi * xi - 2 * sigma * t * xi + (4 * A + sigma) * sigma * t * t) / (sigma * s1) +
            (F(X) - F(x)) / (2 * sigma);
        return std::exp(log_pref) * u(X);
    };
    return s;
}

namespace {

void require_quadratic(const RiccatiParams& p, double gamma, const char* where) {
    if (p.family != RiccatiFamily::quadratic || !(p.A > 0.0)) {
        throw CapabilityError(std::string(where) + ": requires the quadratic family with A > 0");
    }
    if (gamma != 1.0) {
        throw CapabilityError(std::string(where) + ": requires γ = 1");
    }
}

// ln(E - ε) with E = e^{√A t}, accurate as t → 0 and ε → 1.
double log_gap(double sa, double t, double eps) {
    const double gap = std::expm1(sa * t) + (1.0 - eps);
    if (!(gap > 0.0)) {
        throw DomainError("symmetry: requires e^{√A t} > ε");
    }
    return std::log(gap);
}

} // namespace

SymmetrySolution symmetry_eq51(const DiffusionSpec& diff, const PotentialSpec&,
                               const StationarySolution& u0, const RiccatiParams& params) {
    require_quadratic(params, diff.gamma, "symmetry_eq51");
    const double sigma = diff.sigma;
    const double sa = std::sqrt(params.A);
    const double B = params.B;
    auto F = diff.drift_antiderivative;
    auto u = u0.eval;
    SymmetrySolution s;
    s.family = SymmetryFamily::eq51;
    s.params = params;
    s.stationary = u0.description;
    s.eval = [=](double eps, double x, double t) {
        require_positive_x(x, "symmetry_eq51");
        const double lg = log_gap(sa, t, eps);
        const double gap = std::exp(lg);
        const double E = std::exp(sa * t);
        const double X = x * E / gap;
        const double log_pref = -B * t / (2 * sigma) - sa * x * eps / (2 * sigma * gap) +
                                (F(X) - F(x)) / (2 * sigma) + B / (2 * sigma * sa) * lg;
        return std::exp(log_pref) * u(X);
    };
    bool invariant = true;
    for (double x : {0.5, 1.0, 2.0}) {
        for (double eps : {-0.4, 0.3}) {
            const double ref = u(x);
            const double got = s.eval(eps, x, 0.7);
            if (!(std::fabs(got - ref) <= 1e-10 * std::max(std::fabs(ref), 1e-300))) {
                invariant = false;
            }
        }
    }
    s.invariant = invariant;
    return s;
}

SymmetrySolution symmetry_eq55(const RiccatiParams& params, double sigma,
                               const std::function<double(double)>& F) {
    require_quadratic(params, 1.0, "symmetry_eq55");
    const double disc = 1.0 + 2.0 * params.C / (sigma * sigma);
    if (disc < 0.0) {
        throw ValidityError("symmetry_eq55: 1 + 2C/σ² < 0 gives complex β");
    }
    const double sa = std::sqrt(params.A);
    const double B = params.B;
    const double beta = 1.0 + std::sqrt(disc);
    const double alpha = B / (2 * sigma * sa) + 0.5 * beta;
    SymmetrySolution s;
    s.family = SymmetryFamily::eq55;
    s.params = params;
    {
        std::ostringstream desc;
        desc << "x^{β/2} e^{-(F+√A x)/2σ} U(" << alpha << ", " << beta << ", √A x/σ)";
        s.stationary = desc.str();
    }
    s.eval = [=](double eps, double x, double t) {
        require_positive_x(x, "symmetry_eq55");
        const double lg = log_gap(sa, t, eps);
        const double gap = std::exp(lg);
        const double E = std::exp(sa * t);
        const double z = sa * x * E / (sigma * gap);
        const double U = specfun::tricomi_u(alpha, beta, z);
        const double log_pref = -B * t / (2 * sigma) + (B / (2 * sigma * sa) - 0.5 * beta) * lg +
                                0.5 * beta * sa * t + 0.5 * beta * std::log(x) - F(x) / (2 * sigma) -
                                sa * x * (E + eps) / (2 * sigma * gap);
        return std::exp(log_pref) * U;
    };
    return s;
}

std::function<double(double, double)> atom_weight(const DiffusionSpec& diff,
                                                  const PotentialSpec& pot) {
    const RiccatiParams params = classify(diff, pot, "atom_weight");
    require_quadratic(params, diff.gamma, "atom_weight");
    const double sigma = diff.sigma;
    const double disc = 1.0 + 2.0 * params.C / (sigma * sigma);
    if (!(disc > 0.0)) {
        throw CapabilityError("atom_weight: requires β > 1");
    }
    const double sa = std::sqrt(params.A);
    const double beta = 1.0 + std::sqrt(disc);
    const double alpha = params.B / (2 * sigma * sa) + 0.5 * beta;
    if (alpha <= 0.0 && std::floor(alpha) == alpha) {
        throw CapabilityError("atom_weight: Ψ is a polynomial (α a non-positive integer)");
    }
    // U(α,β,z) ~ Γ(β-1)/Γ(α) z^{1-β} as z → 0.
    const double log_norm = (beta - 1.0) * std::log(sa / sigma) - specfun::gamma_ln(beta - 1.0);
    const double sign_norm = std::tgamma(alpha) < 0.0 ? -1.0 : 1.0;
    const double norm = sign_norm * std::exp(log_norm + std::lgamma(alpha));
    const SymmetrySolution s = symmetry_eq55(params, sigma, diff.drift_antiderivative);
    return [s, norm](double x, double t) {
        if (!(t > 0.0)) {
            throw DomainError("atom_weight: requires t > 0");
        }
        return norm * s.eval(1.0, x, t);
    };
}

// ---------------------------------------------------------------------------------------------

double pde_residual(const std::function<double(double, double)>& u, const DiffusionSpec& diff,
                    const PotentialSpec& pot, double x, double t, double h) {
    if (!(h > 0.0)) {
        throw DomainError("pde_residual: requires h > 0");
    }
    if (!(x - 2 * h > 0.0)) {
        throw DomainError("pde_residual: requires x - 2h > 0");
    }
    if (!(t - h > 0.0)) {
        throw DomainError("pde_residual: requires t - h > 0");
    }
    const double u0 = u(x, t);
    const double ut = (u(x, t + h) - u(x, t - h)) / (2 * h);
    const double up = u(x + h, t), um = u(x - h, t);
    const double ux = (up - um) / (2 * h);
    const double uxx = (up - 2 * u0 + um) / (h * h);
    return ut - diff.sigma * std::pow(x, diff.gamma) * uxx - diff.f(x) * ux + pot(x) * u0;
}

bool ResidualConvergence::passes(double tol) const {
    if (exact) {
        return true;
    }
    return std::fabs(order[0] - 2.0) <= tol && std::fabs(order[1] - 2.0) <= tol;
}

ResidualConvergence pde_residual_convergence(const std::function<double(double, double)>& u,
                                             const DiffusionSpec& diff, const PotentialSpec& pot,
                                             double x, double t) {
    ResidualConvergence rc{};
    const double hs[3] = {1e-2, 5e-3, 2.5e-3};
    double scale = std::fabs(u(x, t));
    for (int i = 0; i < 3; ++i) {
        rc.r[i] = std::fabs(pde_residual(u, diff, pot, x, t, hs[i]));
    }
    rc.exact = std::max({rc.r[0], rc.r[1], rc.r[2]}) <= 1e-9 * std::max(scale, 1e-300);
    for (int i = 0; i < 2; ++i) {
        rc.order[i] = std::log2(rc.r[i] / rc.r[i + 1]);
    }
    return rc;
}

} // namespace fksym
