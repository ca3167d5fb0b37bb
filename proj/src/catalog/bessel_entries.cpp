// Squared Bessel, Bessel and radial Ornstein–Uhlenbeck entries.

#include "detail.hpp"

#include "fksym/specfun.hpp"

#include <numbers>

namespace fksym::catalog_detail {

namespace {

// dX = n dt + 2√X dW, killed at rate (b²/2)X + μ/X.
class Besq final : public CatalogEntry {
public:
    Besq() : CatalogEntry(1) {}

    std::string name() const override { return "besq"; }
    std::string description() const override {
        return "squared Bessel process of dimension n, killed at rate (b^2/2)x + mu/x";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"n", 3.0, "dimension"},
                {"b", 0.0, "linear killing b^2 x/2"},
                {"mu", 0.0, "inverse killing mu/x"}};
    }
    std::vector<std::string> validity() const override { return {"n >= 2", "b >= 0", "mu >= 0"}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "b=0: (1/2t)(y/x)^{(n-2)/4} e^{-(x+y)/2t} I_{a/2}(sqrt(xy)/t); b>0: "
                 "b/(2 sinh bt) e^{-b(x+y)/(2 tanh bt)} (y/x)^{(n-2)/4} I_{a/2}(b sqrt(xy)/sinh bt), "
                 "a = sqrt((n-2)^2 + 8 mu)"},
                {"transform", "b=0, u0 = y^d: x^d (1+2 lambda t)^{-(2d+n/2)} exp(-lambda x/(1+2 lambda t))"},
                {"expectation",
                 "b=0: 1F1 form in x/(2t+4t^2 lambda); b>0, mu=0: exp(-(xb/2)(1+2 lambda coth(bt)/b)/"
                 "(coth(bt)+2 lambda/b)) / (cosh bt + (2 lambda/b) sinh bt)^{n/2}; b>0, mu>0: 1F1 form"}};
    }

    void validate(const Params& p) const override {
        require(par(p, "n") >= 2.0, name(), "n >= 2");
        require(par(p, "b") >= 0.0, name(), "b >= 0");
        require(par(p, "mu") >= 0.0, name(), "mu >= 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double n = par(p, "n");
        DiffusionSpec d;
        d.gamma = 1.0;
        d.sigma = 2.0;
        d.drift = [n](double) { return n; };
        d.drift_derivative = [](double) { return 0.0; };
        d.drift_antiderivative = [n](double x) { return n * std::log(x); };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        const double b = par(p, "b");
        return PotentialSpec::inverse_plus_linear(par(p, "mu"), 0.5 * b * b);
    }
    RiccatiParams riccati(const Params& p) const override {
        const double n = par(p, "n"), b = par(p, "b"), mu = par(p, "mu");
        const double c = 0.5 * n * n - 2.0 * n + 4.0 * mu;
        if (b == 0.0) return {RiccatiFamily::laplace, 0.0, c, 0.0};
        return {RiccatiFamily::quadratic, 4.0 * b * b, 0.0, c};
    }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double n = par(p, "n"), b = par(p, "b");
        const auto r = riccati(p);
        const double Fx = n * std::log(x), Fy = n * std::log(y);
        if (b == 0.0) return {log_laplace_kernel(2.0, 0.0, r.B, Fx, Fy, t, x, y), 1.0};
        return {log_quadratic_kernel(2.0, r.A, r.B, r.C, Fx, Fy, t, x, y), 1.0};
    }

    bool has_transform(const Params& p) const override { return par(p, "b") == 0.0; }
    double stationary(const Params& p, double y) const override { return std::pow(y, d_plus(p)); }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double n = par(p, "n"), d = d_plus(p);
        const double s = 1.0 + 2.0 * lambda * t;
        return std::exp(d * std::log(x) - (2.0 * d + 0.5 * n) * std::log(s) - lambda * x / s);
    }

    std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                             double x) const override {
        const double n = par(p, "n"), b = par(p, "b"), mu = par(p, "mu");
        if (b == 0.0) {
            const double d = d_plus(p);
            const double al = d + 0.5 * n, be = 2.0 * d + 0.5 * n;
            const double s = 1.0 + 2.0 * lambda * t;
            const double z = x / (2.0 * t + 4.0 * t * t * lambda);
            return std::exp(-x / (2.0 * t) + d * std::log(x / (2.0 * t)) + specfun::gamma_ln(al) -
                            specfun::gamma_ln(be) - al * std::log(s)) *
                   specfun::hypergeom_1f1(al, be, z);
        }
        const double bt = b * t;
        const double ch = std::cosh(bt), sh = std::sinh(bt), cth = ch / sh;
        const double l2 = 2.0 * lambda / b;
        if (mu == 0.0) {
            return std::exp(-0.5 * x * b * (1.0 + l2 * cth) / (cth + l2) -
                            0.5 * n * std::log(ch + l2 * sh));
        }
        const double a = std::sqrt((n - 2.0) * (n - 2.0) + 8.0 * mu);
        const double delta = 0.25 * (2.0 + a + n), gam = 0.25 * (2.0 + a - n);
        const double al = 0.25 * (a + n + 2.0), be = 0.5 * (a + 2.0);
        const double z = b * b * x / sh / (2.0 * b * ch + 4.0 * lambda * sh);
        const double log_e = -b * x / (2.0 * std::tanh(bt)) + specfun::gamma_ln(al) -
                             specfun::gamma_ln(be) + gam * std::log(b) +
                             gam * (std::log(x) + bt) - gam * std::log(std::expm1(2.0 * bt)) -
                             delta * std::log(ch + l2 * sh);
        return std::exp(log_e) * specfun::hypergeom_1f1(al, be, z);
    }

private:
    static double d_plus(const Params& p) {
        const double n = par(p, "n"), mu = par(p, "mu");
        return 0.25 * (2.0 - n + std::sqrt((n - 2.0) * (n - 2.0) + 8.0 * mu));
    }
};

// BESQ(3) cosh solution: a fundamental solution that is not a transition density.
class BesqCosh final : public CatalogEntry {
public:
    BesqCosh() : CatalogEntry(1) {}

    std::string name() const override { return "besq_cosh"; }
    std::string description() const override {
        return "cosh fundamental solution of u_t = 2x u_xx + 3u_x (mass defect, not a density)";
    }
    std::vector<ParamSpec> parameters() const override { return {}; }
    std::vector<std::string> validity() const override { return {}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"density", "(2 pi t x)^{-1/2} e^{-(x+y)/2t} cosh(sqrt(xy)/t)"},
                {"transform", "u0 = y^{-1/2}: (x(1+2 lambda t))^{-1/2} exp(-lambda x/(1+2 lambda t))"},
                {"mass", "sqrt(2t/(pi x)) e^{-x/2t} + erf(sqrt(x/2t))"}};
    }
    void validate(const Params&) const override {}

    DiffusionSpec diffusion(const Params&) const override {
        DiffusionSpec d;
        d.gamma = 1.0;
        d.sigma = 2.0;
        d.drift = [](double) { return 3.0; };
        d.drift_derivative = [](double) { return 0.0; };
        d.drift_antiderivative = [](double x) { return 3.0 * std::log(x); };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params&) const override { return PotentialSpec::zero(); }
    RiccatiParams riccati(const Params&) const override {
        return {RiccatiFamily::laplace, 0.0, -1.5, 0.0};
    }
    bool is_transition_density(const Params&) const override { return false; }

    LogValue log_density(const Params&, double t, double x, double y) const override {
        // -(x + y)/(2t) + ln cosh z with z = √(xy)/t, and ln cosh z = z - ln 2 + ln(1 + e^{-2z}).
        const double d = std::sqrt(x) - std::sqrt(y);
        return {-0.5 * std::log(2.0 * std::numbers::pi * t * x) - d * d / (2.0 * t) -
                    std::numbers::ln2 + std::log1p(std::exp(-2.0 * std::sqrt(x * y) / t)),
                1.0};
    }

    bool has_transform(const Params&) const override { return true; }
    double stationary(const Params&, double y) const override { return 1.0 / std::sqrt(y); }
    double transform_rhs(const Params&, double lambda, double t, double x) const override {
        const double s = 1.0 + 2.0 * lambda * t;
        return std::exp(-lambda * x / s) / std::sqrt(x * s);
    }
    double density_singular_power(const Params&) const override { return 0.5; }
};

// dX = (a/X) dt + dW, killed at rate μ/(4X²).
class Bessel final : public CatalogEntry {
public:
    Bessel() : CatalogEntry(2) {}

    std::string name() const override { return "bessel"; }
    std::string description() const override {
        return "Bessel process dX = (a/X)dt + dW killed at rate mu/(4x^2)";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"a", 1.0, "drift coefficient a/x"}, {"mu", 0.0, "killing mu/(4x^2)"}};
    }
    std::vector<std::string> validity() const override { return {"a > 1/2", "mu >= 0"}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "(y/t)(y/x)^{a-1/2} exp(-(x^2+y^2)/2t) I_{nu-1}(xy/t), nu = d + a + 1/2, "
                 "d = 1/2 - a + sqrt(mu/2 + (a-1/2)^2)"},
                {"transform", "u0 = y^d: x^d (1+2 lambda t)^{-nu} exp(-lambda x^2/(1+2 lambda t))"},
                {"expectation",
                 "E[e^{-lambda X^2}]: e^{-x^2/2t}(x^2/2t)^{(2nu-2a-1)/4} Gamma(al) "
                 "1F1(al, nu, x^2/(2t+4t^2 lambda))/(Gamma(nu)(1+2t lambda)^al), al = (1+2a+2nu)/4"}};
    }
    void validate(const Params& p) const override {
        require(par(p, "a") > 0.5, name(), "a > 1/2");
        require(par(p, "mu") >= 0.0, name(), "mu >= 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double a = par(p, "a");
        DiffusionSpec d;
        d.gamma = 0.0;
        d.sigma = 0.5;
        d.drift = [a](double x) { return a / x; };
        d.drift_derivative = [a](double x) { return -a / (x * x); };
        d.drift_antiderivative = [a](double x) { return a * std::log(x); };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::power(0.25 * par(p, "mu"), -2.0);
    }
    RiccatiParams riccati(const Params& p) const override {
        const double a = par(p, "a");
        return {RiccatiFamily::laplace, 0.0, 0.5 * (a * a - a) + 0.25 * par(p, "mu"), 0.0};
    }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double a = par(p, "a");
        return {std::log(y / t) + (a - 0.5) * std::log(y / x) - (x - y) * (x - y) / (2.0 * t) +
                    log_i_scaled(nu(p) - 1.0, x * y / t),
                1.0};
    }

    bool has_transform(const Params&) const override { return true; }
    double stationary(const Params& p, double y) const override { return std::pow(y, d(p)); }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double s = 1.0 + 2.0 * lambda * t;
        return std::exp(d(p) * std::log(x) - nu(p) * std::log(s) - lambda * x * x / s);
    }

    std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                             double x) const override {
        const double a = par(p, "a"), v = nu(p);
        const double al = 0.25 * (1.0 + 2.0 * a + 2.0 * v);
        const double w = x * x / (2.0 * t);
        return std::exp(-w + 0.25 * (2.0 * v - 2.0 * a - 1.0) * std::log(w) +
                        specfun::gamma_ln(al) - specfun::gamma_ln(v) -
                        al * std::log(1.0 + 2.0 * t * lambda)) *
               specfun::hypergeom_1f1(al, v, x * x / (2.0 * t + 4.0 * t * t * lambda));
    }

private:
    static double d(const Params& p) {
        const double a = par(p, "a"), mu = par(p, "mu");
        return 0.5 - a + std::sqrt(0.5 * mu + (a - 0.5) * (a - 0.5));
    }
    static double nu(const Params& p) { return d(p) + par(p, "a") + 0.5; }
};

// dX = ((a+1/2)/X + b I_{a+1}(bX)/I_a(bX)) dt + dW, killed at rate μ/X².
class BesselDrift final : public CatalogEntry {
public:
    BesselDrift() : CatalogEntry(2) {}

    std::string name() const override { return "bessel_drift"; }
    std::string description() const override {
        return "Bessel process with drift (a+1/2)/x + b I_{a+1}(bx)/I_a(bx), killed at rate mu/x^2";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"a", 0.5, "Bessel index"}, {"b", 1.0, "drift parameter"}, {"mu", 0.0, "killing mu/x^2"}};
    }
    std::vector<std::string> validity() const override { return {"a > -1", "b >= 0", "mu >= 0"}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "y I_a(by)/(t I_a(bx)) exp(-(x^2+y^2)/2t - b^2 t/2) I_q(xy/t), q = sqrt(a^2+2mu); "
                 "I_a(by)/I_a(bx) -> (y/x)^a at b = 0"},
                {"transform",
                 "u0 = I_q(by)/I_a(by): e^{-lambda(b^2t^2+x^2)/s} I_q(bx/s)/(s I_a(bx)), s = 1+2 lambda t"},
                {"expectation", "quadrature of e^{-lambda y^2} against the density"}};
    }
    void validate(const Params& p) const override {
        require(par(p, "a") > -1.0, name(), "a > -1");
        require(par(p, "b") >= 0.0, name(), "b >= 0");
        require(par(p, "mu") >= 0.0, name(), "mu >= 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b");
        DiffusionSpec d;
        d.gamma = 0.0;
        d.sigma = 0.5;
        if (b == 0.0) {
            d.drift = [a](double x) { return (a + 0.5) / x; };
            d.drift_derivative = [a](double x) { return -(a + 0.5) / (x * x); };
            d.drift_antiderivative = [a](double x) { return (a + 0.5) * std::log(x); };
        } else {
            auto ratio = [a, b](double x) {
                return std::exp(log_i(a + 1.0, b * x) - log_i(a, b * x));
            };
            d.drift = [a, b, ratio](double x) { return (a + 0.5) / x + b * ratio(x); };
            // (I_{a+1}/I_a)' = b(1 - (2a+1)r/(bx) - r²) with r = I_{a+1}/I_a.
            d.drift_derivative = [a, b, ratio](double x) {
                const double r = ratio(x);
                return -(a + 0.5) / (x * x) + b * b * (1.0 - (2.0 * a + 1.0) * r / (b * x) - r * r);
            };
            d.drift_antiderivative = [a, b](double x) { return 0.5 * std::log(x) + log_i(a, b * x); };
        }
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::power(par(p, "mu"), -2.0);
    }
    RiccatiParams riccati(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b");
        return {RiccatiFamily::laplace, 0.5 * b * b, 0.5 * a * a - 0.125 + par(p, "mu"), 0.0};
    }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double a = par(p, "a"), b = par(p, "b");
        const double ratio = b == 0.0 ? a * std::log(y / x) : log_i(a, b * y) - log_i(a, b * x);
        return {std::log(y / t) + ratio - (x - y) * (x - y) / (2.0 * t) - 0.5 * b * b * t +
                    log_i_scaled(q(p), x * y / t),
                1.0};
    }

    bool has_transform(const Params&) const override { return true; }
    double stationary(const Params& p, double y) const override {
        const double a = par(p, "a"), b = par(p, "b");
        if (b == 0.0) return std::pow(y, q(p) - a);
        return std::exp(log_i(q(p), b * y) - log_i(a, b * y));
    }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double a = par(p, "a"), b = par(p, "b");
        const double s = 1.0 + 2.0 * lambda * t;
        if (b == 0.0) {
            return std::exp(q(p) * std::log(x / s) - a * std::log(x) - std::log(s) -
                            lambda * x * x / s);
        }
        return std::exp(-lambda * (b * b * t * t + x * x) / s + log_i(q(p), b * x / s) -
                        std::log(s) - log_i(a, b * x));
    }

private:
    static double q(const Params& p) {
        const double a = par(p, "a");
        return std::sqrt(a * a + 2.0 * par(p, "mu"));
    }
};

// dX = (a/X + bX) dt + √2 dW, killed at rate μX².
class RadialOU final : public CatalogEntry {
public:
    RadialOU() : CatalogEntry(2) {}

    std::string name() const override { return "radial_ou"; }
    std::string description() const override {
        return "radial Ornstein-Uhlenbeck dX = (a/X + bX)dt + sqrt(2)dW killed at rate mu x^2";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"a", 1.0, "drift a/x"}, {"b", 0.5, "drift bx"}, {"mu", 0.0, "killing mu x^2"}};
    }
    std::vector<std::string> validity() const override { return {"a > 1/2", "mu >= 0"}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "y (y/x)^{nu-1} alpha/(2 sinh(alpha t)) exp(-b nu t - alpha(x^2+y^2)/(4 tanh(alpha t)) "
                 "- (b/4)(x^2-y^2)) I_{nu-1}(alpha xy/(2 sinh(alpha t))), alpha = sqrt(b^2+4mu), "
                 "nu = (a+1)/2"},
                {"expectation",
                 "E[e^{-lambda X^2}]: exp(-bx^2/4 + alpha(alpha - c coth(alpha t))x^2/(4(c - alpha "
                 "coth(alpha t))) - b nu t) (cosh(alpha t) - c sinh(alpha t)/alpha)^{-nu}, "
                 "c = b - 4 lambda"}};
    }
    void validate(const Params& p) const override {
        require(par(p, "a") > 0.5, name(), "a > 1/2");
        require(par(p, "mu") >= 0.0, name(), "mu >= 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b");
        DiffusionSpec d;
        d.gamma = 0.0;
        d.sigma = 1.0;
        d.drift = [a, b](double x) { return a / x + b * x; };
        d.drift_derivative = [a, b](double x) { return -a / (x * x) + b; };
        d.drift_antiderivative = [a, b](double x) { return a * std::log(x) + 0.5 * b * x * x; };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::power(par(p, "mu"), 2.0);
    }
    RiccatiParams riccati(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b");
        return {RiccatiFamily::quadratic, b * b + 4.0 * par(p, "mu"), b * (1.0 + a),
                0.5 * a * a - a};
    }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double a = par(p, "a"), b = par(p, "b");
        const double nu = 0.5 * (a + 1.0), al = alpha(p);
        // ln(α/(2 sinh αt)), α/tanh(αt), α/sinh(αt) and their difference α tanh(αt/2).
        double log_pref, coth_term, arg, gap;
        if (al * t < 1e-8) {
            log_pref = -std::log(2.0 * t);
            coth_term = 1.0 / t;
            arg = 1.0 / t;
            gap = 0.5 * al * al * t;
        } else {
            const double ls = log_sinh(al * t);
            log_pref = std::log(al / 2.0) - ls;
            coth_term = al / std::tanh(al * t);
            arg = std::exp(std::log(al) - ls);
            gap = al * std::tanh(0.5 * al * t);
        }
        return {std::log(y) + (nu - 1.0) * std::log(y / x) + log_pref - b * nu * t -
                    0.25 * coth_term * (x - y) * (x - y) - 0.5 * gap * x * y -
                    0.25 * b * (x * x - y * y) + log_i_scaled(nu - 1.0, 0.5 * arg * x * y),
                1.0};
    }

    std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                             double x) const override {
        const double a = par(p, "a"), b = par(p, "b");
        const double nu = 0.5 * (a + 1.0), al = alpha(p);
        const double c = b - 4.0 * lambda;
        double ac, sa;  // α coth(αt), sinh(αt)/α
        if (al * t < 1e-8) {
            ac = 1.0 / t;
            sa = t;
        } else {
            ac = al / std::tanh(al * t);
            sa = std::sinh(al * t) / al;
        }
        const double base = std::cosh(al * t) - c * sa;
        if (!(base > 0.0)) throw DomainError(name() + ": expectation diverges for this lambda");
        return std::exp(-0.25 * b * x * x + (al * al - c * ac) * x * x / (4.0 * (c - ac)) -
                        b * nu * t - nu * std::log(base));
    }

private:
    static double alpha(const Params& p) {
        const double b = par(p, "b");
        return std::sqrt(b * b + 4.0 * par(p, "mu"));
    }
};

} // namespace

std::unique_ptr<CatalogEntry> make_besq() { return std::make_unique<Besq>(); }
std::unique_ptr<CatalogEntry> make_besq_cosh() { return std::make_unique<BesqCosh>(); }
std::unique_ptr<CatalogEntry> make_bessel() { return std::make_unique<Bessel>(); }
std::unique_ptr<CatalogEntry> make_bessel_drift() { return std::make_unique<BesselDrift>(); }
std::unique_ptr<CatalogEntry> make_radial_ou() { return std::make_unique<RadialOU>(); }

} // namespace fksym::catalog_detail
