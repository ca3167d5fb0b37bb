// CIR, rational, tanh, δ′-showcase and square-root drift entries (all γ = 1).

#include "detail.hpp"

#include "fksym/specfun.hpp"

namespace fksym::catalog_detail {

namespace {

// dX = (a - bX) dt + √(2σX) dW, killed at rate μX + ν/X.
class Cir final : public CatalogEntry {
public:
    Cir() : CatalogEntry(1) {}

    std::string name() const override { return "cir"; }
    std::string description() const override {
        return "CIR dX = (a - bX)dt + sqrt(2 sigma X)dW killed at rate mu x + nu/x";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"a", 2.0, "mean-reversion level times b"},
                {"b", 1.0, "mean-reversion speed"},
                {"sigma", 1.0, "diffusion coefficient"},
                {"mu", 0.0, "linear killing mu x"},
                {"nu", 0.0, "inverse killing nu/x"}};
    }
    std::vector<std::string> validity() const override {
        return {"a > 0", "b > 0", "sigma > 0", "mu >= 0", "(a - sigma)^2 + 4 sigma nu >= 0"};
    }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "sqrt(A) e^{(F(y)-F(x))/2sigma}/(2 sigma sinh(sqrt(A)t/2)) sqrt(x/y) exp(-Bt/2sigma - "
                 "sqrt(A)(x+y)/(2 sigma tanh(sqrt(A)t/2))) I_v(sqrt(Axy)/(sigma sinh(sqrt(A)t/2))), "
                 "A = b^2 + 4 mu sigma, B = -ab, v = sqrt((a-sigma)^2 + 4 sigma nu)/sigma, F = a ln x - bx"},
                {"expectation",
                 "mu=0: Gamma(k+v/2+1/2)/Gamma(v+1) beta x^{-k} exp(b/(2sigma)(at + x - x coth(bt/2))) "
                 "e^{beta^2/(2 al)} M_{-k,v/2}(beta^2/al)/(beta al^k), k = a/2sigma, al = b/(2sigma)(1 + "
                 "coth(bt/2)) + lambda, beta = b sqrt(x)/(2 sigma sinh(bt/2)); mu>0: same integral with "
                 "sqrt(A) in place of b in the kernel"}};
    }
    void validate(const Params& p) const override {
        const double a = par(p, "a"), s = par(p, "sigma");
        require(a > 0.0, name(), "a > 0");
        require(par(p, "b") > 0.0, name(), "b > 0");
        require(s > 0.0, name(), "sigma > 0");
        require(par(p, "mu") >= 0.0, name(), "mu >= 0");
        require((a - s) * (a - s) + 4.0 * s * par(p, "nu") >= 0.0, name(),
                "(a - sigma)^2 + 4 sigma nu >= 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b");
        DiffusionSpec d;
        d.gamma = 1.0;
        d.sigma = par(p, "sigma");
        d.drift = [a, b](double x) { return a - b * x; };
        d.drift_derivative = [b](double) { return -b; };
        d.drift_antiderivative = [a, b](double x) { return a * std::log(x) - b * x; };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::inverse_plus_linear(par(p, "nu"), par(p, "mu"));
    }
    RiccatiParams riccati(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b"), s = par(p, "sigma");
        return {RiccatiFamily::quadratic, b * b + 4.0 * par(p, "mu") * s, -a * b,
                0.5 * a * a - a * s + 2.0 * s * par(p, "nu")};
    }
    bool is_transition_density(const Params& p) const override {
        return par(p, "mu") == 0.0 && par(p, "nu") == 0.0 && par(p, "a") >= par(p, "sigma");
    }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double a = par(p, "a"), b = par(p, "b");
        const auto r = riccati(p);
        return {log_quadratic_kernel(par(p, "sigma"), r.A, r.B, r.C, a * std::log(x) - b * x,
                                     a * std::log(y) - b * y, t, x, y),
                1.0};
    }

    std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                             double x) const override {
        const double a = par(p, "a"), b = par(p, "b"), s = par(p, "sigma");
        const auto r = riccati(p);
        const double v = std::sqrt(s * s + 2.0 * r.C) / s;
        const double k = a / (2.0 * s);
        if (par(p, "mu") == 0.0) {
            const double h = 0.5 * b * t;
            const double al = b / (2.0 * s) * (1.0 + 1.0 / std::tanh(h)) + lambda;
            const double be = b * std::sqrt(x) / (2.0 * s * std::sinh(h));
            const double z = be * be / al;
            const double log_pref = specfun::gamma_ln(k + 0.5 * v + 0.5) -
                                    specfun::gamma_ln(v + 1.0) - k * std::log(x) +
                                    b / (2.0 * s) * (a * t + x - x / std::tanh(h)) -
                                    k * std::log(al) + 0.5 * z;
            return std::exp(log_pref) * specfun::whittaker_m(-k, 0.5 * v, z);
        }
        const double rA = std::sqrt(r.A), h = 0.5 * rA * t;
        const double al = lambda + b / (2.0 * s) + rA / (2.0 * s * std::tanh(h));
        const double be = std::sqrt(r.A * x) / (2.0 * s * std::sinh(h));
        return std::exp(std::log(rA / (2.0 * s)) - log_sinh(h) + (0.5 - k) * std::log(x) +
                        b * x / (2.0 * s) + a * b * t / (2.0 * s) - rA * x / (2.0 * s * std::tanh(h)) +
                        log_bessel_laplace(k, v, al, be));
    }

    double quadrature_scale(const Params& p, double t, double x) const override {
        return x + (par(p, "a") + par(p, "sigma")) * t + 1.0;
    }
};

// dX = (2aX/(2+aX)) dt + √(2X) dW, killed at rate μX or ν/X (not both).
class Rational final : public CatalogEntry {
public:
    Rational() : CatalogEntry(1) {}

    std::string name() const override { return "rational"; }
    std::string description() const override {
        return "dX = ax/(1+ax/2)dt + sqrt(2X)dW killed at rate mu x or nu/x; delta atom at 0";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"a", 2.0, "drift parameter"},
                {"mu", 0.0, "linear killing mu x"},
                {"nu", 0.0, "inverse killing nu/x"}};
    }
    std::vector<std::string> validity() const override {
        return {"a > 0", "mu >= 0", "nu >= 0", "mu = 0 or nu = 0",
                "nu > 0 needs sqrt(1+4nu) not an integer"};
    }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "mu=nu=0: e^{-(x+y)/t}/((2+ax)t) sqrt(x/y)(2+ay) I_1(2 sqrt(xy)/t) plus atom "
                 "2e^{-x/t}/(2+ax); mu>0: ((2+ay)/(2+ax)) sqrt(mu x/y) e^{-sqrt(mu)(x+y) coth(sqrt(mu)t)} "
                 "I_1(2 sqrt(mu xy)/sinh(sqrt(mu)t))/sinh(sqrt(mu)t) plus atom 2U_1; nu>0: pointwise "
                 "sqrt(x) e^{-(x+y)/t}(a y^{s/2} I_s + 2 y^{-s/2} I_{-s})(2 sqrt(xy)/t)/(t(2+ax)u0(y)), "
                 "s = sqrt(1+4nu)"},
                {"transform",
                 "mu=0: u0 = 1, (2 + ax/(1+lambda t)^2)/(2+ax) e^{-lambda x/(1+lambda t)}; mu>0: u0 = "
                 "e^{-sqrt(mu)y}/(2+ay), e^{-sqrt(mu)x(E+e)/(E-e)}/(2+ax), E = e^{2sqrt(mu)t}, "
                 "e = lambda/(lambda+2sqrt(mu))"},
                {"expectation",
                 "U_1 e^{beta^2/c}(2 + a beta^2/c^2), U_1 = e^{-sqrt(mu)x coth(sqrt(mu)t)}/(2+ax), "
                 "beta^2 = mu x/sinh^2(sqrt(mu)t), c = lambda + sqrt(mu) coth(sqrt(mu)t) (limits at mu=0)"}};
    }
    void validate(const Params& p) const override {
        const double mu = par(p, "mu"), nu = par(p, "nu");
        require(par(p, "a") > 0.0, name(), "a > 0");
        require(mu >= 0.0, name(), "mu >= 0");
        require(nu >= 0.0, name(), "nu >= 0");
        require(mu == 0.0 || nu == 0.0, name(), "mu = 0 or nu = 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double a = par(p, "a");
        DiffusionSpec d;
        d.gamma = 1.0;
        d.sigma = 1.0;
        d.drift = [a](double x) { return 2.0 * a * x / (2.0 + a * x); };
        d.drift_derivative = [a](double x) { return 4.0 * a / ((2.0 + a * x) * (2.0 + a * x)); };
        d.drift_antiderivative = [a](double x) { return 2.0 * std::log(2.0 + a * x); };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::inverse_plus_linear(par(p, "nu"), par(p, "mu"));
    }
    RiccatiParams riccati(const Params& p) const override {
        const double mu = par(p, "mu"), nu = par(p, "nu");
        if (mu > 0.0) return {RiccatiFamily::quadratic, 4.0 * mu, 0.0, 2.0 * nu};
        return {RiccatiFamily::laplace, 0.0, 2.0 * nu, 0.0};
    }
    bool is_transition_density(const Params& p) const override {
        return par(p, "mu") == 0.0 && par(p, "nu") == 0.0;
    }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double a = par(p, "a"), mu = par(p, "mu"), nu = par(p, "nu");
        const double Fx = 2.0 * std::log(2.0 + a * x), Fy = 2.0 * std::log(2.0 + a * y);
        if (mu > 0.0) return {log_quadratic_kernel(1.0, 4.0 * mu, 0.0, 0.0, Fx, Fy, t, x, y), 1.0};
        if (nu == 0.0) return {log_laplace_kernel(1.0, 0.0, 0.0, Fx, Fy, t, x, y), 1.0};
        const double s = std::sqrt(1.0 + 4.0 * nu);
        if (std::fabs(s - std::round(s)) < 1e-12) {
            throw CapabilityError(name() + ": killed density needs sqrt(1+4nu) not an integer");
        }
        const double z = 2.0 * std::sqrt(x * y) / t;
        const double hs = 0.5 * s * std::log(y);
        const double bracket = a * std::exp(hs) * specfun::bessel_i_scaled(s, z) +
                               2.0 * std::exp(-hs) * specfun::bessel_i_scaled(-s, z);
        const double log_u0 = 0.5 * (1.0 - s) * std::log(y) + std::log(2.0 + a * std::exp(2.0 * hs)) -
                              std::log(2.0 + a * y);
        if (bracket == 0.0) return {0.0, 0.0};
        return {0.5 * std::log(x) - (x + y) / t + z - std::log(t) - std::log(2.0 + a * x) - log_u0 +
                    std::log(std::fabs(bracket)),
                bracket < 0.0 ? -1.0 : 1.0};
    }

    std::vector<AtomSpec> atoms(const Params& p, double t, double x) const override {
        if (par(p, "nu") > 0.0) return {};
        return {{0.0, 0, 2.0 * u1(p, t, x)}};
    }

    bool has_transform(const Params& p) const override { return par(p, "nu") == 0.0; }
    double stationary(const Params& p, double y) const override {
        const double mu = par(p, "mu");
        if (mu == 0.0) return 1.0;
        return std::exp(-std::sqrt(mu) * y) / (2.0 + par(p, "a") * y);
    }
    OriginValue stationary_at_origin(const Params& p) const override {
        if (par(p, "mu") == 0.0) return {1.0, 0.0};
        const double a = par(p, "a"), rm = std::sqrt(par(p, "mu"));
        return {0.5, -0.5 * rm - 0.25 * a};
    }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double a = par(p, "a"), mu = par(p, "mu");
        if (mu == 0.0) {
            const double s = 1.0 + lambda * t;
            return (a * x / (s * s) + 2.0) / (2.0 + a * x) * std::exp(-lambda * x / s);
        }
        const double rm = std::sqrt(mu);
        const double E = std::exp(2.0 * rm * t), eps = lambda / (lambda + 2.0 * rm);
        return std::exp(-rm * x * (E + eps) / (E - eps)) / (2.0 + a * x);
    }

    std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                             double x) const override {
        if (par(p, "nu") > 0.0) {
            throw CapabilityError(name() + ": the nu/x-killed kernel is not integrable at 0");
        }
        const double a = par(p, "a"), mu = par(p, "mu");
        double beta2, c;
        if (mu == 0.0) {
            beta2 = x / (t * t);
            c = lambda + 1.0 / t;
        } else {
            const double rm = std::sqrt(mu), sh = std::sinh(rm * t);
            beta2 = mu * x / (sh * sh);
            c = lambda + rm / std::tanh(rm * t);
        }
        return u1(p, t, x) * std::exp(beta2 / c) * (2.0 + a * beta2 / (c * c));
    }

private:
    // e^{-√μ x coth(√μ t)}/(2+ax), the x/t limit at μ = 0.
    static double u1(const Params& p, double t, double x) {
        const double a = par(p, "a"), mu = par(p, "mu");
        const double rate = mu == 0.0 ? 1.0 / t : std::sqrt(mu) / std::tanh(std::sqrt(mu) * t);
        return std::exp(-x * rate) / (2.0 + a * x);
    }
};

// dX = 2X tanh X dt + √(2X) dW, killed at rate μX.
class Tanh final : public CatalogEntry {
public:
    Tanh() : CatalogEntry(1) {}

    std::string name() const override { return "tanh"; }
    std::string description() const override {
        return "dX = 2X tanh(X)dt + sqrt(2X)dW killed at rate mu x; delta atom at 0";
    }
    std::vector<ParamSpec> parameters() const override { return {{"mu", 0.0, "linear killing mu x"}}; }
    std::vector<std::string> validity() const override { return {"mu >= 0"}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "cosh y/(sinh(kt) cosh x) e^{-k(x+y) coth(kt)} k sqrt(x/y) I_1(2k sqrt(xy)/sinh kt) plus "
                 "atom U_1 = e^{-kx coth kt}/cosh x, k = sqrt(1+mu)"},
                {"transform",
                 "u0 = e^{-ky}/cosh y: e^{-kx(E+e)/(E-e)}/cosh x, E = e^{2kt}, e = lambda/(lambda+2k)"},
                {"expectation",
                 "U_1 + e^{-kx coth kt}/(2 cosh x) sum_{+-}(exp(k^2 x csch(kt)/(k cosh kt + (lambda -+ 1) "
                 "sinh kt)) - 1)"}};
    }
    void validate(const Params& p) const override {
        require(par(p, "mu") >= 0.0, name(), "mu >= 0");
    }

    DiffusionSpec diffusion(const Params&) const override {
        DiffusionSpec d;
        d.gamma = 1.0;
        d.sigma = 1.0;
        d.drift = [](double x) { return 2.0 * x * std::tanh(x); };
        d.drift_derivative = [](double x) {
            const double c = std::cosh(x);
            return 2.0 * std::tanh(x) + 2.0 * x / (c * c);
        };
        d.drift_antiderivative = [](double x) { return 2.0 * log_cosh(x); };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::power(par(p, "mu"), 1.0);
    }
    RiccatiParams riccati(const Params& p) const override {
        return {RiccatiFamily::quadratic, 4.0 * (1.0 + par(p, "mu")), 0.0, 0.0};
    }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double k = kk(p);
        return {log_quadratic_kernel(1.0, 4.0 * k * k, 0.0, 0.0, 2.0 * log_cosh(x), 2.0 * log_cosh(y),
                                     t, x, y),
                1.0};
    }
    std::vector<AtomSpec> atoms(const Params& p, double t, double x) const override {
        return {{0.0, 0, u1(p, t, x)}};
    }

    bool has_transform(const Params&) const override { return true; }
    double stationary(const Params& p, double y) const override {
        return std::exp(-kk(p) * y - log_cosh(y));
    }
    OriginValue stationary_at_origin(const Params& p) const override { return {1.0, -kk(p)}; }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double k = kk(p);
        const double E = std::exp(2.0 * k * t), eps = lambda / (lambda + 2.0 * k);
        return std::exp(-k * x * (E + eps) / (E - eps) - log_cosh(x));
    }

    std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                             double x) const override {
        const double k = kk(p);
        const double ch = std::cosh(k * t), sh = std::sinh(k * t);
        const double lead = -k * x * ch / sh;
        double sum = 0.0;
        for (double sgn : {1.0, -1.0}) {
            const double z = k * k * x / sh / (k * ch + (lambda - sgn) * sh);
            sum += std::exp(lead + z - log_cosh(x)) - std::exp(lead - log_cosh(x));
        }
        return u1(p, t, x) + 0.5 * sum;
    }

private:
    static double log_cosh(double z) {
        z = std::fabs(z);
        return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
    }
    static double kk(const Params& p) { return std::sqrt(1.0 + par(p, "mu")); }
    static double u1(const Params& p, double t, double x) {
        const double k = kk(p);
        return std::exp(-k * x / std::tanh(k * t) - log_cosh(x));
    }
};

// u_t = x u_xx + (3 - 4b/(b+ax²)) u_x: fundamental solution with δ and δ′ atoms.
class Drift34 final : public CatalogEntry {
public:
    Drift34() : CatalogEntry(1) {}

    std::string name() const override { return "drift34"; }
    std::string description() const override {
        return "u_t = x u_xx + (3 - 4b/(b+ax^2))u_x; structural delta and delta' atoms at 0";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"a", 1.0, "drift parameter"}, {"b", 1.0, "drift parameter"}};
    }
    std::vector<std::string> validity() const override { return {"a > 0", "b > 0"}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "(x/(yt))((b+ay^2)/(b+ax^2)) e^{-(x+y)/t} I_2(2 sqrt(xy)/t) + b(x+t)e^{-x/t}/(t(b+ax^2)) "
                 "delta(y) + bt e^{-x/t}/(b+ax^2) delta'(y)"},
                {"transform",
                 "u0 = 1: (ax^2 + b(1+lambda t)^4)/((b+ax^2)(1+lambda t)^3) e^{-lambda x/(1+lambda t)}"},
                {"mass", "continuous part: 1 - e^{-x/t} b(t+x)/(t(b+ax^2))"}};
    }
    void validate(const Params& p) const override {
        require(par(p, "a") > 0.0, name(), "a > 0");
        require(par(p, "b") > 0.0, name(), "b > 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b");
        DiffusionSpec d;
        d.gamma = 1.0;
        d.sigma = 1.0;
        d.drift = [a, b](double x) { return 3.0 - 4.0 * b / (b + a * x * x); };
        d.drift_derivative = [a, b](double x) {
            const double w = b + a * x * x;
            return 8.0 * a * b * x / (w * w);
        };
        d.drift_antiderivative = [a, b](double x) {
            return -std::log(x) + 2.0 * std::log(b + a * x * x);
        };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params&) const override { return PotentialSpec::zero(); }
    RiccatiParams riccati(const Params&) const override {
        return {RiccatiFamily::laplace, 0.0, 1.5, 0.0};
    }
    bool is_transition_density(const Params&) const override { return false; }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const auto d = diffusion(p);
        return {log_laplace_kernel(1.0, 0.0, 1.5, d.F(x), d.F(y), t, x, y), 1.0};
    }
    std::vector<AtomSpec> atoms(const Params& p, double t, double x) const override {
        const double a = par(p, "a"), b = par(p, "b");
        const double w = b + a * x * x, e = std::exp(-x / t);
        return {{0.0, 0, b * (x + t) * e / (t * w)}, {0.0, 1, b * t * e / w}};
    }

    bool has_transform(const Params&) const override { return true; }
    double stationary(const Params&, double) const override { return 1.0; }
    OriginValue stationary_at_origin(const Params&) const override { return {1.0, 0.0}; }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double a = par(p, "a"), b = par(p, "b");
        const double s = 1.0 + lambda * t;
        return (a * x * x + b * s * s * s * s) / ((b + a * x * x) * s * s * s) *
               std::exp(-lambda * x / s);
    }
};

// u_t = x u_xx + (a - b√x) u_x - g u with g fixed by the Laplace family (A, B).
// Expectations use exp(-∫g ds), matching the Feynman–Kac convention used throughout.
class SqrtDrift final : public CatalogEntry {
public:
    SqrtDrift() : CatalogEntry(1) {}

    std::string name() const override { return "sqrt_drift"; }
    std::string description() const override {
        return "dX = (a - b sqrt(X))dt + sqrt(2X)dW with the potential g making (A, B) a Laplace "
               "family; expectations use exp(-int g ds)";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"a", 1.0, "drift constant"},
                {"b", 0.5, "drift coefficient of sqrt(x)"},
                {"A", 1.0, "Laplace-family A"},
                {"B", 0.5, "Laplace-family B"}};
    }
    std::vector<std::string> validity() const override { return {"A > 0", "B > 0"}; }
    std::map<std::string, std::string> formulas() const override {
        return {{"potential",
                 "g = (A - b^2/2)/2 + (a - a^2/2 + B)/(2x) + (ab - b/2)/(2 sqrt(x))"},
                {"density",
                 "(1/t)(x/y)^{(1-a)/2} exp(b(sqrt(x) - sqrt(y)) - At/2 - (x+y)/t) I_v(2 sqrt(xy)/t), "
                 "v = sqrt(1+2B)"},
                {"transform",
                 "u0 = y^{(1-a)/2} e^{b sqrt(y)} I_v(sqrt(2Ay)): x^{(1-a)/2}/(1+lambda t) exp(b sqrt(x) - "
                 "lambda(x + At^2/2)/(1+lambda t)) I_v(sqrt(2Ax)/(1+lambda t))"},
                {"expectation",
                 "sum_j (-b)^j/j! of the 1F1 closed form of int y^{(a-1+j)/2} e^{-(lambda+1/t)y} "
                 "I_v(2 sqrt(xy)/t) dy"}};
    }
    void validate(const Params& p) const override {
        require(par(p, "A") > 0.0, name(), "A > 0");
        require(par(p, "B") > 0.0, name(), "B > 0");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b");
        DiffusionSpec d;
        d.gamma = 1.0;
        d.sigma = 1.0;
        d.drift = [a, b](double x) { return a - b * std::sqrt(x); };
        d.drift_derivative = [b](double x) { return -0.5 * b / std::sqrt(x); };
        d.drift_antiderivative = [a, b](double x) { return a * std::log(x) - 2.0 * b * std::sqrt(x); };
        d.label = name();
        return d;
    }
    PotentialSpec potential(const Params& p) const override {
        const double a = par(p, "a"), b = par(p, "b"), A = par(p, "A"), B = par(p, "B");
        return PotentialSpec::sum({{0.5 * (A - 0.5 * b * b), 0.0},
                                   {0.5 * (a - 0.5 * a * a + B), -1.0},
                                   {0.5 * (a * b - 0.5 * b), -0.5}});
    }
    RiccatiParams riccati(const Params& p) const override {
        return {RiccatiFamily::laplace, par(p, "A"), par(p, "B"), 0.0};
    }
    bool is_transition_density(const Params& p) const override { return potential(p).is_zero(); }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const auto d = diffusion(p);
        return {log_laplace_kernel(1.0, par(p, "A"), par(p, "B"), d.F(x), d.F(y), t, x, y), 1.0};
    }

    bool has_transform(const Params&) const override { return true; }
    double stationary(const Params& p, double y) const override {
        const double a = par(p, "a"), b = par(p, "b");
        return std::exp(0.5 * (1.0 - a) * std::log(y) + b * std::sqrt(y) +
                        log_i(v(p), std::sqrt(2.0 * par(p, "A") * y)));
    }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double a = par(p, "a"), b = par(p, "b"), A = par(p, "A");
        const double s = 1.0 + lambda * t;
        return std::exp(0.5 * (1.0 - a) * std::log(x) - std::log(s) + b * std::sqrt(x) -
                        lambda * (x + 0.5 * A * t * t) / s +
                        log_i(v(p), std::sqrt(2.0 * A * x) / s));
    }

    std::optional<double> expectation_closed(const Params& p, double lambda, double t,
                                             double x) const override {
        const double a = par(p, "a"), b = par(p, "b"), A = par(p, "A");
        const double nu = v(p), c = lambda + 1.0 / t, beta = std::sqrt(x) / t;
        const double lead = -std::log(t) + 0.5 * (1.0 - a) * std::log(x) + b * std::sqrt(x) -
                            0.5 * A * t - x / t;
        if (0.5 * a + 0.5 * nu + 0.5 <= 0.0) return std::nullopt;
        double sum = 0.0, biggest = 0.0;
        for (int j = 0; j < 2000; ++j) {
            double term;
            if (b == 0.0) {
                if (j > 0) break;
                term = std::exp(lead + log_bessel_laplace(0.5 * a, nu, c, beta));
            } else {
                const double lt = j * std::log(std::fabs(b)) - specfun::gamma_ln(j + 1.0) +
                                  log_bessel_laplace(0.5 * (a + j), nu, c, beta);
                term = (b > 0.0 && j % 2 == 1 ? -1.0 : 1.0) * std::exp(lead + lt);
            }
            sum += term;
            biggest = std::max(biggest, std::fabs(term));
            if (j > 4 && std::fabs(term) < 1e-17 * std::fabs(sum) && std::fabs(term) < biggest) break;
        }
        // Heavy cancellation: defer to quadrature.
        if (!(biggest < 1e4 * std::fabs(sum))) return std::nullopt;
        return sum;
    }

private:
    static double v(const Params& p) { return std::sqrt(1.0 + 2.0 * par(p, "B")); }
};

} // namespace

std::unique_ptr<CatalogEntry> make_cir() { return std::make_unique<Cir>(); }
std::unique_ptr<CatalogEntry> make_rational() { return std::make_unique<Rational>(); }
std::unique_ptr<CatalogEntry> make_tanh() { return std::make_unique<Tanh>(); }
std::unique_ptr<CatalogEntry> make_drift34() { return std::make_unique<Drift34>(); }
std::unique_ptr<CatalogEntry> make_sqrt_drift() { return std::make_unique<SqrtDrift>(); }

} // namespace fksym::catalog_detail
