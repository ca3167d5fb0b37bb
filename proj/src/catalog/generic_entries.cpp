// Entries over drifts built from Bessel solutions of the linearised Riccati equation.

#include "detail.hpp"

#include "fksym/specfun.hpp"

#include <array>
#include <mutex>
#include <numbers>

namespace fksym::catalog_detail {

namespace {

// build_drift scans for zeros of y(x); cache the result per parameter tuple.
DiffusionSpec cached_drift(double A, double B, double sigma, double c1, double c2) {
    static std::mutex m;
    static std::map<std::array<double, 5>, DiffusionSpec> cache;
    const std::array<double, 5> key{A, B, sigma, c1, c2};
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, build_drift(A, B, sigma, c1, c2)).first;
    }
    return it->second;
}

bool near_integer(double v) { return std::fabs(v - std::round(v)) < 1e-12; }

// u_t = σx u_xx + f u_x - (μ/x) u, f = build_drift(A, B, σ, c1, c2).
class GenericA0 final : public CatalogEntry {
public:
    GenericA0() : CatalogEntry(1) {}

    std::string name() const override { return "generic_a0"; }
    std::string description() const override {
        return "drift f = 2 sigma x y'/y, y = sqrt(x)(c1 I_alpha + c2 K_alpha)(sqrt(2Ax)/sigma), "
               "killed at rate mu/x";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"A", 1.0, "Laplace-family A"},
                {"B", 0.5, "Laplace-family B"},
                {"sigma", 1.0, "diffusion coefficient"},
                {"c1", 1.0, "I coefficient"},
                {"c2", 0.0, "K coefficient"},
                {"mu", 0.0, "inverse killing mu/x"}};
    }
    std::vector<std::string> validity() const override {
        return {"A > 0", "sigma > 0", "2B + sigma^2 > 0", "2B + sigma^2 + 4 mu sigma > 0",
                "c2 != 0 needs 0 < nu < 1, nu = sqrt(2B + sigma^2 + 4 mu sigma)/sigma"};
    }
    std::map<std::string, std::string> formulas() const override {
        return {{"stationary",
                 "u0 = (c1 I_nu + c2 K_nu)(z)/(c1 I_alpha + c2 K_alpha)(z), z = sqrt(2Ax)/sigma, "
                 "alpha = sqrt(2B + sigma^2)/sigma"},
                {"density",
                 "sqrt(x/y) e^{(F(y)-F(x))/2sigma}/(sigma t) e^{-(x+y)/(sigma t) - At/2sigma} (k1 I_nu(Z) "
                 "I_nu(z_y) + k2 I_-nu(Z) I_-nu(z_y))/(k1 I_nu(z_y) + k2 I_-nu(z_y)), Z = 2 sqrt(xy)/(sigma "
                 "t), k2 = c2 pi/(2 sin(nu pi)), k1 = c1 - k2"},
                {"transform",
                 "sqrt(x) e^{-F(x)/2sigma - lambda(x + At^2/2)/s}/s (k1 I_nu + k2 I_-nu)(sqrt(2Ax)/(sigma "
                 "s)), s = 1 + lambda sigma t"}};
    }
    void validate(const Params& p) const override {
        const double A = par(p, "A"), B = par(p, "B"), s = par(p, "sigma");
        require(A > 0.0, name(), "A > 0");
        require(s > 0.0, name(), "sigma > 0");
        require(2.0 * B + s * s > 0.0, name(), "2B + sigma^2 > 0");
        require(2.0 * B + s * s + 4.0 * par(p, "mu") * s > 0.0, name(),
                "2B + sigma^2 + 4 mu sigma > 0");
        require(par(p, "c1") != 0.0 || par(p, "c2") != 0.0, name(), "(c1, c2) != (0, 0)");
        if (par(p, "c2") != 0.0) {
            const double v = nu(p);
            require(v < 1.0 && !near_integer(v), name(), "0 < nu < 1 when c2 != 0");
            require(!near_integer(alpha(p)), name(), "non-integer alpha when c2 != 0");
        }
    }

    DiffusionSpec diffusion(const Params& p) const override {
        return cached_drift(par(p, "A"), par(p, "B"), par(p, "sigma"), par(p, "c1"), par(p, "c2"));
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::power(par(p, "mu"), -1.0);
    }
    RiccatiParams riccati(const Params& p) const override {
        return {RiccatiFamily::laplace, par(p, "A"),
                par(p, "B") + 2.0 * par(p, "sigma") * par(p, "mu"), 0.0};
    }
    bool is_transition_density(const Params& p) const override { return par(p, "mu") == 0.0; }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const double A = par(p, "A"), s = par(p, "sigma");
        const auto d = diffusion(p);
        const double v = nu(p);
        const double Z = 2.0 * std::sqrt(x * y) / (s * t);
        const double z = std::sqrt(2.0 * A * y) / s;
        // Includes the e^{Z} taken out of the scaled Bessel functions: -(x + y)/(st) + Z.
        const double g = std::sqrt(x) - std::sqrt(y);
        const double base = 0.5 * std::log(x / y) + (d.F(y) - d.F(x)) / (2.0 * s) -
                            std::log(s * t) - g * g / (s * t) - A * t / (2.0 * s);
        if (par(p, "c2") == 0.0) return {base + log_i_scaled(v, Z), 1.0};
        const auto [k1, k2] = coefficients(p);
        using specfun::bessel_i_scaled;
        const double N = k1 * bessel_i_scaled(v, Z) * bessel_i_scaled(v, z) +
                         k2 * bessel_i_scaled(-v, Z) * bessel_i_scaled(-v, z);
        const double D = k1 * bessel_i_scaled(v, z) + k2 * bessel_i_scaled(-v, z);
        const double r = N / D;
        if (r == 0.0) return {0.0, 0.0};
        return {base + std::log(std::fabs(r)), r < 0.0 ? -1.0 : 1.0};
    }

    bool has_transform(const Params&) const override { return true; }
    double stationary(const Params& p, double y) const override {
        const double s = par(p, "sigma");
        const double z = std::sqrt(2.0 * par(p, "A") * y) / s;
        return std::exp(-diffusion(p).F(y) / (2.0 * s) + 0.5 * std::log(y) + z) * branch_sum(p, z);
    }
    double transform_rhs(const Params& p, double lambda, double t, double x) const override {
        const double A = par(p, "A"), s = par(p, "sigma");
        const double q = 1.0 + lambda * s * t;
        const double z = std::sqrt(2.0 * A * x) / (s * q);
        return std::exp(0.5 * std::log(x) - diffusion(p).F(x) / (2.0 * s) -
                        lambda * (x + 0.5 * A * t * t) / q - std::log(q) + z) *
               branch_sum(p, z);
    }

    double quadrature_scale(const Params& p, double t, double x) const override {
        return x + 4.0 * par(p, "sigma") * t + 1.0;
    }
    double density_singular_power(const Params& p) const override {
        return par(p, "c2") == 0.0 ? 0.0 : 0.5 * (alpha(p) + nu(p));
    }
    double transform_singular_power(const Params& p) const override {
        return par(p, "c2") == 0.0 ? 0.0 : nu(p);
    }

private:
    static double nu(const Params& p) {
        const double s = par(p, "sigma");
        return std::sqrt(2.0 * par(p, "B") + s * s + 4.0 * par(p, "mu") * s) / s;
    }
    static double alpha(const Params& p) {
        const double s = par(p, "sigma");
        return std::sqrt(2.0 * par(p, "B") + s * s) / s;
    }
    // c1 I_ν + c2 K_ν = k1 I_ν + k2 I_{-ν}.
    static std::pair<double, double> coefficients(const Params& p) {
        const double c2 = par(p, "c2");
        if (c2 == 0.0) return {par(p, "c1"), 0.0};
        const double k2 = c2 * std::numbers::pi / (2.0 * std::sin(nu(p) * std::numbers::pi));
        return {par(p, "c1") - k2, k2};
    }
    // e^{-z}(k1 I_ν(z) + k2 I_{-ν}(z)).
    static double branch_sum(const Params& p, double z) {
        const auto [k1, k2] = coefficients(p);
        const double v = nu(p);
        double out = k1 * specfun::bessel_i_scaled(v, z);
        if (k2 != 0.0) out += k2 * specfun::bessel_i_scaled(-v, z);
        return out;
    }
};

// u_t = σx u_xx + f u_x - (μx + ν/x) u, f = build_drift(A0, B0, σ, c1, c2), μ > 0.
class GenericApos final : public CatalogEntry {
public:
    GenericApos() : CatalogEntry(1) {}

    std::string name() const override { return "generic_apos"; }
    std::string description() const override {
        return "drift from build_drift(A0, B0, sigma, c1, c2) killed at rate mu x + nu/x; "
               "quadratic family A = 4 sigma mu, B = A0, C = B0 + 2 sigma nu";
    }
    std::vector<ParamSpec> parameters() const override {
        return {{"A0", 1.0, "drift Laplace-family A"},
                {"B0", 0.5, "drift Laplace-family B"},
                {"sigma", 1.0, "diffusion coefficient"},
                {"c1", 1.0, "I coefficient"},
                {"c2", 0.0, "K coefficient"},
                {"mu", 0.5, "linear killing mu x"},
                {"nu", 0.0, "inverse killing nu/x"}};
    }
    std::vector<std::string> validity() const override {
        return {"mu > 0", "sigma > 0", "A0 >= 0", "2 B0 + sigma^2 > 0",
                "sigma^2 + 2(B0 + 2 sigma nu) >= 0"};
    }
    std::map<std::string, std::string> formulas() const override {
        return {{"density",
                 "sqrt(A) e^{(F(y)-F(x))/2sigma}/(2 sigma sinh(sqrt(A)t/2)) sqrt(x/y) exp(-Bt/2sigma - "
                 "sqrt(A)(x+y)/(2 sigma tanh(sqrt(A)t/2))) I_v(sqrt(Axy)/(sigma sinh(sqrt(A)t/2))), "
                 "v = sqrt(sigma^2 + 2C)/sigma"},
                {"expectation", "quadrature of e^{-lambda y} against the density"}};
    }
    void validate(const Params& p) const override {
        const double s = par(p, "sigma"), B0 = par(p, "B0");
        require(par(p, "mu") > 0.0, name(), "mu > 0");
        require(s > 0.0, name(), "sigma > 0");
        require(par(p, "A0") >= 0.0, name(), "A0 >= 0");
        require(2.0 * B0 + s * s > 0.0, name(), "2 B0 + sigma^2 > 0");
        require(s * s + 2.0 * (B0 + 2.0 * s * par(p, "nu")) >= 0.0, name(),
                "sigma^2 + 2(B0 + 2 sigma nu) >= 0");
        require(par(p, "c1") != 0.0 || par(p, "c2") != 0.0, name(), "(c1, c2) != (0, 0)");
    }

    DiffusionSpec diffusion(const Params& p) const override {
        return cached_drift(par(p, "A0"), par(p, "B0"), par(p, "sigma"), par(p, "c1"), par(p, "c2"));
    }
    PotentialSpec potential(const Params& p) const override {
        return PotentialSpec::inverse_plus_linear(par(p, "nu"), par(p, "mu"));
    }
    RiccatiParams riccati(const Params& p) const override {
        const double s = par(p, "sigma");
        return {RiccatiFamily::quadratic, 4.0 * s * par(p, "mu"), par(p, "A0"),
                par(p, "B0") + 2.0 * s * par(p, "nu")};
    }
    bool is_transition_density(const Params&) const override { return false; }

    LogValue log_density(const Params& p, double t, double x, double y) const override {
        const auto d = diffusion(p);
        const auto r = riccati(p);
        return {log_quadratic_kernel(par(p, "sigma"), r.A, r.B, r.C, d.F(x), d.F(y), t, x, y), 1.0};
    }

    double quadrature_scale(const Params& p, double t, double x) const override {
        return x + 4.0 * par(p, "sigma") * t + 1.0;
    }
};

} // namespace

std::unique_ptr<CatalogEntry> make_generic_a0() { return std::make_unique<GenericA0>(); }
std::unique_ptr<CatalogEntry> make_generic_apos() { return std::make_unique<GenericApos>(); }

} // namespace fksym::catalog_detail
