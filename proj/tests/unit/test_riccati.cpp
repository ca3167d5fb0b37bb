#include "doctest.h"

#include "fksym/errors.hpp"
#include "fksym/riccati.hpp"

#include <cmath>

using namespace fksym;

namespace {

DiffusionSpec cir(double a, double b, double sigma) {
    DiffusionSpec d;
    d.sigma = sigma;
    d.drift = [=](double x) { return a - b * x; };
    d.drift_derivative = [=](double) { return -b; };
    d.drift_antiderivative = [=](double x) { return a * std::log(x) - b * x; };
    d.label = "cir";
    return d;
}

DiffusionSpec constant_drift(double n, double sigma) {
    DiffusionSpec d;
    d.sigma = sigma;
    d.drift = [=](double) { return n; };
    d.drift_antiderivative = [=](double x) { return n * std::log(x); };
    return d;
}

double max_abs_residual(const DiffusionSpec& d, const PotentialSpec& g, const RiccatiParams& p,
                        double lo = 1e-2, double hi = 1e2,
                        ResidualForm form = ResidualForm::h_form) {
    double worst = 0.0;
    for (double x : log_grid(lo, hi, 50)) {
        worst = std::max(worst, std::fabs(riccati_residual(d, g, p, x, form)));
    }
    return worst;
}

} // namespace

TEST_CASE("CIR with linear killing satisfies the quadratic family") {
    const double a = 1.3, b = 0.7, sigma = 0.8, mu = 0.4;
    const RiccatiParams p{RiccatiFamily::quadratic, b * b + 4 * mu * sigma, -a * b,
                          0.5 * a * a - a * sigma};
    CHECK(max_abs_residual(cir(a, b, sigma), PotentialSpec::power(mu, 1.0), p) < 1e-10);
    // The differentiated operator form agrees.
    CHECK(max_abs_residual(cir(a, b, sigma), PotentialSpec::power(mu, 1.0), p, 0.1, 10.0,
                           ResidualForm::operator_form) < 1e-6);
}

TEST_CASE("constant drift with mu/x killing; zero drift") {
    const double n = 3.0, mu = 0.6;
    const RiccatiParams p{RiccatiFamily::laplace, 0.0, n * n / 2 - 2 * n + 4 * mu, 0.0};
    CHECK(max_abs_residual(constant_drift(n, 2.0), PotentialSpec::power(mu, -1.0), p) < 1e-10);
    CHECK(max_abs_residual(constant_drift(0.0, 1.0), PotentialSpec::zero(), RiccatiParams{}) == 0.0);
}

TEST_CASE("residual detects a wrong family constant") {
    const RiccatiParams p{RiccatiFamily::laplace, 0.0, 1.0, 0.0};
    CHECK(std::fabs(riccati_residual(constant_drift(3.0, 2.0), PotentialSpec::zero(), p, 1.0) -
                    (4.5 - 6.0 - 1.0)) < 1e-12);
    CHECK_THROWS_AS(riccati_residual(constant_drift(3.0, 2.0), PotentialSpec::zero(), p, 0.0),
                    DomainError);
}

TEST_CASE("operator form needs g'") {
    auto tab = PotentialSpec::tabulated({0.1, 1.0, 10.0}, {0.0, 0.0, 0.0});
    CHECK_THROWS_AS(riccati_residual(constant_drift(3.0, 2.0), tab, RiccatiParams{}, 1.0,
                                     ResidualForm::operator_form),
                    CapabilityError);
    CHECK_NOTHROW(riccati_residual(constant_drift(3.0, 2.0), tab, RiccatiParams{}, 1.0));
}

TEST_CASE("gamma = 2 log families") {
    // f = c x: R(ξ) = (c-σ)²ξ²/2, so 2σA + σ²/2 = (c-σ)²/2.
    const double c = 1.7, sigma = 0.6;
    DiffusionSpec d;
    d.gamma = 2.0;
    d.sigma = sigma;
    d.drift = [=](double x) { return c * x; };
    d.drift_antiderivative = [=](double x) { return c * std::log(x); };
    const double A = ((c - sigma) * (c - sigma) - sigma * sigma) / (4 * sigma);
    const RiccatiParams p{RiccatiFamily::log_constant, A, 0.0, 0.0};
    CHECK(max_abs_residual(d, PotentialSpec::zero(), p) < 1e-9);
    auto fit = fit_riccati(d, PotentialSpec::zero(), log_grid(0.05, 20.0, 30));
    REQUIRE(fit.has_value());
    CHECK(fit->family == RiccatiFamily::log_constant);
    CHECK(std::fabs(fit->A - A) < 1e-6 * std::max(1.0, std::fabs(A)));
    // Zero drift and potential: A = 0.
    DiffusionSpec z = d;
    z.drift = [](double) { return 0.0; };
    z.drift_antiderivative = [](double) { return 0.0; };
    CHECK(max_abs_residual(z, PotentialSpec::zero(), RiccatiParams{RiccatiFamily::log_constant}) <
          1e-12);
}

TEST_CASE("fit_riccati classification") {
    const double n = 3.0, mu = 0.45;
    auto fit = fit_riccati(constant_drift(n, 2.0), PotentialSpec::power(mu, -1.0),
                           log_grid(0.01, 100.0, 40));
    REQUIRE(fit.has_value());
    CHECK(fit->family == RiccatiFamily::laplace);
    CHECK(std::fabs(fit->A) < 1e-8);
    CHECK(std::fabs(fit->B - (n * n / 2 - 2 * n + 4 * mu)) < 1e-8);

    DiffusionSpec tanh_drift;
    tanh_drift.sigma = 1.0;
    tanh_drift.drift = [](double x) { return 2 * x * std::tanh(x); };
    tanh_drift.drift_derivative = [](double x) {
        const double c = std::cosh(x);
        return 2 * std::tanh(x) + 2 * x / (c * c);
    };
    tanh_drift.drift_antiderivative = [](double x) { return 2 * std::log(std::cosh(x)); };
    const double m2 = 0.3;
    auto f2 = fit_riccati(tanh_drift, PotentialSpec::power(m2, 1.0), log_grid(0.01, 10.0, 40));
    REQUIRE(f2.has_value());
    CHECK(f2->family == RiccatiFamily::quadratic);
    CHECK(std::fabs(f2->A - 4 * (1 + m2)) < 1e-6);
    CHECK(std::fabs(f2->B) < 1e-6);
    CHECK(std::fabs(f2->C) < 1e-6);

    DiffusionSpec sq;
    sq.drift = [](double x) { return x * x; };
    sq.drift_antiderivative = [](double x) { return 0.5 * x * x; };
    CHECK_FALSE(fit_riccati(sq, PotentialSpec::zero(), log_grid(0.01, 100.0, 40)).has_value());
}

TEST_CASE("fit_riccati grid preconditions") {
    const std::vector<double> same(10, 2.0);
    CHECK_THROWS_AS(fit_riccati(constant_drift(3.0, 2.0), PotentialSpec::zero(), same),
                    ConditioningError);
    CHECK_THROWS_AS(fit_riccati(constant_drift(3.0, 2.0), PotentialSpec::zero(), log_grid(1, 2, 20)),
                    ValidityError);
    CHECK_THROWS_AS(fit_riccati(constant_drift(3.0, 2.0), PotentialSpec::zero(), log_grid(1, 100, 5)),
                    ValidityError);
}

TEST_CASE("build_drift round trip") {
    struct Case {
        double A, B, sigma, c1, c2;
    };
    for (const Case& c : {Case{0.0, 0.0, 1.0, 1.0, 0.0}, Case{1.0, 1.0, 1.0, 1.0, 0.0},
                          Case{1.0, 0.0, 2.0, 1.0, 1.0}, Case{0.5, -0.2, 1.0, 0.0, 1.0},
                          Case{0.0, 0.7, 1.5, 2.0, 3.0}, Case{2.0, 0.3, 0.7, 1.0, 0.5}}) {
        const auto d = build_drift(c.A, c.B, c.sigma, c.c1, c.c2);
        const RiccatiParams p{RiccatiFamily::laplace, c.A, c.B, 0.0};
        double worst = 0.0;
        for (double x : log_grid(1e-3, 100.0, 60)) {
            worst = std::max(worst, std::fabs(riccati_residual(d, PotentialSpec::zero(), p, x)));
        }
        CAPTURE(c.A);
        CAPTURE(c.B);
        CAPTURE(c.c2);
        CHECK(worst < 1e-8);
        CHECK_NOTHROW(d.validate());
    }
    // A = 0, B = 0, c2 = 0: y = x, f = 2σ.
    const auto lin = build_drift(0.0, 0.0, 1.5, 1.0, 0.0);
    CHECK(std::fabs(lin.f(0.37) - 3.0) < 1e-14);
    // A = 1, B = 0, σ = 2, c1 = c2 = 1: K_1 dominates near 0, y → const and f → 0.
    const auto mixed = build_drift(1.0, 0.0, 2.0, 1.0, 1.0);
    CHECK(std::fabs(mixed.f(1e-8)) < 1e-5);
}

TEST_CASE("build_drift errors") {
    CHECK_THROWS_AS(build_drift(1.0, -1.0, 1.0, 1.0, 0.0), ValidityError);
    CHECK_THROWS_AS(build_drift(1.0, 1.0, 1.0, 0.0, 0.0), ValidityError);
    try {
        build_drift(1.0, 1.0, 1.0, 1.0, -1.0);
        FAIL("expected a singular drift");
    } catch (const SingularDriftError& e) {
        CHECK(e.location() > 0.0);
        CHECK(e.location() <= 100.0);
    }
}
