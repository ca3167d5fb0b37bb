#include "doctest.h"

#include "fksym/catalog.hpp"
#include "fksym/errors.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

using namespace fksym;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

double ncx2_pdf(double df, double nc, double z) {
    return boost::math::pdf(boost::math::non_central_chi_squared_distribution<double>(df, nc), z);
}

// BESQ(n): X_t / t ~ χ'²(n, x/t).
double besq_oracle(double n, double t, double x, double y) {
    return ncx2_pdf(n, x / t, y / t) / t;
}

// dX = (a - bX)dt + √(2σX)dW: 2cX_t ~ χ'²(2a/σ, 2c x e^{-bt}), c = b/(σ(1 - e^{-bt})).
double cir_oracle(double a, double b, double sigma, double t, double x, double y) {
    const double c = b / (sigma * (1.0 - std::exp(-b * t)));
    return 2.0 * c * ncx2_pdf(2.0 * a / sigma, 2.0 * c * x * std::exp(-b * t), 2.0 * c * y);
}

struct Case {
    std::string entry;
    Params params;
};

// Entries whose kernel is a probability density (possibly with a δ atom).
const std::vector<Case> density_cases = {
    {"besq", {{"n", 3}}},
    {"besq", {{"n", 2.4}}},
    {"bessel", {{"a", 1}}},
    {"bessel_drift", {{"a", 0.5}, {"b", 1}}},
    {"cir", {{"a", 1.5}, {"b", 0.8}, {"sigma", 0.7}}},
    {"rational", {{"a", 2}}},
    {"tanh", {}},
    {"radial_ou", {{"a", 1.5}, {"b", -0.4}}},
    {"generic_a0", {}},
    {"generic_a0", {{"B", -0.2}, {"c2", 0.5}}},
};

const std::vector<Case> transform_cases = {
    {"besq", {{"n", 3}}},
    {"besq", {{"n", 2.5}, {"mu", 0.4}}},
    {"besq_cosh", {}},
    {"bessel", {{"a", 0.8}, {"mu", 0.6}}},
    {"bessel_drift", {{"a", 1}, {"b", 1}, {"mu", 0.5}}},
    {"rational", {{"mu", 0.3}}},
    {"tanh", {{"mu", 0.5}}},
    {"drift34", {}},
    {"sqrt_drift", {}},
    {"generic_a0", {{"mu", 0.2}}},
    {"generic_a0", {{"B", -0.3}, {"c2", 0.5}, {"mu", 0.1}}},
};

const std::vector<Case> closed_form_cases = {
    {"besq", {{"n", 2.5}, {"mu", 0.4}}},
    {"besq", {{"n", 2}, {"b", 1}}},
    {"besq", {{"n", 3}, {"b", 0.7}, {"mu", 0.3}}},
    {"bessel", {{"a", 0.8}, {"mu", 0.6}}},
    {"cir", {}},
    {"cir", {{"a", 1.5}, {"b", 0.8}, {"sigma", 0.7}, {"mu", 0.3}, {"nu", 0.2}}},
    {"rational", {{"mu", 0.3}}},
    {"tanh", {{"mu", 0.5}}},
    {"radial_ou", {{"a", 1.5}, {"b", -0.4}, {"mu", 0.3}}},
    {"sqrt_drift", {{"a", 0.7}, {"b", 1.2}, {"A", 0.5}, {"B", 1}}},
};

} // namespace

TEST_CASE("registry and lookup") {
    const auto names = entry_names();
    CHECK(names.size() == 12);
    for (const auto& n : names) CHECK(get_entry(n).name() == n);
    try {
        get_entry("foo");
        FAIL("expected ValidityError");
    } catch (const ValidityError& e) {
        CHECK(std::string(e.what()).find("besq") != std::string::npos);
    }
}

TEST_CASE("parameter resolution and validity errors") {
    const auto& besq = get_entry("besq");
    const Params q = besq.resolve({{"n", 2.5}});
    CHECK(q.at("n") == 2.5);
    CHECK(q.at("b") == 0.0);
    CHECK_THROWS_AS(besq.resolve({{"m", 1}}), ValidityError);
    try {
        density(besq, {{"n", 1}}, 1, 1, 1);
        FAIL("expected ValidityError");
    } catch (const ValidityError& e) {
        CHECK(std::string(e.what()).find("n >= 2") != std::string::npos);
    }
    CHECK_THROWS_AS(density(besq, {}, 0.0, 1, 1), DomainError);
    CHECK_THROWS_AS(density(besq, {}, 1, -1, 1), DomainError);
    CHECK_THROWS_AS(density(besq, {}, 1, 1, -1), DomainError);
    CHECK_THROWS_AS(expectation(besq, {}, -1, 1, 1), DomainError);
    CHECK_THROWS_AS(density(get_entry("generic_a0"), {{"c2", 1}, {"B", 1}}, 1, 1, 1),
                    ValidityError);
    CHECK_THROWS_AS(density(get_entry("rational"), {{"mu", 0.1}, {"nu", 0.1}}, 1, 1, 1),
                    ValidityError);
    // s = √(1+4ν) = 3 is an integer.
    CHECK_THROWS_AS(density(get_entry("rational"), {{"nu", 2}}, 1, 1, 1), CapabilityError);
    CHECK_THROWS_AS(expectation(get_entry("rational"), {{"nu", 0.3}}, 1, 1, 1), CapabilityError);
    CHECK_THROWS_AS(transform_rhs(get_entry("cir"), {}, 1, 1, 1), CapabilityError);
}

TEST_CASE("pinned values") {
    const auto& besq = get_entry("besq");
    const double d = density(besq, {{"n", 3}}, 1, 1, 1);
    CHECK(rel(d, std::exp(-1.0) * std::sinh(1.0) / std::sqrt(2.0 * std::numbers::pi)) < 1e-14);
    CHECK(std::fabs(d - 0.1724757) < 1e-7);
    CHECK(rel(transform_rhs(besq, {{"n", 3}}, 1, 1, 1),
              std::pow(3.0, -1.5) * std::exp(-1.0 / 3.0)) < 1e-14);
    const double cor56 = expectation(besq, {{"n", 2}, {"b", 1}}, 0, 1, 1);
    CHECK(rel(cor56, std::exp(-std::tanh(1.0) / 2.0) / std::cosh(1.0)) < 1e-13);
    CHECK(std::fabs(cor56 - 0.4428262) < 1e-7);

    const auto k = kernel(get_entry("rational"), {{"a", 2}}, 1, 1);
    REQUIRE(k.atoms.size() == 1);
    CHECK(k.atoms[0].order == 0);
    CHECK(rel(k.atoms[0].weight, std::exp(-1.0) / 2.0) < 1e-14);
}

TEST_CASE("densities match noncentral chi-squared oracles") {
    for (double t : {0.3, 1.0}) {
        for (double x : {0.5, 2.0}) {
            for (double y : {0.1, 1.0, 3.0}) {
                for (double n : {2.0, 3.0, 4.7}) {
                    CHECK(rel(density(get_entry("besq"), {{"n", n}}, t, x, y),
                              besq_oracle(n, t, x, y)) < 1e-9);
                }
                CHECK(rel(density(get_entry("cir"), {{"a", 1.5}, {"b", 0.8}, {"sigma", 0.7}}, t, x, y),
                          cir_oracle(1.5, 0.8, 0.7, t, x, y)) < 1e-9);
                // X² is BESQ(2a + 1).
                const double a = 0.8;
                CHECK(rel(density(get_entry("bessel"), {{"a", a}}, t, x, y),
                          2.0 * y * besq_oracle(2 * a + 1, t, x * x, y * y)) < 1e-9);
                // X² solves dY = (2a + 2 + 2bY)dt + 2√(2Y)dW, a CIR with (a', b', σ') = (2a+2, -2b, 4).
                const double b = -0.4;
                CHECK(rel(density(get_entry("radial_ou"), {{"a", a}, {"b", b}}, t, x, y),
                          2.0 * y * cir_oracle(2 * a + 2, -2 * b, 4.0, t, x * x, y * y)) < 1e-9);
            }
        }
    }
}

TEST_CASE("log density agrees with density and survives small t") {
    const auto& besq = get_entry("besq");
    const auto lv = log_density(besq, {{"n", 3}}, 1e-4, 50.0, 50.5);
    CHECK(std::isfinite(lv.log_abs));
    CHECK(lv.sign == 1.0);
    const double direct = besq_oracle(3, 1e-4, 50.0, 50.5);
    CHECK(std::fabs(lv.log_abs - std::log(direct)) < 1e-8);
}

TEST_CASE("short-time densities reduce to the local Gaussian") {
    // p(t, x, x) ~ (2π·2σx^γ·t)^{-1/2}; the Gaussian exponent must not cancel catastrophically.
    for (const auto& name : entry_names()) {
        const auto& e = get_entry(name);
        const Params q = e.resolve({});
        const auto d = e.diffusion(q);
        for (double t : {1e-12, 1e-100}) {
            INFO(name << " t=" << t);
            const auto lv = log_density(e, q, t, 1.3, 1.3);
            const double gauss = -0.5 * std::log(2.0 * std::numbers::pi * 2.0 * d.sigma *
                                                 std::pow(1.3, d.gamma) * t);
            CHECK(lv.sign == 1.0);
            CHECK(std::fabs(lv.log_abs - gauss) < 1e-4);
        }
    }
}

TEST_CASE("density at y = 0 is the right limit") {
    const auto& besq = get_entry("besq");
    // n = 3 vanishes like y^{1/2}; n = 2 and the cosh kernel have finite limits.
    CHECK(density(besq, {{"n", 3}}, 1, 1, 0) == 0.0);
    CHECK(log_density(besq, {{"n", 3}}, 1, 1, 0).sign == 0.0);
    CHECK(density(besq, {{"n", 2}}, 1, 1, 0) == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-9));
    CHECK(density(get_entry("besq_cosh"), {}, 1, 1, 0) ==
          doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("normalization") {
    for (const auto& c : density_cases) {
        const auto& e = get_entry(c.entry);
        CHECK(e.is_transition_density(e.resolve(c.params)));
        for (double t : {0.25, 1.0}) {
            for (double x : {0.5, 2.0}) {
                INFO(c.entry << " t=" << t << " x=" << x);
                CHECK(std::fabs(total_mass(e, c.params, t, x) - 1.0) < 1e-8);
            }
        }
    }
}

TEST_CASE("mass defects of non-density solutions") {
    const auto& cosh_entry = get_entry("besq_cosh");
    CHECK_FALSE(cosh_entry.is_transition_density({}));
    for (double t : {0.25, 1.0}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const double expected = std::sqrt(2.0 * t / (std::numbers::pi * x)) *
                                        std::exp(-x / (2.0 * t)) +
                                    std::erf(std::sqrt(x / (2.0 * t)));
            CHECK(rel(total_mass(cosh_entry, {}, t, x), expected) < 1e-8);

            const double a = 1.0, b = 1.0;
            const auto& d34 = get_entry("drift34");
            const auto k = kernel(d34, {}, t, x);
            const double atom_mass =
                std::exp(-x / t) * b * (t + x) / (t * (b + a * x * x));
            double order0 = 0.0;
            for (const auto& at : k.atoms) {
                if (at.order == 0) order0 += at.weight;
            }
            CHECK(rel(order0, atom_mass) < 1e-13);
            const double continuous = total_mass(d34, {}, t, x) - order0;
            CHECK(std::fabs(continuous - (1.0 - atom_mass)) < 1e-8);
        }
    }
}

TEST_CASE("transform identities") {
    for (const auto& c : transform_cases) {
        const auto& e = get_entry(c.entry);
        for (double lambda : {0.1, 1.0, 5.0}) {
            for (double t : {0.25, 1.0}) {
                for (double x : {0.5, 2.0}) {
                    INFO(c.entry << " lambda=" << lambda << " t=" << t << " x=" << x);
                    CHECK(rel(transform_lhs(e, c.params, lambda, t, x),
                              transform_rhs(e, c.params, lambda, t, x)) < 1e-8);
                }
            }
        }
    }
    // λ = 0 with u₀ = 1 is normalization.
    CHECK(rel(transform_rhs(get_entry("besq"), {{"n", 3}}, 0, 0.7, 1.3), 1.0) < 1e-15);
}

TEST_CASE("closed-form expectations agree with quadrature") {
    for (const auto& c : closed_form_cases) {
        const auto& e = get_entry(c.entry);
        const Params q = e.resolve(c.params);
        for (double lambda : {0.1, 1.0, 5.0}) {
            for (double t : {0.25, 1.0}) {
                for (double x : {0.5, 2.0}) {
                    INFO(c.entry << " lambda=" << lambda << " t=" << t << " x=" << x);
                    const auto closed = e.expectation_closed(q, lambda, t, x);
                    REQUIRE(closed.has_value());
                    CHECK(rel(*closed, expectation_quadrature(e, c.params, lambda, t, x)) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("known functionals") {
    // E[exp(-(b²/2)∫X)] for BESQ(n).
    const double n = 3, b = 0.7, t = 0.8, x = 1.4;
    CHECK(rel(expectation(get_entry("besq"), {{"n", n}, {"b", b}}, 0, t, x),
              std::pow(std::cosh(b * t), -n / 2) * std::exp(-b * x * std::tanh(b * t) / 2)) <
          1e-13);
    // Without killing the CIR expectation is normalized.
    CHECK(std::fabs(expectation(get_entry("cir"), {}, 0, 1, 1) - 1.0) < 1e-8);
    // BESQ Laplace transform (1 + 2λt)^{-n/2} exp(-λx/(1 + 2λt)).
    CHECK(rel(expectation(get_entry("besq"), {{"n", 2.6}}, 0.9, t, x),
              std::pow(1 + 1.8 * t, -1.3) * std::exp(-0.9 * x / (1 + 1.8 * t))) < 1e-10);
}

TEST_CASE("Hartman-Watson ratio") {
    const auto& besq = get_entry("besq");
    for (double n : {2.0, 3.0, 5.5}) {
        for (double mu : {0.3, 1.0, 2.0}) {
            for (double t : {0.5, 1.0}) {
                for (double x : {0.5, 2.0}) {
                    for (double y : {0.3, 1.7}) {
                        const double nu = n / 2 - 1;
                        // Killing (μ²/2)/x shifts the index from ν to √(μ²+ν²).
                        const double q = density(besq, {{"n", n}, {"mu", mu * mu / 2}}, t, x, y);
                        const double p = density(besq, {{"n", n}}, t, x, y);
                        const double z = std::sqrt(x * y) / t;
                        const double expected =
                            boost::math::cyl_bessel_i(std::sqrt(mu * mu + nu * nu), z) /
                            boost::math::cyl_bessel_i(nu, z);
                        CHECK(rel(q / p, expected) < 1e-10);
                    }
                }
            }
        }
    }
}

TEST_CASE("killing limits") {
    const std::vector<Case> cases = {
        {"besq", {{"n", 2.5}}},         {"bessel", {{"a", 0.8}}}, {"bessel_drift", {{"a", 0.5}}},
        {"tanh", {}},                  {"radial_ou", {{"a", 1.5}, {"b", -0.4}}},
        {"rational", {}},              {"generic_a0", {}},
    };
    for (const auto& c : cases) {
        Params killed = c.params;
        killed["mu"] = 1e-10;
        for (double y : {0.3, 1.0, 2.5}) {
            INFO(c.entry << " y=" << y);
            CHECK(rel(density(get_entry(c.entry), killed, 0.6, 1.1, y),
                      density(get_entry(c.entry), c.params, 0.6, 1.1, y)) < 1e-8);
        }
    }
    // b → 0 of the drifted Bessel kernel.
    for (double y : {0.3, 1.0, 2.5}) {
        CHECK(rel(density(get_entry("bessel_drift"), {{"a", 0.5}, {"b", 1e-7}}, 0.6, 1.1, y),
                  density(get_entry("bessel_drift"), {{"a", 0.5}, {"b", 0}}, 0.6, 1.1, y)) < 1e-8);
    }
}

TEST_CASE("Riccati constants of every entry") {
    const auto grid = log_grid(1e-2, 1e2, 50);
    for (const auto& name : entry_names()) {
        const auto& e = get_entry(name);
        const Params q = e.resolve({});
        const auto d = e.diffusion(q);
        const auto g = e.potential(q);
        const auto r = e.riccati(q);
        for (double x : grid) {
            INFO(name << " x=" << x);
            const double scale = std::max(1.0, std::fabs(riccati_lhs(d, g, x)));
            CHECK(std::fabs(riccati_residual(d, g, r, x)) < 1e-10 * scale);
        }
    }
}

TEST_CASE("fit_riccati recovers catalog constants") {
    const std::vector<Case> cases = {
        {"besq", {{"n", 3}, {"mu", 0.2}}}, {"besq", {{"n", 3}, {"b", 0.5}}},
        {"cir", {{"mu", 0.3}, {"nu", 0.1}}}, {"tanh", {{"mu", 0.5}}},
        {"drift34", {}},                    {"rational", {{"mu", 0.4}}},
    };
    for (const auto& c : cases) {
        const auto& e = get_entry(c.entry);
        const Params q = e.resolve(c.params);
        const auto want = e.riccati(q);
        const auto fit = fit_riccati(e.diffusion(q), e.potential(q), log_grid(1e-2, 1e1, 40));
        INFO(c.entry);
        REQUIRE(fit.has_value());
        CHECK(fit->family == want.family);
        for (auto [got, ref] : {std::pair{fit->A, want.A}, {fit->B, want.B}, {fit->C, want.C}}) {
            CHECK(std::fabs(got - ref) < 1e-6 * std::max(1.0, std::fabs(ref)));
        }
    }
}

TEST_CASE("joint Laplace table in mu") {
    const auto& besq = get_entry("besq");
    const std::vector<double> grid{0.1, 0.5, 1.0, 2.0};
    const auto rows = joint_laplace_in_mu(besq, {{"n", 3}}, 0.5, 1, 1, grid);
    REQUIRE(rows.size() == grid.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].first == grid[i]);
        CHECK(rows[i].second == doctest::Approx(expectation(besq, {{"n", 3}, {"mu", grid[i]}}, 0.5, 1, 1)));
        if (i > 0) CHECK(rows[i].second < rows[i - 1].second);
    }
    CHECK_THROWS_AS(joint_laplace_in_mu(besq, {}, 0.5, 1, 1, {1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(joint_laplace_in_mu(get_entry("drift34"), {}, 0.5, 1, 1, {1.0}), CapabilityError);
}

TEST_CASE("manifest") {
    const auto j = nlohmann::json::parse(manifest_json());
    CHECK(j["schema"] == "fksym-catalog/1");
    REQUIRE(j["entries"].size() == entry_names().size());
    for (const auto& e : j["entries"]) {
        CHECK(e.contains("name"));
        CHECK(e["parameters"].is_array());
        CHECK(e["validity"].is_array());
        CHECK(e["formulas"].is_object());
        for (const auto& p : e["parameters"]) {
            CHECK(p["name"].is_string());
            CHECK(p["default"].is_number());
        }
    }
}

TEST_CASE("concurrent evaluation is deterministic") {
    const auto& e = get_entry("generic_a0");
    const Params p{{"B", -0.2}, {"c2", 0.5}};
    const double ref = density(e, p, 0.7, 1.2, 0.9);
    std::vector<double> out(8);
    std::vector<std::thread> pool;
    for (size_t i = 0; i < out.size(); ++i) {
        pool.emplace_back([&, i] { out[i] = density(e, p, 0.7, 1.2, 0.9); });
    }
    for (auto& th : pool) th.join();
    for (double v : out) CHECK(v == ref);
}
