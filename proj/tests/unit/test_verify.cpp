#include "doctest.h"

#include "fksym/errors.hpp"
#include "fksym/verify.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

using namespace fksym;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

const CatalogEntry& besq() { return get_entry("besq"); }

} // namespace

TEST_CASE("quadrature") {
    CHECK(rel(integrate_semi_infinite([](double y) { return std::exp(-y); }), 1.0) < 1e-12);

    QuadratureSpec s;
    s.singular_power = 0.5;
    CHECK(rel(integrate_semi_infinite([](double y) { return std::exp(-y) / std::sqrt(y); }, s),
              std::sqrt(std::numbers::pi)) < 1e-12);

    const double v = integrate_semi_infinite(
        [](double y) { return std::exp(-y) * density(besq(), {{"n", 3}}, 1, 1, y); });
    CHECK(rel(v, std::pow(3.0, -1.5) * std::exp(-1.0 / 3.0)) < 1e-12);
    CHECK(v == doctest::Approx(0.137896).epsilon(1e-6));

    CHECK(rel(integrate_interval([](double x) { return x * x; }, 0.0, 3.0), 9.0) < 1e-14);
}

TEST_CASE("Gaver-Stehfest") {
    auto exp_pair = [](double l) { return 1.0 / (l + 1.0); };
    CHECK(rel(gaver_stehfest(exp_pair, 1.0, 14), std::exp(-1.0)) < 1e-5);
    CHECK(rel(gaver_stehfest([](double l) { return 1.0 / l; }, 2.5, 14), 1.0) < 1e-7);

    auto besq3 = [](double l) { return transform_rhs(besq(), {{"n", 3}}, l, 1, 1); };
    const auto inv = laplace_invert(besq3, 1.0);
    CHECK(rel(inv.value, 0.1724757) < 1e-6);
    CHECK(inv.spread < 1e-4);

    // Orders 12 and 16 agree on smooth targets where order 12 is converged.
    for (double y : {0.2, 1.0, 2.0, 3.0}) {
        CHECK(rel(gaver_stehfest(besq3, y, 12), gaver_stehfest(besq3, y, 16)) < 1e-4);
    }

    CHECK_THROWS_AS(gaver_stehfest(exp_pair, 1.0, 13), DomainError);
    CHECK_THROWS_AS(gaver_stehfest(exp_pair, -1.0, 14), DomainError);
    // A unit step at y = 1 is not smooth there.
    auto step = [](double l) { return std::exp(-l) / l; };
    CHECK_THROWS_AS(laplace_invert(step, 1.0, 14, 1e-6), InstabilityError);
}

TEST_CASE("Whittaker transform") {
    CHECK(whittaker_forward([](double) { return 0.0; }, 0.3, 0.7, 1.5) == 0.0);
    const auto r = check_whittaker_laplace_reduction([](double y) { return y * std::exp(-y); }, 0.5,
                                                     {0.5, 1, 2});
    CHECK(r.pass);
    // (λ+1)^{-2} for φ = y e^{-y}.
    CHECK(rel(r.rows[1].computed, 0.25) < 1e-12);
    CHECK_THROWS_AS(whittaker_forward([](double) { return 1.0; }, 0, 0, -1), DomainError);
}

TEST_CASE("Whittaker identity for the CIR family") {
    const Params p{{"a", 4}, {"b", 0.7}, {"sigma", 1}, {"mu", 0.0375}, {"nu", -2.1875}};
    const auto r = check_whittaker_identity(p, {0.5, 1, 2, 3, 5}, 1.0, 1.0);
    CHECK(r.pass);
    CHECK(r.max_rel_err < 1e-8);
    const auto b = check_whittaker_branches({{"a", 1.5}, {"b", 1}, {"mu", 0.3}}, {0.5, 2, 5}, 1.0, 1.0);
    CHECK(b.pass);
    CHECK(b.rows.size() == 6);
}

TEST_CASE("Monte Carlo") {
    const auto& e = besq();
    const Params q = e.resolve({{"n", 2}, {"b", 1}});
    McSpec spec;
    spec.n_paths = 2000;
    spec.n_steps = 200;

    SUBCASE("no killing and lambda = 0 gives exactly one") {
        const auto r = mc_expectation(e.diffusion(e.resolve({{"n", 3}})), PotentialSpec::zero(), 0.0,
                                      1.0, 1.0, spec);
        CHECK(r.estimate == 1.0);
        CHECK(r.standard_error == 0.0);
    }
    SUBCASE("deterministic across thread counts") {
        spec.threads = 1;
        const auto a = mc_expectation(e.diffusion(q), e.potential(q), 0.5, 1, 1, spec);
        spec.threads = 3;
        const auto b = mc_expectation(e.diffusion(q), e.potential(q), 0.5, 1, 1, spec);
        CHECK(a.estimate == b.estimate);
        CHECK(a.standard_error == b.standard_error);
        spec.seed = 2;
        CHECK(mc_expectation(e.diffusion(q), e.potential(q), 0.5, 1, 1, spec).estimate != a.estimate);
    }
    SUBCASE("exact BESQ sampler against the closed form") {
        spec.scheme = McScheme::exact_besq;
        spec.n_paths = 20000;
        const auto r = mc_expectation(e.diffusion(q), e.potential(q), 0.0, 1, 1, spec);
        CHECK(std::fabs(r.estimate - 0.4428262) < 4 * r.standard_error);
        // Non-integer dimension uses the Poisson-gamma sampler.
        const Params q2 = e.resolve({{"n", 2.5}});
        spec.n_steps = 1;
        const auto r2 = mc_expectation(e.diffusion(q2), e.potential(q2), 0.7, 1, 1, spec);
        CHECK(std::fabs(r2.estimate - expectation(e, q2, 0.7, 1, 1)) < 4 * r2.standard_error);
    }
    SUBCASE("antithetic pairs") {
        spec.antithetic = true;
        const auto r = mc_expectation(e.diffusion(q), e.potential(q), 0.5, 1, 1, spec);
        CHECK(std::fabs(r.estimate - expectation(e, q, 0.5, 1, 1)) < 4 * r.standard_error);
        spec.n_paths = 2001;
        CHECK_THROWS_AS(mc_expectation(e.diffusion(q), e.potential(q), 0.5, 1, 1, spec), DomainError);
    }
    SUBCASE("standard error decays as n^{-1/2}") {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t n : {1000, 10000, 100000}) {
            spec.n_paths = n;
            spec.n_steps = 20;
            const auto r = mc_expectation(e.diffusion(q), e.potential(q), 0.5, 1, 1, spec);
            const double lx = std::log(static_cast<double>(n)), ly = std::log(r.standard_error);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
        CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
    }
    SUBCASE("scheme preconditions") {
        spec.scheme = McScheme::exact_besq;
        const auto& cir = get_entry("cir");
        const Params c = cir.resolve({});
        CHECK_THROWS_AS(mc_expectation(cir.diffusion(c), cir.potential(c), 0.5, 1, 1, spec),
                        CapabilityError);
        spec.scheme = McScheme::euler_full_truncation;
        spec.simulate_square = true;
        CHECK_THROWS_AS(mc_expectation(cir.diffusion(c), cir.potential(c), 0.5, 1, 1, spec),
                        CapabilityError);
        CHECK_THROWS_AS(mc_expectation(cir.diffusion(c), cir.potential(c), 0.5, 0, 1, spec),
                        DomainError);
    }
    SUBCASE("singular potentials report the clip rate") {
        const auto& b = get_entry("bessel");
        const Params p = b.resolve({{"a", 0.6}, {"mu", 0.5}});
        spec.simulate_square = true;
        spec.x_floor = 0.05;
        const auto r = mc_expectation(b.diffusion(p), b.potential(p), 0.5, 1, 0.2, spec);
        CHECK(r.clip_rate > 0.0);
        CHECK(r.clip_rate < 1.0);
    }
}

TEST_CASE("alternative representation") {
    const auto r = check_alt_representation(1, 1, 0.5, 1, 1);
    CHECK(r.pass);
    CHECK(r.max_rel_err < 1e-10);
    // μ = 0 removes the killing: (1+2λt)^{-(1+ξ)} e^{-λx²/(1+2λt)}.
    const auto z = check_alt_representation(1, 0, 0.5, 1, 1);
    CHECK(rel(z.rows[0].computed, std::pow(2.0, -2.0) * std::exp(-0.25)) < 1e-14);
    CHECK(z.pass);
}

TEST_CASE("limit reductions") {
    const auto r = check_limit_reduction(get_entry("tanh"), {}, "mu", {0.02, 0.01, 0.005, 0.0025}, 0.8,
                                         1.2, {0.3, 1.0});
    CHECK(r.pass);
    CHECK_FALSE(r.inconclusive);
    // Bessel-with-drift b → 0 against the Bessel entry of matching index.
    const auto b = check_limit_reduction(
        get_entry("bessel_drift"), {{"a", 0.5}}, "b", {0.02, 0.01, 0.005, 0.0025}, 0.8, 1.2, {1.0},
        [](double y) { return density(get_entry("bessel"), {{"a", 1.0}}, 0.8, 1.2, y); });
    CHECK(b.pass);
    // A wrong target fails.
    const auto w = check_limit_reduction(get_entry("tanh"), {}, "mu", {0.02, 0.01, 0.005}, 0.8, 1.2,
                                         {1.0}, [](double) { return 1.0; });
    CHECK_FALSE(w.pass);
    CHECK_THROWS_AS(check_limit_reduction(get_entry("tanh"), {}, "mu", {0.01, 0.02, 0.005}, 1, 1, {1}),
                    DomainError);
    CHECK_THROWS_AS(check_limit_reduction(get_entry("tanh"), {}, "mu", {0.02, 0.01}, 1, 1, {1}),
                    DomainError);
}

TEST_CASE("semigroup, PDE, Riccati and Hartman-Watson checks") {
    CHECK(check_chapman_kolmogorov(besq(), {{"n", 3}, {"mu", 0.4}}, {{0.5, 0.5}}, {1}, {0.5, 2}).pass);
    CHECK(check_density_pde(get_entry("cir"), {}, {1}, {1}, {0.7}).pass);
    // A function that does not solve the PDE has no order-2 residual.
    const auto& c = get_entry("cir");
    const Params q = c.resolve({});
    const auto bad = check_solution_pde("not a solution", [](double x, double t) { return x + t; },
                                        c.diffusion(q), c.potential(q), {{2.0, 0.5}});
    CHECK_FALSE(bad.pass);
    for (const auto& name : entry_names()) {
        INFO(name);
        CHECK(check_riccati(get_entry(name), {}).pass);
    }
    CHECK(check_hartman_watson(3, {0.5, 1}, {1}, {0.5, 2}, {0.5, 2}).pass);
}

TEST_CASE("Laplace inversion round trip") {
    const auto r = check_laplace_inversion({0.2, 1, 3, 5}, 1, 1);
    CHECK(r.pass);
    CHECK(r.rows.size() == 4);
}

TEST_CASE("transform and closed-form checks report failures") {
    CHECK(check_transform_identity(besq(), {{"n", 3}}, {0.5, 1, 2}, {1}, {1}).pass);
    const auto r = check_closed_form(get_entry("generic_apos"), {}, {1}, {1}, {1});
    CHECK_FALSE(r.pass);
    CHECK(r.note.find("no closed form") != std::string::npos);
}

TEST_CASE("reports") {
    VerificationReport r("demo", "exact", Criterion::relative, 1e-3);
    r.add(grid_label({{"x", 1.0}, {"y", 0.1}}), 2.0, 2.001);
    r.add("x=2", 1.0, 1.5);
    CHECK(r.rows[0].pass);
    CHECK_FALSE(r.rows[1].pass);
    CHECK_FALSE(r.pass);
    CHECK(r.max_rel_err == doctest::Approx(0.5));

    const auto csv = r.to_csv();
    CHECK(csv.rfind("identity,grid_point,reference,computed,abs_err,rel_err,pass\r\n", 0) == 0);
    CHECK(csv.find("\"x=1,y=0.1\"") != std::string::npos);
    CHECK(csv.find("2.001") != std::string::npos);

    VerificationReport e("errs", "none", Criterion::absolute, 1.0);
    e.add_error("p", "boom");
    const auto j = nlohmann::json::parse(reports_to_json({r, e}));
    CHECK(j["summary"]["total"] == 2);
    CHECK(j["summary"]["failed"] == 2);
    CHECK(j["reports"][1]["rows"][0]["computed"].is_null());
    CHECK(j["reports"][1]["note"] == "p: boom");

    VerificationReport mc("mc", "closed", Criterion::standard_errors, 3.0);
    mc.add("s", 1.0, 1.02, 0.01);
    mc.add("s", 1.0, 1.05, 0.01);
    CHECK(mc.rows[0].pass);
    CHECK_FALSE(mc.rows[1].pass);
}

TEST_CASE("suites") {
    const auto names = suite_names();
    CHECK(std::find(names.begin(), names.end(), "transform") != names.end());
    CHECK(std::find(names.begin(), names.end(), "all") != names.end());
    CHECK_THROWS_AS(run_suite("nope", {}), DomainError);
    SuiteOptions o;
    o.entry = "foo";
    CHECK_THROWS_AS(run_suite("transform", o), ValidityError);

    o.entry = "besq";
    const auto reports = run_suite("transform", o);
    REQUIRE(reports.size() == 2);
    for (const auto& r : reports) {
        CHECK(r.pass);
        CHECK(r.identity.rfind("besq", 0) == 0);
    }
    CHECK(std::is_sorted(reports.begin(), reports.end(),
                         [](const auto& a, const auto& b) { return a.identity < b.identity; }));
    // Bit-for-bit reproducible.
    CHECK(reports_to_json(reports) == reports_to_json(run_suite("transform", o)));

    o.mc_paths = 1000;
    o.mc_steps = 50;
    o.entry = "cir";
    const auto mc = run_suite("mc", o);
    REQUIRE(mc.size() == 1);
    CHECK(mc[0].rows.size() == 20);
}
