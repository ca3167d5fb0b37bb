#include "fksym/errors.hpp"
#include "fksym/symmetry.hpp"
#include "fksym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fksym {

namespace {

struct Case {
    std::string entry;
    Params params;
};

// Kernels that are probability densities (with δ atoms where present).
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

// Killed and unkilled variants; every entry appears at least once.
const std::vector<Case> riccati_cases = {
    {"besq", {}},
    {"besq", {{"n", 3}, {"mu", 0.2}}},
    {"besq", {{"n", 3}, {"b", 0.5}}},
    {"besq_cosh", {}},
    {"bessel", {{"mu", 0.6}}},
    {"bessel_drift", {{"mu", 0.5}}},
    {"cir", {}},
    {"cir", {{"mu", 0.3}, {"nu", 0.1}}},
    {"rational", {}},
    {"rational", {{"mu", 0.4}}},
    {"rational", {{"nu", 0.3}}},
    {"tanh", {{"mu", 0.5}}},
    {"radial_ou", {{"mu", 0.3}}},
    {"drift34", {}},
    {"sqrt_drift", {}},
    {"generic_a0", {}},
    {"generic_a0", {{"B", -0.3}, {"c2", 0.5}, {"mu", 0.1}}},
    {"generic_apos", {}},
};

struct LimitCase {
    Case base;  // parameters other than the limit parameter
    std::string param;
    std::string target_entry;  // empty: the same entry at param = 0
    Params target_params;
};

const std::vector<LimitCase> limit_cases = {
    {{"bessel", {{"a", 0.8}}}, "mu", "", {}},
    {{"bessel_drift", {{"a", 0.5}}}, "b", "bessel", {{"a", 1.0}}},
    {{"bessel_drift", {{"a", 1.0}, {"mu", 0.5}}}, "b", "", {}},
    {{"rational", {{"a", 2}}}, "nu", "", {}},
    {{"rational", {{"a", 2}}}, "mu", "", {}},
    {{"tanh", {}}, "mu", "", {}},
    {{"radial_ou", {{"a", 1.5}, {"b", -0.4}}}, "mu", "", {}},
    {{"besq", {{"n", 3}}}, "mu", "", {}},
    {{"besq", {{"n", 2.5}, {"mu", 0.3}}}, "b", "", {}},
};

// Entries 1-4 and 7: BESQ, Bessel, drifted Bessel, CIR and radial OU.
const std::vector<Case> chapman_cases = {
    {"besq", {{"n", 3}, {"b", 0.5}, {"mu", 0.3}}},
    {"bessel", {{"a", 0.8}, {"mu", 0.6}}},
    {"bessel_drift", {{"a", 0.5}, {"b", 1}, {"mu", 0.5}}},
    {"cir", {{"a", 1.5}, {"b", 0.8}, {"sigma", 0.7}, {"mu", 0.3}, {"nu", 0.2}}},
    {"radial_ou", {{"a", 1.5}, {"b", -0.4}, {"mu", 0.3}}},
};

struct McCase {
    Case c;
    McScheme scheme;
    bool simulate_square;
    double lambda, t, x;
};

const std::vector<McCase> mc_cases = {
    {{"besq", {{"n", 2}, {"b", 1}}}, McScheme::exact_besq, false, 0.5, 1.0, 1.0},
    {{"cir", {{"a", 2}, {"b", 1}, {"sigma", 1}, {"mu", 0.3}}},
     McScheme::euler_full_truncation, false, 1.0, 0.5, 1.0},
    {{"bessel", {{"a", 1}, {"mu", 0.6}}}, McScheme::euler_full_truncation, true, 0.5, 1.0, 1.0},
    {{"radial_ou", {{"a", 1.5}, {"b", -0.4}, {"mu", 0.3}}}, McScheme::euler_full_truncation, true,
     0.5, 1.0, 1.0},
};

// Parameter set for the Whittaker identity: Ψ's first parameter is -1, so Ψ is a polynomial.
const Params whittaker_params = {{"a", 4}, {"b", 0.7}, {"sigma", 1}, {"mu", 0.0375}, {"nu", -2.1875}};
const Params branch_params = {{"a", 1.5}, {"b", 1}, {"sigma", 1}, {"mu", 0.3}, {"nu", 0}};

struct Tagged {
    std::string entry;
    VerificationReport report;
};

std::string describe(const Case& c) {
    if (c.params.empty()) return c.entry;
    std::vector<std::pair<std::string, double>> kv(c.params.begin(), c.params.end());
    return c.entry + "(" + grid_label(kv) + ")";
}

// Prefix the identity with the parameter set so reports stay distinguishable.
VerificationReport labelled(VerificationReport r, const Case& c) {
    const auto pos = r.identity.find(' ');
    r.identity = describe(c) + (pos == std::string::npos ? "" : r.identity.substr(pos));
    return r;
}

bool wanted(const SuiteOptions& o, const std::string& entry) {
    return o.entry.empty() || o.entry == entry;
}

using SuiteFn = std::vector<Tagged> (*)(const SuiteOptions&);

std::vector<Tagged> suite_riccati(const SuiteOptions& o) {
    std::vector<Tagged> out;
    for (const auto& c : riccati_cases) {
        if (!wanted(o, c.entry)) continue;
        const auto& e = get_entry(c.entry);
        out.push_back({c.entry, labelled(check_riccati(e, c.params, 1e-10 * o.tolerance_scale,
                                                       1e-6 * o.tolerance_scale),
                                         c)});
    }
    return out;
}

std::vector<Tagged> suite_transform(const SuiteOptions& o) {
    std::vector<Tagged> out;
    for (const auto& c : transform_cases) {
        if (!wanted(o, c.entry)) continue;
        out.push_back({c.entry, labelled(check_transform_identity(get_entry(c.entry), c.params,
                                                                  {0.1, 0.5, 1, 2, 5}, {0.25, 1},
                                                                  {0.5, 1, 2}, 1e-8 * o.tolerance_scale),
                                         c)});
    }
    return out;
}

std::vector<Tagged> suite_normalization(const SuiteOptions& o) {
    const double tol = 1e-8 * o.tolerance_scale;
    std::vector<Tagged> out;
    for (const auto& c : density_cases) {
        if (!wanted(o, c.entry)) continue;
        out.push_back({c.entry, labelled(check_normalization(get_entry(c.entry), c.params,
                                                             {0.25, 1}, {0.5, 1, 2}, tol),
                                         c)});
    }
    auto cosh_mass = [](double t, double x) {
        return std::sqrt(2.0 * t / (std::numbers::pi * x)) * std::exp(-x / (2.0 * t)) +
               std::erf(std::sqrt(x / (2.0 * t)));
    };
    auto r = check_normalization(get_entry("besq_cosh"), {}, {0.25, 1}, {0.5, 1, 2}, tol, cosh_mass);
    r.identity = "besq_cosh mass defect";
    out.push_back({"besq_cosh", r});

    // Continuous part of the drift34 kernel against its closed-form defect.
    const auto& d34 = get_entry("drift34");
    const Params p{{"a", 1.0}, {"b", 1.0}};
    VerificationReport defect("drift34 continuous mass defect",
                              "1 - exp(-x/t) b (t + x) / (t (b + a x^2))", Criterion::absolute, tol);
    for (double t : {0.25, 1.0}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const auto point = grid_label({{"t", t}, {"x", x}});
            try {
                const auto k = kernel(d34, p, t, x);
                double order0 = 0.0;
                for (const auto& at : k.atoms) {
                    if (at.order == 0) order0 += at.weight;
                }
                const double ref = 1.0 - std::exp(-x / t) * (t + x) / (t * (1.0 + x * x));
                defect.add(point, ref, total_mass(d34, p, t, x) - order0);
            } catch (const std::exception& e) {
                defect.numerical_error |= dynamic_cast<const NumericalError*>(&e) != nullptr;
                defect.add_error(point, e.what());
            }
        }
    }
    out.push_back({"drift34", defect});
    return out;
}

std::vector<Tagged> suite_closed_form(const SuiteOptions& o) {
    std::vector<Tagged> out;
    for (const auto& c : closed_form_cases) {
        if (!wanted(o, c.entry)) continue;
        out.push_back({c.entry, labelled(check_closed_form(get_entry(c.entry), c.params, {0.1, 1, 5},
                                                           {0.25, 0.5, 1}, {0.5, 1, 2},
                                                           1e-8 * o.tolerance_scale),
                                         c)});
    }
    return out;
}

std::vector<Tagged> suite_pde(const SuiteOptions& o) {
    const double tol = 0.2 * o.tolerance_scale;
    std::vector<Tagged> out;
    std::vector<Case> cases = density_cases;
    cases.insert(cases.end(), transform_cases.begin(), transform_cases.end());
    cases.push_back({"generic_apos", {}});
    std::vector<std::string> seen;
    for (const auto& c : cases) {
        if (!wanted(o, c.entry)) continue;
        if (std::find(seen.begin(), seen.end(), describe(c)) != seen.end()) continue;
        seen.push_back(describe(c));
        out.push_back({c.entry, labelled(check_density_pde(get_entry(c.entry), c.params, {0.5, 1},
                                                           {0.7, 1.5}, {0.6, 1.8}, tol),
                                         c)});
    }

    const std::vector<std::pair<double, double>> points = {{0.7, 0.5}, {1.5, 1.0}};
    // Symmetry solutions from each entry's stationary solution (γ = 0 quadratic entries have
    // no stationary construction).
    for (const auto& c : riccati_cases) {
        if (!wanted(o, c.entry)) continue;
        const auto& e = get_entry(c.entry);
        try {
            const Params q = e.resolve(c.params);
            const auto d = e.diffusion(q);
            const auto g = e.potential(q);
            const auto rp = e.riccati(q);
            if (rp.family == RiccatiFamily::quadratic && d.gamma != 1.0) continue;
            const auto u0 = stationary_solution(d, g);
            const bool laplace = rp.family == RiccatiFamily::laplace;
            const auto U = laplace ? symmetry_thm31(d, g, u0, rp.A) : symmetry_eq51(d, g, u0, rp);
            for (double p : {0.0, 0.3}) {
                out.push_back({c.entry, labelled(check_solution_pde(
                                                     c.entry + (laplace ? " power-law" : " exponential") +
                                                         " symmetry solution at " + grid_label({{"p", p}}),
                                                     [&](double x, double t) { return U(p, x, t); }, d, g,
                                                     points, tol),
                                                 c)});
            }
            if (!laplace) {
                const auto V = symmetry_eq55(rp, d.sigma, [d](double x) { return d.F(x); });
                out.push_back({c.entry, labelled(check_solution_pde(
                                                     c.entry + " Tricomi symmetry solution",
                                                     [&](double x, double t) { return V(0.4, x, t); }, d, g,
                                                     points, tol),
                                                 c)});
            }
        } catch (const std::exception& ex) {
            VerificationReport r(describe(c) + " symmetry solution", "order 2", Criterion::absolute, tol);
            r.numerical_error = dynamic_cast<const NumericalError*>(&ex) != nullptr;
            r.add_error("construction", ex.what());
            out.push_back({c.entry, r});
        }
    }

    // γ = 2: f = c x with the log-constant family.
    DiffusionSpec d;
    d.gamma = 2.0;
    d.sigma = 0.6;
    d.drift = [](double x) { return 1.7 * x; };
    d.drift_antiderivative = [](double x) { return 1.7 * std::log(x); };
    const double A = ((1.7 - 0.6) * (1.7 - 0.6) - 0.36) / (4 * 0.6);
    StationarySolution one;
    one.eval = [](double) { return 1.0; };
    const auto U = symmetry_thm34(d, PotentialSpec::zero(), one, A);
    out.push_back({"", check_solution_pde("gamma=2 log-Gaussian symmetry solution",
                                          [&](double x, double t) { return U(0.35, x, t); }, d,
                                          PotentialSpec::zero(), {{1.8, 0.5}, {0.6, 0.3}}, tol)});
    return out;
}

std::vector<Tagged> suite_limits(const SuiteOptions& o) {
    std::vector<double> seq;
    for (int k = 0; k < 6; ++k) seq.push_back(0.02 / std::pow(2.0, k));
    std::vector<Tagged> out;
    for (const auto& lc : limit_cases) {
        if (!wanted(o, lc.base.entry)) continue;
        std::function<double(double)> target;
        if (!lc.target_entry.empty()) {
            target = [&](double y) {
                return density(get_entry(lc.target_entry), lc.target_params, 0.8, 1.2, y);
            };
        }
        auto r = check_limit_reduction(get_entry(lc.base.entry), lc.base.params, lc.param, seq, 0.8, 1.2,
                                       {0.3, 1.0, 2.5}, target, 1e-6 * o.tolerance_scale);
        out.push_back({lc.base.entry, labelled(r, lc.base)});
    }
    return out;
}

std::vector<Tagged> suite_chapman(const SuiteOptions& o) {
    std::vector<Tagged> out;
    for (const auto& c : chapman_cases) {
        if (!wanted(o, c.entry)) continue;
        out.push_back({c.entry, labelled(check_chapman_kolmogorov(get_entry(c.entry), c.params,
                                                                  {{0.5, 0.5}, {0.25, 1}}, {0.5, 1, 2},
                                                                  {0.5, 1, 2}, 1e-6 * o.tolerance_scale),
                                         c)});
    }
    return out;
}

std::vector<Tagged> suite_mc(const SuiteOptions& o) {
    constexpr int n_seeds = 20;
    constexpr double coverage = 0.95;
    std::vector<Tagged> out;
    for (const auto& m : mc_cases) {
        if (!wanted(o, m.c.entry)) continue;
        const auto& e = get_entry(m.c.entry);
        const Params q = e.resolve(m.c.params);
        const double reference = expectation(e, q, m.lambda, m.t, m.x);
        McSpec spec;
        spec.n_paths = o.mc_paths;
        spec.n_steps = o.mc_steps;
        spec.scheme = m.scheme;
        spec.simulate_square = m.simulate_square;
        VerificationReport agg(describe(m.c) + " Monte Carlo",
                               "closed-form expectation; pass when >= 95% of seeds lie within 3 SE",
                               Criterion::standard_errors, 3.0);
        for (int s = 0; s < n_seeds; ++s) {
            spec.seed = o.seed + static_cast<std::uint64_t>(s);
            const auto r = check_mc(m.c.entry, e.diffusion(q), e.potential(q), m.lambda, m.t, m.x,
                                    reference, spec, 3.0);
            for (const auto& row : r.rows) agg.rows.push_back(row);
            if (!r.note.empty()) agg.note += (agg.note.empty() ? "" : "; ") + r.note;
        }
        std::size_t hits = 0;
        for (const auto& row : agg.rows) {
            hits += row.pass ? 1 : 0;
            agg.max_abs_err = std::max(agg.max_abs_err, row.abs_err);
            agg.max_rel_err = std::max(agg.max_rel_err, row.rel_err);
        }
        agg.pass = hits >= coverage * n_seeds;
        agg.note += (agg.note.empty() ? "" : "; ") + std::to_string(hits) + "/" +
                    std::to_string(n_seeds) + " seeds within 3 SE";
        out.push_back({m.c.entry, agg});
    }
    return out;
}

std::vector<Tagged> suite_whittaker(const SuiteOptions& o) {
    std::vector<Tagged> out;
    out.push_back({"cir", check_whittaker_identity(whittaker_params, {0.5, 1, 2, 3, 5}, 1.0, 1.0,
                                                   1e-4 * o.tolerance_scale)});
    out.push_back({"cir", check_whittaker_branches(branch_params, {0.5, 1, 2, 5}, 1.0, 1.0,
                                                   1e-8 * o.tolerance_scale)});
    out.push_back({"", check_whittaker_laplace_reduction(
                           [](double y) { return y * std::exp(-y); }, 0.5, {0.5, 1, 2},
                           1e-8 * o.tolerance_scale)});
    return out;
}

std::vector<Tagged> suite_altrep(const SuiteOptions& o) {
    std::vector<Tagged> out;
    const double tol = 1e-6 * o.tolerance_scale;
    for (const auto& [xi, mu, lambda, t, x] :
         std::vector<std::tuple<double, double, double, double, double>>{
             {1, 1, 0.5, 1, 1}, {0.5, 2, 1, 0.7, 1.3}, {1.5, 0.3, 0.2, 0.5, 2}, {1, 1, 0, 1, 1}}) {
        out.push_back({"bessel", check_alt_representation(xi, mu, lambda, t, x, tol)});
    }
    return out;
}

std::vector<Tagged> suite_inversion(const SuiteOptions& o) {
    return {{"besq", check_laplace_inversion({0.2, 0.5, 1, 1.5, 2, 3, 4, 5}, 1.0, 1.0,
                                             1e-4 * o.tolerance_scale)}};
}

std::vector<Tagged> suite_hartman_watson(const SuiteOptions& o) {
    std::vector<Tagged> out;
    for (double n : {2.5, 3.0, 4.0}) {
        auto r = check_hartman_watson(n, {0.5, 1, 2}, {0.5, 1}, {0.5, 1, 2}, {0.5, 1, 2},
                                      1e-10 * o.tolerance_scale);
        r.identity = "besq(" + grid_label({{"n", n}}) + ") Hartman-Watson ratio";
        out.push_back({"besq", r});
    }
    return out;
}

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> r = {
        {"altrep", suite_altrep},       {"chapman", suite_chapman},
        {"closed_form", suite_closed_form}, {"hartman_watson", suite_hartman_watson},
        {"inversion", suite_inversion}, {"limits", suite_limits},
        {"mc", suite_mc},               {"normalization", suite_normalization},
        {"pde", suite_pde},             {"riccati", suite_riccati},
        {"transform", suite_transform}, {"whittaker", suite_whittaker},
    };
    return r;
}

} // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    names.push_back("all");
    return names;
}

std::vector<VerificationReport> run_suite(const std::string& suite, const SuiteOptions& options) {
    if (!options.entry.empty()) get_entry(options.entry);  // reject unknown names first
    std::vector<Tagged> tagged;
    if (suite == "all") {
        for (const auto& [name, fn] : registry()) {
            if (name == "mc") continue;  // minutes of runtime; run explicitly
            auto part = fn(options);
            tagged.insert(tagged.end(), part.begin(), part.end());
        }
    } else {
        const auto it = registry().find(suite);
        if (it == registry().end()) {
            std::string known;
            for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
            throw DomainError("unknown suite '" + suite + "' (available: " + known + ")");
        }
        tagged = it->second(options);
    }
    std::vector<VerificationReport> out;
    for (auto& t : tagged) {
        if (options.entry.empty() || t.entry == options.entry) out.push_back(std::move(t.report));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.identity < b.identity;
    });
    return out;
}

} // namespace fksym
