// Acceptance criteria. Each criterion runs the relevant verification suites and re-judges every
// row against a tolerance pinned here, independent of the suite defaults.
//
//   acceptance                 all criteria
//   acceptance --criterion 4   one criterion
//
// Prints one PASS/FAIL line per criterion; exits 1 if any fails.

#include "fksym/errors.hpp"
#include "fksym/verify.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace fksym;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Tally {
    std::size_t reports = 0, rows = 0, bad_rows = 0;
    double worst = 0.0;
    std::string first_failure;

    void row(const VerificationReport& r, const ReportRow& row, double err, bool ok) {
        ++rows;
        if (std::isfinite(err)) worst = std::max(worst, err);
        if (!ok) {
            ++bad_rows;
            if (first_failure.empty()) {
                first_failure = r.identity + " @ " + row.grid_point;
                if (!r.note.empty()) first_failure += " (" + r.note + ")";
            }
        }
    }

    Outcome outcome(const std::string& measure, double tol) const {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu reports, %zu rows, max %s %.3g, tol %.3g", reports, rows,
                      measure.c_str(), worst, tol);
        Outcome o;
        o.pass = reports > 0 && rows > 0 && bad_rows == 0;
        o.detail = buf;
        if (bad_rows) o.detail += "; " + std::to_string(bad_rows) + " failing, first: " + first_failure;
        if (reports == 0) o.detail += "; no reports";
        return o;
    }
};

std::vector<VerificationReport> suite(const std::string& name) {
    SuiteOptions o;
    o.tolerance_scale = 1.0;
    return run_suite(name, o);
}

// Every row must satisfy rel_err <= tol.
Outcome relative(const std::vector<VerificationReport>& reports, double tol) {
    Tally t;
    for (const auto& r : reports) {
        ++t.reports;
        for (const auto& row : r.rows) t.row(r, row, row.rel_err, row.rel_err <= tol);
    }
    return t.outcome("rel err", tol);
}

Outcome absolute(const std::vector<VerificationReport>& reports, double tol) {
    Tally t;
    for (const auto& r : reports) {
        ++t.reports;
        for (const auto& row : r.rows) t.row(r, row, row.abs_err, row.abs_err <= tol);
    }
    return t.outcome("abs err", tol);
}

Outcome c1_riccati() {
    constexpr double residual_tol = 1e-10, fit_tol = 1e-6;
    Tally t;
    for (const auto& r : suite("riccati")) {
        ++t.reports;
        for (const auto& row : r.rows) {
            if (row.grid_point == "residual") {
                t.row(r, row, row.computed, std::fabs(row.computed) < residual_tol);
            } else {
                const double err = std::fabs(row.computed - row.reference) /
                                   std::max(1.0, std::fabs(row.reference));
                t.row(r, row, err, err <= fit_tol);
            }
        }
    }
    auto o = t.outcome("residual or fit err", residual_tol);
    o.detail += ", fit tol 1e-06";
    return o;
}

Outcome c2_transform() { return relative(suite("transform"), 1e-8); }
Outcome c3_normalization() { return absolute(suite("normalization"), 1e-8); }

Outcome c4_inversion() { return relative(suite("inversion"), 1e-4); }

Outcome c5_pde() {
    constexpr double order_tol = 0.2;
    Tally t;
    for (const auto& r : suite("pde")) {
        ++t.reports;
        for (const auto& row : r.rows) {
            const double dev = std::fabs(row.computed - 2.0);
            t.row(r, row, dev, dev <= order_tol);
        }
    }
    return t.outcome("|order - 2|", order_tol);
}

Outcome c6_closed_form() { return relative(suite("closed_form"), 1e-8); }

// At least 95% of the 20 seeded runs of every case within 3 standard errors.
Outcome c7_monte_carlo() {
    constexpr double n_se = 3.0, min_fraction = 0.95;
    constexpr std::size_t paths = 100000, seeds = 20;
    constexpr int steps = 2000;
    SuiteOptions o;
    o.mc_paths = paths;
    o.mc_steps = steps;
    const auto reports = run_suite("mc", o);
    Outcome out;
    out.pass = !reports.empty();
    std::string detail;
    for (const auto& r : reports) {
        std::size_t hits = 0;
        double worst = 0.0;
        for (const auto& row : r.rows) {
            const double z = row.abs_err / row.standard_error;
            if (std::isfinite(z)) worst = std::max(worst, z);
            hits += z <= n_se;
        }
        const bool ok = r.rows.size() == seeds &&
                        static_cast<double>(hits) >= min_fraction * static_cast<double>(seeds);
        out.pass = out.pass && ok;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s%s %zu/%zu within %.0f SE (max %.2f SE)",
                      detail.empty() ? "" : "; ", r.identity.c_str(), hits, r.rows.size(), n_se,
                      worst);
        detail += buf;
    }
    out.detail = std::to_string(paths) + " paths, " + std::to_string(steps) + " steps: " + detail;
    return out;
}

Outcome c8_limits() { return relative(suite("limits"), 1e-6); }
Outcome c9_chapman() { return relative(suite("chapman"), 1e-6); }
Outcome c10_whittaker() { return relative(suite("whittaker"), 1e-4); }
Outcome c11_hartman_watson() { return relative(suite("hartman_watson"), 1e-10); }

struct CriterionDef {
    std::string title;
    std::function<Outcome()> run;
};

const std::map<int, CriterionDef>& criteria() {
    static const std::map<int, CriterionDef> m = {
        {1, {"Riccati constants", c1_riccati}},
        {2, {"transform identities", c2_transform}},
        {3, {"normalization and mass defects", c3_normalization}},
        {4, {"Laplace inversion round trip", c4_inversion}},
        {5, {"PDE residual order", c5_pde}},
        {6, {"closed form vs quadrature", c6_closed_form}},
        {7, {"Monte Carlo", c7_monte_carlo}},
        {8, {"limit reductions", c8_limits}},
        {9, {"Chapman-Kolmogorov", c9_chapman}},
        {10, {"Whittaker transform identity", c10_whittaker}},
        {11, {"Hartman-Watson ratio", c11_hartman_watson}},
    };
    return m;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (const auto& [n, def] : criteria()) {
        if (only && n != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = def.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %-32s %s  %s [%.1f s]\n", n, def.title.c_str(),
                    o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
