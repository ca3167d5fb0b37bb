// fksym: densities, Feynman-Kac expectations and verification suites from the command line.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or validity error, 3 numerical error.

#include "fksym/catalog.hpp"
#include "fksym/errors.hpp"
#include "fksym/verify.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using fksym::Params;
using ojson = nlohmann::ordered_json;

constexpr int kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_number(const std::string& s, const std::string& what) {
    const char* b = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(b, &end);
    if (s.empty() || end != b + s.size() || !std::isfinite(v)) {
        throw UsageError(what + ": '" + s + "' is not a finite number");
    }
    return v;
}

// start:stop:step, inclusive of stop up to rounding.
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError(what + ": expected start:stop:step, got '" + spec + "'");
    const double a = parse_number(parts[0], what), b = parse_number(parts[1], what),
                 h = parse_number(parts[2], what);
    if (!(h > 0.0) || b < a) throw UsageError(what + ": need step > 0 and stop >= start");
    const double n = std::floor((b - a) / h + 1e-9);
    if (n > 1e7) throw UsageError(what + ": grid has more than 1e7 points");
    std::vector<double> g;
    for (long i = 0; i <= static_cast<long>(n); ++i) g.push_back(a + static_cast<double>(i) * h);
    return g;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
    return out + "\r\n";
}

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

// Entry parameters arrive as leftover `--name value` or `--name=value` tokens. A `--name-grid`
// token is accepted only where `grids` is non-null.
Params parse_entry_params(const fksym::CatalogEntry& e, const std::vector<std::string>& extras,
                          std::vector<std::pair<std::string, std::vector<double>>>* grids) {
    std::vector<std::string> known;
    for (const auto& p : e.parameters()) known.push_back(p.name);
    auto known_list = [&] {
        std::string s;
        for (const auto& k : known) s += (s.empty() ? "" : ", ") + k;
        return s.empty() ? std::string("none") : s;
    };
    Params out;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& tok = extras[i];
        if (tok.rfind("--", 0) != 0 || tok.size() < 3) {
            throw UsageError("unexpected argument '" + tok + "'");
        }
        std::string name = tok.substr(2), value;
        if (const auto eq = name.find('='); eq != std::string::npos) {
            value = name.substr(eq + 1);
            name = name.substr(0, eq);
        } else {
            if (i + 1 >= extras.size()) throw UsageError("parameter --" + name + " needs a value");
            value = extras[++i];
        }
        bool is_grid = false;
        if (grids && name.size() > 5 && name.ends_with("-grid")) {
            name.resize(name.size() - 5);
            is_grid = true;
        }
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw fksym::ValidityError("entry '" + e.name() + "' has no parameter '" + name +
                                       "' (parameters: " + known_list() + ")");
        }
        if (out.count(name) || (grids && std::any_of(grids->begin(), grids->end(),
                                                      [&](const auto& g) { return g.first == name; }))) {
            throw UsageError("parameter --" + name + " given twice");
        }
        if (is_grid) {
            grids->emplace_back(name, parse_grid(value, "--" + name + "-grid"));
        } else {
            out[name] = parse_number(value, "--" + name);
        }
    }
    return out;
}

double default_tolerance_scale() {
    const char* env = std::getenv("FKSYM_TOL_SCALE");
    if (!env || !*env) return 1.0;
    const double v = parse_number(env, "FKSYM_TOL_SCALE");
    if (!(v > 0.0)) throw UsageError("FKSYM_TOL_SCALE must be > 0");
    return v;
}

struct Output {
    std::string text;
    int code = kPass;
    std::string summary;  // stderr line
};

// density

struct DensityArgs {
    std::string entry, format = "csv";
    double t = 0, x = 0;
    std::vector<double> y;
    std::string y_grid;
    bool check_mass = false;
};

Output cmd_density(const DensityArgs& a, const std::vector<std::string>& extras, double tol_scale) {
    const auto& e = fksym::get_entry(a.entry);
    const Params p = e.resolve(parse_entry_params(e, extras, nullptr));
    e.validate(p);
    std::vector<double> ys = a.y;
    if (!a.y_grid.empty()) {
        const auto g = parse_grid(a.y_grid, "--y-grid");
        ys.insert(ys.end(), g.begin(), g.end());
    }
    if (ys.empty()) throw UsageError("density: give --y or --y-grid");

    struct Row {
        double y, dens, logd;
    };
    std::vector<Row> rows;
    for (double y : ys) {
        const auto lv = fksym::log_density(e, p, a.t, a.x, y);
        rows.push_back({y, lv.value(), lv.sign == 0.0 ? -INFINITY : lv.log_abs});
    }
    const auto atoms = e.atoms(p, a.t, a.x);

    std::optional<double> mass;
    bool mass_ok = true;
    const double mass_tol = 1e-8 * tol_scale;
    if (a.check_mass) {
        mass = fksym::total_mass(e, p, a.t, a.x);
        // Killed or sub-Markov kernels have mass < 1 by construction.
        if (e.is_transition_density(p)) mass_ok = std::fabs(*mass - 1.0) <= mass_tol;
    }

    Output out;
    out.code = mass_ok ? kPass : kFail;
    if (a.format == "json") {
        ojson j;
        j["entry"] = e.name();
        j["params"] = ojson::object();
        for (const auto& [k, v] : p) j["params"][k] = v;
        j["rows"] = ojson::array();
        for (const auto& r : rows) {
            j["rows"].push_back({{"t", a.t}, {"x", a.x}, {"y", r.y}, {"density", num(r.dens)},
                                 {"log_density", num(r.logd)}});
        }
        j["atoms"] = ojson::array();
        for (const auto& at : atoms) {
            j["atoms"].push_back(
                {{"location", at.location}, {"order", at.order}, {"weight", num(at.weight)}});
        }
        if (mass) {
            j["mass"] = {{"total_mass", num(*mass)},
                         {"transition_density", e.is_transition_density(p)},
                         {"tolerance", mass_tol},
                         {"pass", mass_ok}};
        }
        out.text = j.dump(2) + "\n";
        return out;
    }
    out.text = csv_row({"t", "x", "y", "density", "log_density"});
    for (const auto& r : rows) out.text += csv_row({fmt(a.t), fmt(a.x), fmt(r.y), fmt(r.dens), fmt(r.logd)});
    out.text += "\r\n" + csv_row({"atom_location", "atom_order", "atom_weight"});
    for (const auto& at : atoms) {
        out.text += csv_row({fmt(at.location), std::to_string(at.order), fmt(at.weight)});
    }
    if (mass) {
        out.text += "\r\n" + csv_row({"total_mass", "transition_density", "tolerance", "pass"});
        out.text += csv_row({fmt(*mass), e.is_transition_density(p) ? "true" : "false", fmt(mass_tol),
                             mass_ok ? "true" : "false"});
    }
    return out;
}

// expect

struct ExpectArgs {
    std::string entry, format = "csv";
    double t = 0, x = 0;
    std::vector<double> lambda;
    std::string lambda_grid;
    bool quadrature = false;
};

Output cmd_expect(const ExpectArgs& a, const std::vector<std::string>& extras) {
    const auto& e = fksym::get_entry(a.entry);
    std::vector<std::pair<std::string, std::vector<double>>> grids;
    const Params base = parse_entry_params(e, extras, &grids);
    std::vector<double> lambdas = a.lambda;
    if (!a.lambda_grid.empty()) {
        const auto g = parse_grid(a.lambda_grid, "--lambda-grid");
        lambdas.insert(lambdas.end(), g.begin(), g.end());
    }
    if (lambdas.empty()) throw UsageError("expect: give --lambda or --lambda-grid");

    // The μ grid, if any, is handled by joint_laplace_in_mu as the innermost loop.
    std::optional<std::vector<double>> mu_grid;
    for (auto it = grids.begin(); it != grids.end(); ++it) {
        if (it->first == "mu") {
            mu_grid = it->second;
            grids.erase(it);
            break;
        }
    }
    std::vector<std::string> cols{"lambda"};
    for (const auto& g : grids) cols.push_back(g.first);
    if (mu_grid) cols.push_back("mu");
    cols.insert(cols.end(), {"t", "x", "expectation"});

    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> idx(grids.size(), 0);
    for (double lam : lambdas) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            Params p = base;
            std::vector<double> row{lam};
            for (std::size_t k = 0; k < grids.size(); ++k) {
                p[grids[k].first] = grids[k].second[idx[k]];
                row.push_back(grids[k].second[idx[k]]);
            }
            if (mu_grid) {
                for (const auto& [mu, v] : fksym::joint_laplace_in_mu(e, p, lam, a.t, a.x, *mu_grid)) {
                    auto r = row;
                    r.insert(r.end(), {mu, a.t, a.x, v});
                    rows.push_back(std::move(r));
                }
            } else {
                const double v = a.quadrature ? fksym::expectation_quadrature(e, p, lam, a.t, a.x)
                                              : fksym::expectation(e, p, lam, a.t, a.x);
                row.insert(row.end(), {a.t, a.x, v});
                rows.push_back(std::move(row));
            }
            // Odometer over the parameter grids, last grid fastest.
            std::size_t k = grids.size();
            while (k > 0 && ++idx[k - 1] == grids[k - 1].second.size()) idx[--k] = 0;
            if (k == 0) break;
        }
    }

    Output out;
    if (a.format == "json") {
        ojson j;
        j["entry"] = e.name();
        j["params"] = ojson::object();
        for (const auto& [k, v] : e.resolve(base)) {
            const bool gridded = (mu_grid && k == "mu") ||
                                 std::any_of(grids.begin(), grids.end(),
                                             [&](const auto& g) { return g.first == k; });
            if (!gridded) j["params"][k] = v;
        }
        j["rows"] = ojson::array();
        for (const auto& r : rows) {
            ojson o;
            for (std::size_t c = 0; c < cols.size(); ++c) o[cols[c]] = num(r[c]);
            j["rows"].push_back(std::move(o));
        }
        out.text = j.dump(2) + "\n";
        return out;
    }
    out.text = csv_row(cols);
    for (const auto& r : rows) {
        std::vector<std::string> cells;
        for (double v : r) cells.push_back(fmt(v));
        out.text += csv_row(cells);
    }
    return out;
}

// verify

struct VerifyArgs {
    std::string suite = "all", entry, format = "csv";
    std::size_t paths = 100000;
    int steps = 2000;
    std::uint64_t seed = 7;
    std::optional<double> tol_scale;
};

Output cmd_verify(const VerifyArgs& a, double env_tol_scale) {
    const auto names = fksym::suite_names();
    if (std::find(names.begin(), names.end(), a.suite) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw UsageError("unknown suite '" + a.suite + "' (suites: " + list + ")");
    }
    fksym::SuiteOptions o;
    o.entry = a.entry;
    o.mc_paths = a.paths;
    o.mc_steps = a.steps;
    o.seed = a.seed;
    o.tolerance_scale = a.tol_scale.value_or(env_tol_scale);
    if (!(o.tolerance_scale > 0.0)) throw UsageError("--tol-scale must be > 0");

    const auto reports = fksym::run_suite(a.suite, o);
    std::size_t passed = 0, inconclusive = 0;
    bool numerical = false;
    for (const auto& r : reports) {
        passed += r.pass;
        inconclusive += r.inconclusive;
        numerical = numerical || (!r.pass && r.numerical_error);
    }
    Output out;
    out.text = a.format == "json" ? fksym::reports_to_json(reports) : fksym::reports_to_csv(reports);
    if (!out.text.empty() && out.text.back() != '\n') out.text += "\n";
    out.code = numerical ? kNumerical : passed == reports.size() ? kPass : kFail;
    out.summary = "suite " + a.suite + ": " + std::to_string(reports.size()) + " reports, " +
                  std::to_string(passed) + " passed, " + std::to_string(reports.size() - passed) +
                  " failed, " + std::to_string(inconclusive) + " inconclusive";
    return out;
}

void add_format(CLI::App* sub, std::string& format) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transition densities, Feynman-Kac expectations and verification suites"};
    app.require_subcommand(0, 1);
    bool manifest = false;
    app.add_flag("--manifest", manifest, "Print the catalog manifest as JSON");

    DensityArgs da;
    auto* dens = app.add_subcommand("density", "Transition density rows and boundary atoms");
    dens->allow_extras();
    dens->add_option("--entry", da.entry, "Catalog entry")->required();
    dens->add_option("--t", da.t, "Time")->required();
    dens->add_option("--x", da.x, "Starting point")->required();
    dens->add_option("--y", da.y, "Target point(s)");
    dens->add_option("--y-grid", da.y_grid, "Target grid start:stop:step");
    dens->add_flag("--check-mass", da.check_mass, "Append total mass; fail if a transition density "
                                                  "does not integrate to 1");
    add_format(dens, da.format);
    dens->footer("Entry parameters are passed as --<name> <value>.");

    ExpectArgs ea;
    auto* expect = app.add_subcommand("expect", "E_x[exp(-lambda X_t^m - int_0^t g(X_s) ds)]");
    expect->allow_extras();
    expect->add_option("--entry", ea.entry, "Catalog entry")->required();
    expect->add_option("--t", ea.t, "Time")->required();
    expect->add_option("--x", ea.x, "Starting point")->required();
    expect->add_option("--lambda", ea.lambda, "Transform variable(s)");
    expect->add_option("--lambda-grid", ea.lambda_grid, "Transform grid start:stop:step");
    expect->add_flag("--quadrature", ea.quadrature, "Integrate the density instead of the closed form");
    add_format(expect, ea.format);
    expect->footer("Entry parameters are passed as --<name> <value> or --<name>-grid start:stop:step.");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--suite", va.suite, "Suite name")->capture_default_str();
    verify->add_option("--entry", va.entry, "Restrict to one catalog entry");
    verify->add_option("--paths", va.paths, "Monte Carlo paths")->capture_default_str()->check(
        CLI::Range(std::size_t{2}, std::size_t{100000000}));
    verify->add_option("--steps", va.steps, "Monte Carlo time steps")->capture_default_str()->check(
        CLI::Range(1, 10000000));
    verify->add_option("--seed", va.seed, "Monte Carlo seed")->capture_default_str();
    verify->add_option("--tol-scale", va.tol_scale,
                       "Multiply every tolerance (default: $FKSYM_TOL_SCALE or 1)");
    add_format(verify, va.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (manifest) {
            std::cout << fksym::manifest_json() << "\n";
            return kPass;
        }
        const double env_scale = default_tolerance_scale();
        Output out;
        if (*dens) {
            out = cmd_density(da, dens->remaining(), env_scale);
        } else if (*expect) {
            out = cmd_expect(ea, expect->remaining());
        } else if (*verify) {
            out = cmd_verify(va, env_scale);
        } else {
            std::cerr << app.help();
            return kUsage;
        }
        std::cout << out.text;
        if (!out.summary.empty()) std::cerr << out.summary << "\n";
        return out.code;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const fksym::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const fksym::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
