#include "fksym/errors.hpp"
#include "fksym/specfun.hpp"
#include "fksym/symmetry.hpp"
#include "fksym/verify.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fksym {

namespace {

template <typename F>
void guarded(VerificationReport& r, const std::string& point, F&& body) {
    try {
        body();
    } catch (const NumericalError& e) {
        r.numerical_error = true;
        r.add_error(point, e.what());
    } catch (const std::exception& e) {
        r.add_error(point, e.what());
    }
}

// Constants of the quadratic family for a CIR-type entry (drift a - bx, killing μx + ν/x).
struct QuadraticSetup {
    Params q;
    DiffusionSpec diff;
    double sigma, A, B, C, sqrtA, beta;
};

QuadraticSetup quadratic_setup(const Params& cir_params) {
    const auto& e = get_entry("cir");
    QuadraticSetup s;
    s.q = e.resolve(cir_params);
    s.diff = e.diffusion(s.q);
    const auto r = e.riccati(s.q);
    s.sigma = s.q.at("sigma");
    s.A = r.A;
    s.B = r.B;
    s.C = r.C;
    s.sqrtA = std::sqrt(r.A);
    s.beta = 1.0 + std::sqrt(1.0 + 2.0 * r.C / (s.sigma * s.sigma));
    return s;
}

// Symmetry image of the stationary solution x^{β/2} e^{-(F+√Ax)/2σ} w(√Ax/σ), with
// w_scaled(z) = e^{-z} w(z) so that large arguments do not overflow.
double branch_solution(const QuadraticSetup& s, const std::function<double(double)>& w_scaled,
                       double eps, double x, double t) {
    const double E = std::exp(s.sqrtA * t), D = E - eps;
    const double Z = s.sqrtA * x * E / (s.sigma * D);
    const double log_part = -s.B * t / (2.0 * s.sigma) +
                            (s.B / (2.0 * s.sigma * s.sqrtA) - 0.5 * s.beta) * std::log(D) +
                            0.5 * s.beta * (s.sqrtA * t + std::log(x)) -
                            s.diff.F(x) / (2.0 * s.sigma) -
                            s.sqrtA * x * (E + eps) / (2.0 * s.sigma * D) + Z;
    return std::exp(log_part) * w_scaled(Z);
}

// Quadratic-family kernel with Bessel index `index` (±ν).
double quadratic_kernel(const QuadraticSetup& s, double index, double t, double x, double y) {
    const double h = 0.5 * s.sqrtA * t;
    const double z = s.sqrtA * std::sqrt(x * y) / (s.sigma * std::sinh(h));
    const double log_part = std::log(s.sqrtA / (2.0 * s.sigma * std::sinh(h))) +
                            (s.diff.F(y) - s.diff.F(x)) / (2.0 * s.sigma) +
                            0.5 * std::log(x / y) - s.B * t / (2.0 * s.sigma) -
                            s.sqrtA * (x + y) / (2.0 * s.sigma * std::tanh(h)) + z;
    return std::exp(log_part) * specfun::bessel_i_scaled(index, z);
}

// Value at 0 of the polynomial through (s_i, v_i).
double neville_at_zero(const std::vector<double>& s, std::vector<double> v) {
    for (std::size_t m = 1; m < v.size(); ++m) {
        for (std::size_t i = 0; i + m < v.size(); ++i) {
            v[i] = (s[i] * v[i + 1] - s[i + m] * v[i]) / (s[i] - s[i + m]);
        }
    }
    return v[0];
}

} // namespace

VerificationReport check_transform_identity(const CatalogEntry& entry, const Params& params,
                                            const std::vector<double>& lambdas,
                                            const std::vector<double>& ts,
                                            const std::vector<double>& xs, double tol) {
    VerificationReport r(entry.name() + " transform identity",
                         "closed-form right-hand side; computed is quadrature of the left side",
                         Criterion::relative, tol);
    for (double t : ts) {
        for (double x : xs) {
            for (double lambda : lambdas) {
                const auto point = grid_label({{"lambda", lambda}, {"t", t}, {"x", x}});
                guarded(r, point, [&] {
                    r.add(point, transform_rhs(entry, params, lambda, t, x),
                          transform_lhs(entry, params, lambda, t, x));
                });
            }
        }
    }
    return r;
}

VerificationReport check_normalization(const CatalogEntry& entry, const Params& params,
                                       const std::vector<double>& ts,
                                       const std::vector<double>& xs, double tol,
                                       const std::function<double(double, double)>& expected) {
    VerificationReport r(entry.name() + " normalization",
                         expected ? "closed-form mass" : "unit mass", Criterion::absolute, tol);
    for (double t : ts) {
        for (double x : xs) {
            const auto point = grid_label({{"t", t}, {"x", x}});
            guarded(r, point, [&] {
                r.add(point, expected ? expected(t, x) : 1.0, total_mass(entry, params, t, x));
            });
        }
    }
    return r;
}

VerificationReport check_closed_form(const CatalogEntry& entry, const Params& params,
                                     const std::vector<double>& lambdas,
                                     const std::vector<double>& ts, const std::vector<double>& xs,
                                     double tol) {
    VerificationReport r(entry.name() + " closed-form expectation",
                         "quadrature of the observable against density and atoms",
                         Criterion::relative, tol);
    const Params q = entry.resolve(params);
    for (double t : ts) {
        for (double x : xs) {
            for (double lambda : lambdas) {
                const auto point = grid_label({{"lambda", lambda}, {"t", t}, {"x", x}});
                guarded(r, point, [&] {
                    const auto closed = entry.expectation_closed(q, lambda, t, x);
                    if (!closed) throw CapabilityError("no closed form at this point");
                    r.add(point, expectation_quadrature(entry, params, lambda, t, x), *closed);
                });
            }
        }
    }
    return r;
}

VerificationReport check_limit_reduction(const CatalogEntry& entry, const Params& params,
                                         const std::string& param_name,
                                         const std::vector<double>& sequence, double t, double x,
                                         const std::vector<double>& ys,
                                         const std::function<double(double)>& target, double tol) {
    if (sequence.size() < 3) throw DomainError("limit sequence needs at least 3 values");
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        if (!(sequence[i] > 0.0) || (i > 0 && !(sequence[i] < sequence[i - 1]))) {
            throw DomainError("limit sequence must be positive and strictly decreasing");
        }
    }
    VerificationReport r(entry.name() + " " + param_name + "->0 limit",
                         target ? "limit density" : entry.name() + " at " + param_name + " = 0",
                         Criterion::relative, tol);
    for (double y : ys) {
        const auto point = grid_label({{"t", t}, {"x", x}, {"y", y}});
        guarded(r, point, [&] {
            Params p = params;
            p[param_name] = 0.0;
            const double T = target ? target(y) : density(entry, p, t, x, y);
            std::vector<double> v;
            for (double s : sequence) {
                p[param_name] = s;
                v.push_back(density(entry, p, t, x, y));
            }
            bool monotone = true;
            const double noise = 1e-14 * std::max(1.0, std::fabs(T));
            for (std::size_t i = 1; i < v.size(); ++i) {
                if (std::fabs(v[i] - T) > std::fabs(v[i - 1] - T) + noise) monotone = false;
            }
            const double lim = neville_at_zero(sequence, v);
            const double rel = std::fabs(lim - T) / std::max(std::fabs(T), 1e-300);
            if (!monotone && !(rel < tol)) {
                r.inconclusive = true;
                r.note += (r.note.empty() ? "" : "; ") + point + ": non-monotone error sequence";
                r.add_judged(point, T, lim, true);
            } else {
                r.add(point, T, lim);
            }
        });
    }
    return r;
}

VerificationReport check_alt_representation(double xi, double mu, double lambda, double t,
                                            double x, double tol) {
    VerificationReport r("bessel alternative representation",
                         "hypergeometric closed form; computed is the v-integral representation",
                         Criterion::relative, tol);
    const auto point =
        grid_label({{"xi", xi}, {"mu", mu}, {"lambda", lambda}, {"t", t}, {"x", x}});
    guarded(r, point, [&] {
        if (!(xi > 0.0)) throw ValidityError("alt representation: requires xi > 0");
        const double closed =
            expectation(get_entry("bessel"), {{"a", xi + 0.5}, {"mu", 2.0 * mu * mu}}, lambda, t, x);
        const double g = std::sqrt(xi * xi + mu * mu);
        const double p = 0.5 * (g - xi);
        const double u0 = 1.0 / (1.0 + 2.0 * lambda * t);
        double rep;
        if (p == 0.0) {
            rep = std::pow(u0, 1.0 + xi) * std::exp(-x * x * lambda * u0);
        } else {
            // u = 1/(1 + 2(v+λ)t) = u0 - s maps v ∈ (0, ∞) onto s ∈ (0, u0).
            auto f = [&](double s) {
                if (s <= 0.0 || s >= u0) return 0.0;
                const double u = u0 - s;
                const double v = s / (2.0 * t * u0 * u);
                return std::exp((p - 1.0) * std::log(v) - x * x * (1.0 - u) / (2.0 * t) +
                                (g - 1.0) * std::log(u)) /
                       (2.0 * t);
            };
            QuadratureSpec spec;
            spec.singular_power = std::max(0.0, 1.0 - p);
            rep = std::exp((g - xi) * std::log(x) - std::lgamma(p)) *
                  integrate_interval(f, 0.0, u0, spec);
        }
        r.add(point, closed, rep);
    });
    return r;
}

VerificationReport check_chapman_kolmogorov(const CatalogEntry& entry, const Params& params,
                                            const std::vector<std::pair<double, double>>& times,
                                            const std::vector<double>& xs,
                                            const std::vector<double>& ys, double tol) {
    VerificationReport r(entry.name() + " Chapman-Kolmogorov", "density at s + t",
                         Criterion::relative, tol);
    const Params q = entry.resolve(params);
    for (const auto& [s, t] : times) {
        for (double x : xs) {
            for (double y : ys) {
                const auto point = grid_label({{"s", s}, {"t", t}, {"x", x}, {"y", y}});
                guarded(r, point, [&] {
                    auto f = [&](double z) {
                        if (z <= 0.0) return 0.0;
                        return entry.log_density(q, s, x, z).value() *
                               entry.log_density(q, t, z, y).value();
                    };
                    QuadratureSpec spec;
                    spec.scale = entry.quadrature_scale(q, s + t, std::max(x, y));
                    spec.singular_power = entry.density_singular_power(q);
                    r.add(point, density(entry, q, s + t, x, y), integrate_semi_infinite(f, spec));
                });
            }
        }
    }
    return r;
}

VerificationReport check_solution_pde(const std::string& identity,
                                      const std::function<double(double, double)>& u,
                                      const DiffusionSpec& diff, const PotentialSpec& pot,
                                      const std::vector<std::pair<double, double>>& points,
                                      double tol) {
    VerificationReport r(identity + " PDE residual order", "order 2", Criterion::absolute, tol);
    for (const auto& [x, t] : points) {
        const auto point = grid_label({{"x", x}, {"t", t}});
        guarded(r, point, [&] {
            const auto rc = pde_residual_convergence(u, diff, pot, x, t);
            const double order = rc.exact ? 2.0 : 0.5 * (rc.order[0] + rc.order[1]);
            r.add_judged(point, 2.0, order, rc.passes(tol));
            if (rc.exact) r.note += (r.note.empty() ? "" : "; ") + point + ": residual at roundoff";
        });
    }
    return r;
}

VerificationReport check_density_pde(const CatalogEntry& entry, const Params& params,
                                     const std::vector<double>& ts, const std::vector<double>& xs,
                                     const std::vector<double>& ys, double tol) {
    const Params q = entry.resolve(params);
    const auto diff = entry.diffusion(q);
    const auto pot = entry.potential(q);
    VerificationReport r(entry.name() + " density PDE residual order",
                         "order 2 in backward variables", Criterion::absolute, tol);
    for (double y : ys) {
        auto u = [&](double x, double t) { return entry.log_density(q, t, x, y).value(); };
        std::vector<std::pair<double, double>> pts;
        for (double t : ts) {
            for (double x : xs) pts.emplace_back(x, t);
        }
        auto sub = check_solution_pde(entry.name(), u, diff, pot, pts, tol);
        for (auto& row : sub.rows) {
            row.grid_point += ",y=" + grid_label({{"", y}}).substr(1);
            r.add_judged(row.grid_point, row.reference, row.computed, row.pass);
        }
        if (!sub.note.empty()) r.note += (r.note.empty() ? "" : "; ") + sub.note;
    }
    return r;
}

VerificationReport check_riccati(const CatalogEntry& entry, const Params& params, double tol,
                                 double fit_tol) {
    VerificationReport r(entry.name() + " Riccati constants",
                         "zero residual; documented constants for the fit",
                         Criterion::absolute, tol);
    const Params q = entry.resolve(params);
    const auto diff = entry.diffusion(q);
    const auto pot = entry.potential(q);
    const auto want = entry.riccati(q);
    guarded(r, "residual", [&] {
        double worst = 0.0;
        for (double x : log_grid(1e-2, 1e2, 50)) {
            const double scale = std::max(1.0, std::fabs(riccati_lhs(diff, pot, x)));
            worst = std::max(worst, std::fabs(riccati_residual(diff, pot, want, x)) / scale);
        }
        r.add_judged("residual", 0.0, worst, worst < tol);
    });
    guarded(r, "fit", [&] {
        const auto fit = fit_riccati(diff, pot, log_grid(1e-2, 1e1, 40));
        if (!fit) throw ConvergenceError("fit_riccati found no family");
        if (fit->family != want.family) {
            throw ConvergenceError("fit_riccati chose " + to_string(fit->family) + ", expected " +
                                   to_string(want.family));
        }
        const std::pair<const char*, std::pair<double, double>> consts[] = {
            {"A", {want.A, fit->A}}, {"B", {want.B, fit->B}}, {"C", {want.C, fit->C}}};
        for (const auto& [name, vals] : consts) {
            const double err = std::fabs(vals.second - vals.first) / std::max(1.0, std::fabs(vals.first));
            r.add_judged(std::string("fit ") + name, vals.first, vals.second, err < fit_tol);
        }
    });
    return r;
}

VerificationReport check_hartman_watson(double n, const std::vector<double>& mus,
                                        const std::vector<double>& ts,
                                        const std::vector<double>& xs,
                                        const std::vector<double>& ys, double tol) {
    VerificationReport r("besq Hartman-Watson ratio", "Bessel-function ratio",
                         Criterion::relative, tol);
    const auto& besq = get_entry("besq");
    const double nu = std::fabs(0.5 * n - 1.0);
    for (double mu : mus) {
        for (double t : ts) {
            for (double x : xs) {
                for (double y : ys) {
                    const auto point = grid_label({{"mu", mu}, {"t", t}, {"x", x}, {"y", y}});
                    guarded(r, point, [&] {
                        const auto lq = log_density(besq, {{"n", n}, {"mu", 0.5 * mu * mu}}, t, x, y);
                        const auto lp = log_density(besq, {{"n", n}}, t, x, y);
                        const double z = std::sqrt(x * y) / t;
                        const double expected =
                            std::exp(specfun::log_bessel_i(std::sqrt(mu * mu + nu * nu), z) -
                                     specfun::log_bessel_i(nu, z));
                        r.add(point, expected, std::exp(lq.log_abs - lp.log_abs));
                    });
                }
            }
        }
    }
    return r;
}

VerificationReport check_laplace_inversion(const std::vector<double>& ys, double t, double x,
                                           double tol, int order) {
    VerificationReport r("besq(3) Laplace inversion", "closed-form density",
                         Criterion::relative, tol);
    const auto& besq = get_entry("besq");
    const Params p{{"n", 3.0}};
    auto Phi = [&](double lambda) { return transform_rhs(besq, p, lambda, t, x); };
    for (double y : ys) {
        const auto point = grid_label({{"t", t}, {"x", x}, {"y", y}});
        guarded(r, point, [&] { r.add(point, density(besq, p, t, x, y), laplace_invert(Phi, y, order).value); });
    }
    return r;
}

VerificationReport check_whittaker_identity(const Params& cir_params,
                                            const std::vector<double>& lambdas, double t,
                                            double x, double tol) {
    VerificationReport r("cir Whittaker transform identity",
                         "lambda^{B/(sigma sqrt A)} times the Tricomi symmetry solution",
                         Criterion::relative, tol);
    const auto& cir = get_entry("cir");
    const auto s = quadratic_setup(cir_params);
    const auto sym = symmetry_eq55({RiccatiFamily::quadratic, s.A, s.B, s.C}, s.sigma,
                                   [&](double y) { return s.diff.F(y); });
    const double kappa = -s.B / (2.0 * s.sigma * s.sqrtA);  // k + 1/2
    const double k = kappa - 0.5;
    const double nu_w = 0.5 * std::sqrt(1.0 + 2.0 * s.C / (s.sigma * s.sigma));
    const double eta = s.B / (2.0 * s.sigma * s.sqrtA) - 0.5 * s.beta;
    auto h_tilde = [&](double y) {
        if (y <= 0.0) return 0.0;
        const auto lp = cir.log_density(s.q, t, x, y);
        return lp.sign * std::exp(eta * std::log(s.sqrtA / s.sigma) + kappa * std::log(y) +
                                  (s.sqrtA * y - s.diff.F(y)) / (2.0 * s.sigma) + lp.log_abs);
    };
    QuadratureSpec spec;
    spec.scale = cir.quadrature_scale(s.q, t, x);
    for (double lambda : lambdas) {
        const auto point = grid_label({{"lambda", lambda}, {"t", t}, {"x", x}});
        guarded(r, point, [&] {
            const double eps = 1.0 - s.sqrtA / (lambda * s.sigma);
            const double ref =
                std::pow(lambda, s.B / (s.sigma * s.sqrtA)) * sym(eps, x, t);
            r.add(point, ref, whittaker_forward(h_tilde, k, nu_w, lambda, spec));
        });
    }
    return r;
}

VerificationReport check_whittaker_branches(const Params& cir_params,
                                            const std::vector<double>& lambdas, double t,
                                            double x, double tol) {
    VerificationReport r("cir Whittaker branch identity",
                         "symmetry solution of each Kummer branch; computed is its integral "
                         "against the matching-index kernel",
                         Criterion::relative, tol);
    const auto s = quadratic_setup(cir_params);
    const double nu = s.beta - 1.0;
    const double alpha = s.B / (2.0 * s.sigma * s.sqrtA) + 0.5 * s.beta;
    // e^{-z}M(a, b, z) = M(b - a, b, -z).
    const std::function<double(double)> w1 = [&](double z) {
        return specfun::hypergeom_1f1(s.beta - alpha, s.beta, -z);
    };
    const std::function<double(double)> w2 = [&](double z) {
        return std::pow(z, 1.0 - s.beta) * specfun::hypergeom_1f1(1.0 - alpha, 2.0 - s.beta, -z);
    };
    QuadratureSpec base;
    base.scale = get_entry("cir").quadrature_scale(s.q, t, x);
    for (int branch : {1, 2}) {
        const auto& w = branch == 1 ? w1 : w2;
        const double index = branch == 1 ? nu : -nu;
        QuadratureSpec spec = base;
        spec.singular_power = branch == 1 ? 0.0 : nu;
        for (double lambda : lambdas) {
            const auto point = grid_label({{"branch", branch}, {"lambda", lambda}, {"t", t}, {"x", x}});
            guarded(r, point, [&] {
                if (branch == 2 && !(nu > 0.0 && nu < 1.0)) {
                    throw ValidityError("second branch needs 0 < nu < 1");
                }
                const double eps = 1.0 - s.sqrtA / (lambda * s.sigma);
                auto f = [&](double y) {
                    if (y <= 0.0) return 0.0;
                    return branch_solution(s, w, eps, y, 0.0) * quadratic_kernel(s, index, t, x, y);
                };
                r.add(point, branch_solution(s, w, eps, x, t), integrate_semi_infinite(f, spec));
            });
        }
    }
    return r;
}

VerificationReport check_whittaker_laplace_reduction(const std::function<double(double)>& phi,
                                                     double k, const std::vector<double>& lambdas,
                                                     double tol) {
    VerificationReport r("Whittaker transform Laplace reduction",
                         "Laplace transform by quadrature", Criterion::relative, tol);
    for (double lambda : lambdas) {
        const auto point = grid_label({{"k", k}, {"lambda", lambda}});
        guarded(r, point, [&] {
            if (!(k >= 0.0)) throw DomainError("Laplace reduction needs k >= 0");
            auto lap = [&](double y) { return std::exp(-lambda * y) * phi(y); };
            r.add(point, integrate_semi_infinite(lap, {}), whittaker_forward(phi, k, k, lambda));
        });
    }
    return r;
}

VerificationReport check_mc(const std::string& identity, const DiffusionSpec& diff,
                            const PotentialSpec& pot, double lambda, double t, double x,
                            double reference, const McSpec& spec, double n_se) {
    VerificationReport r(identity + " Monte Carlo", "closed form or quadrature",
                         Criterion::standard_errors, n_se);
    const auto point = grid_label({{"lambda", lambda}, {"t", t}, {"x", x},
                                   {"seed", static_cast<double>(spec.seed)},
                                   {"paths", static_cast<double>(spec.n_paths)}});
    guarded(r, point, [&] {
        const auto res = mc_expectation(diff, pot, lambda, t, x, spec);
        r.add(point, reference, res.estimate, res.standard_error);
        if (res.clip_rate > 0.0 || res.n_failed > 0) {
            r.note = "clip rate " + std::to_string(res.clip_rate) + ", failed paths " +
                     std::to_string(res.n_failed);
        }
    });
    return r;
}

} // namespace fksym
