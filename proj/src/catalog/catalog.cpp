#include "detail.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

namespace fksym {

using namespace catalog_detail;

double LogValue::value() const {
    return sign == 0.0 ? 0.0 : sign * std::exp(log_abs);
}

Params CatalogEntry::resolve(const Params& given) const {
    Params out;
    const auto specs = parameters();
    for (const auto& s : specs) {
        out[s.name] = s.default_value;
    }
    for (const auto& [k, v] : given) {
        if (out.find(k) == out.end()) {
            std::string known;
            for (const auto& s : specs) {
                known += (known.empty() ? "" : ", ") + s.name;
            }
            throw ValidityError(name() + ": unknown parameter '" + k + "' (known: " +
                                (known.empty() ? "none" : known) + ")");
        }
        if (!std::isfinite(v)) {
            throw ValidityError(name() + ": parameter '" + k + "' must be finite");
        }
        out[k] = v;
    }
    validate(out);
    return out;
}

std::vector<AtomSpec> CatalogEntry::atoms(const Params&, double, double) const { return {}; }

bool CatalogEntry::is_transition_density(const Params& p) const {
    return potential(p).is_zero();
}

bool CatalogEntry::has_transform(const Params&) const { return false; }

double CatalogEntry::stationary(const Params&, double) const {
    throw CapabilityError(name() + ": no transform identity");
}

OriginValue CatalogEntry::stationary_at_origin(const Params&) const { return {}; }

double CatalogEntry::transform_rhs(const Params&, double, double, double) const {
    throw CapabilityError(name() + ": no transform identity");
}

std::optional<double> CatalogEntry::expectation_closed(const Params&, double, double,
                                                       double) const {
    return std::nullopt;
}

double CatalogEntry::quadrature_scale(const Params&, double t, double x) const {
    return observable_power() == 1 ? x + t + 1.0 : x + std::sqrt(t) + 1.0;
}

double CatalogEntry::density_singular_power(const Params&) const { return 0.0; }
double CatalogEntry::transform_singular_power(const Params& p) const {
    return density_singular_power(p);
}

namespace {

struct Registry {
    std::vector<std::unique_ptr<CatalogEntry>> entries;

    Registry() {
        entries.push_back(make_besq());
        entries.push_back(make_besq_cosh());
        entries.push_back(make_bessel());
        entries.push_back(make_bessel_drift());
        entries.push_back(make_cir());
        entries.push_back(make_rational());
        entries.push_back(make_tanh());
        entries.push_back(make_radial_ou());
        entries.push_back(make_drift34());
        entries.push_back(make_sqrt_drift());
        entries.push_back(make_generic_a0());
        entries.push_back(make_generic_apos());
    }
};

const Registry& registry() {
    static const Registry r;
    return r;
}

void check_tx(double t, double x) {
    if (!(t > 0.0)) throw DomainError("t must be > 0");
    if (!(x > 0.0)) throw DomainError("x must be > 0");
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
}

QuadratureSpec with_hints(const CatalogEntry& e, const Params& p, double t, double x,
                          QuadratureSpec spec, bool weighted = false) {
    spec.scale = e.quadrature_scale(p, t, x);
    spec.singular_power = std::max(spec.singular_power, weighted ? e.transform_singular_power(p)
                                                                 : e.density_singular_power(p));
    return spec;
}

double observable(int m, double lambda, double y) {
    return lambda == 0.0 ? 1.0 : std::exp(-lambda * (m == 1 ? y : y * y));
}

} // namespace

std::vector<std::string> entry_names() {
    std::vector<std::string> names;
    for (const auto& e : registry().entries) names.push_back(e->name());
    return names;
}

const CatalogEntry& get_entry(const std::string& name) {
    for (const auto& e : registry().entries) {
        if (e->name() == name) return *e;
    }
    std::string known;
    for (const auto& n : entry_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidityError("unknown entry '" + name + "' (known: " + known + ")");
}

LogValue log_density(const CatalogEntry& e, const Params& p, double t, double x, double y) {
    const Params q = e.resolve(p);
    check_tx(t, x);
    if (!(y >= 0.0)) throw DomainError("y must be >= 0");
    if (y > 0.0) return e.log_density(q, t, x, y);
    // y = 0 reports the right limit of the continuous part: the local power y^α near 0 decides
    // between 0, a finite value and +∞.
    const double eps = 1e-12 * std::max(1.0, x);
    const LogValue a = e.log_density(q, t, x, eps), b = e.log_density(q, t, x, 16.0 * eps);
    if (a.sign == 0.0) return a;
    const double alpha = (b.log_abs - a.log_abs) / std::log(16.0);
    if (alpha > 0.05) return {0.0, 0.0};
    if (alpha < -0.05) return {std::numeric_limits<double>::infinity(), a.sign};
    return a;
}

double density(const CatalogEntry& e, const Params& p, double t, double x, double y) {
    return log_density(e, p, t, x, y).value();
}

Kernel kernel(const CatalogEntry& e, const Params& p, double t, double x) {
    const Params q = e.resolve(p);
    check_tx(t, x);
    const CatalogEntry* ep = &e;
    return Kernel{[ep, q, t, x](double y) {
                      return y > 0.0 ? ep->log_density(q, t, x, y).value() : 0.0;
                  },
                  e.atoms(q, t, x)};
}

double transform_rhs(const CatalogEntry& e, const Params& p, double lambda, double t, double x) {
    const Params q = e.resolve(p);
    check_tx(t, x);
    check_lambda(lambda);
    if (!e.has_transform(q)) {
        throw CapabilityError(e.name() + ": no transform identity for these parameters");
    }
    return e.transform_rhs(q, lambda, t, x);
}

double transform_lhs(const CatalogEntry& e, const Params& p, double lambda, double t, double x,
                     const QuadratureSpec& spec) {
    const Params q = e.resolve(p);
    check_tx(t, x);
    check_lambda(lambda);
    if (!e.has_transform(q)) {
        throw CapabilityError(e.name() + ": no transform identity for these parameters");
    }
    const int m = e.observable_power();
    auto f = [&](double y) {
        if (y <= 0.0) return 0.0;
        const LogValue d = e.log_density(q, t, x, y);
        if (d.sign == 0.0) return 0.0;
        return d.sign * std::exp(d.log_abs - lambda * (m == 1 ? y : y * y)) * e.stationary(q, y);
    };
    double sum = integrate_semi_infinite(f, with_hints(e, q, t, x, spec, true));
    const OriginValue u0 = e.stationary_at_origin(q);
    for (const auto& a : e.atoms(q, t, x)) {
        if (a.order == 0) {
            sum += a.weight * u0.value;
        } else {
            // -d/dy[e^{-λy^m} u₀(y)] at 0.
            const double slope = (m == 1 ? -lambda * u0.value : 0.0) + u0.derivative;
            sum -= a.weight * slope;
        }
    }
    return sum;
}

double total_mass(const CatalogEntry& e, const Params& p, double t, double x,
                  const QuadratureSpec& spec) {
    const Params q = e.resolve(p);
    check_tx(t, x);
    auto f = [&](double y) { return y > 0.0 ? e.log_density(q, t, x, y).value() : 0.0; };
    double sum = integrate_semi_infinite(f, with_hints(e, q, t, x, spec));
    for (const auto& a : e.atoms(q, t, x)) {
        if (a.order == 0) sum += a.weight;
    }
    return sum;
}

double expectation_quadrature(const CatalogEntry& e, const Params& p, double lambda, double t,
                              double x, const QuadratureSpec& spec) {
    const Params q = e.resolve(p);
    check_tx(t, x);
    check_lambda(lambda);
    const int m = e.observable_power();
    auto f = [&](double y) {
        if (y <= 0.0) return 0.0;
        const LogValue d = e.log_density(q, t, x, y);
        if (d.sign == 0.0) return 0.0;
        return d.sign * std::exp(d.log_abs - lambda * (m == 1 ? y : y * y));
    };
    double sum = integrate_semi_infinite(f, with_hints(e, q, t, x, spec));
    for (const auto& a : e.atoms(q, t, x)) {
        if (a.order == 0) sum += a.weight * observable(m, lambda, a.location);
    }
    return sum;
}

double expectation(const CatalogEntry& e, const Params& p, double lambda, double t, double x,
                   const QuadratureSpec& spec) {
    const Params q = e.resolve(p);
    check_tx(t, x);
    check_lambda(lambda);
    if (auto v = e.expectation_closed(q, lambda, t, x)) {
        return *v;
    }
    return expectation_quadrature(e, q, lambda, t, x, spec);
}

std::vector<std::pair<double, double>> joint_laplace_in_mu(const CatalogEntry& e, const Params& p,
                                                           double lambda, double t, double x,
                                                           const std::vector<double>& mu_grid) {
    Params q = e.resolve(p);
    if (q.find("mu") == q.end()) {
        throw CapabilityError(e.name() + ": no 'mu' parameter");
    }
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        if (!(mu_grid[i] >= 0.0) || (i > 0 && !(mu_grid[i] > mu_grid[i - 1]))) {
            throw DomainError("mu grid must be nonnegative and strictly increasing");
        }
    }
    std::vector<std::pair<double, double>> rows;
    rows.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        q["mu"] = mu;
        rows.emplace_back(mu, expectation(e, q, lambda, t, x));
    }
    return rows;
}

std::string manifest_json() {
    nlohmann::ordered_json doc;
    doc["schema"] = "fksym-catalog/1";
    doc["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : registry().entries) {
        nlohmann::ordered_json j;
        j["name"] = e->name();
        j["description"] = e->description();
        j["gamma"] = e->gamma();
        j["observable_power"] = e->observable_power();
        j["parameters"] = nlohmann::ordered_json::array();
        for (const auto& s : e->parameters()) {
            j["parameters"].push_back(
                {{"name", s.name}, {"default", s.default_value}, {"description", s.description}});
        }
        j["validity"] = e->validity();
        nlohmann::ordered_json f = nlohmann::ordered_json::object();
        for (const auto& [k, v] : e->formulas()) f[k] = v;
        j["formulas"] = f;
        doc["entries"].push_back(j);
    }
    return doc.dump(2);
}

} // namespace fksym
