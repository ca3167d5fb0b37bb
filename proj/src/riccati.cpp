#include "fksym/riccati.hpp"

#include "fksym/errors.hpp"
#include "fksym/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace fksym {

namespace {

bool is_log_family(RiccatiFamily f) {
    return f == RiccatiFamily::log_constant || f == RiccatiFamily::log_linear;
}

// Step for 4th-order central differences that keeps x - 2d inside (0, ∞).
double fd_step(double x) { return std::min(1e-4 * std::max(1.0, x), 0.25 * x); }

double d1_central(const std::function<double(double)>& fn, double x, double d) {
    return (-fn(x + 2 * d) + 8 * fn(x + d) - 8 * fn(x - d) + fn(x - 2 * d)) / (12 * d);
}

double d2_central(const std::function<double(double)>& fn, double x, double d) {
    return (-fn(x + 2 * d) + 16 * fn(x + d) - 30 * fn(x) + 16 * fn(x - d) - fn(x - 2 * d)) /
           (12 * d * d);
}

void require_positive_x(double x, const char* where) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(where) + ": requires x > 0");
    }
}

} // namespace

// ---------------------------------------------------------------------------------------------
// DiffusionSpec / PotentialSpec

void DiffusionSpec::validate(const std::vector<double>& sample_x) const {
    if (!(sigma > 0.0)) {
        throw ValidityError("DiffusionSpec: sigma must be > 0");
    }
    if (!drift || !drift_antiderivative) {
        throw ValidityError("DiffusionSpec: drift and antiderivative are required");
    }
    for (double x : sample_x) {
        const double d = 1e-5 * std::max(1.0, x);
        const double dF = (F(x + d) - F(x - d)) / (2 * d);
        const double want = f(x) / std::pow(x, gamma);
        if (std::fabs(dF - want) > 1e-8 * std::max(1.0, std::fabs(want))) {
            std::ostringstream os;
            os << "DiffusionSpec '" << label << "': F'(" << x << ") = " << dF << " but f/x^gamma = "
               << want;
            throw ValidityError(os.str());
        }
    }
}

PotentialSpec PotentialSpec::zero() { return sum({}); }

PotentialSpec PotentialSpec::power(double mu, double n) {
    PotentialSpec p;
    p.form = Form::power;
    p.mu = mu;
    p.n = n;
    p.terms = {{mu, n}};
    return p;
}

PotentialSpec PotentialSpec::inverse_plus_linear(double nu, double mu) {
    PotentialSpec p;
    p.form = Form::inverse_plus_linear;
    p.mu = mu;
    p.nu_coeff = nu;
    p.terms = {{nu, -1.0}, {mu, 1.0}};
    return p;
}

PotentialSpec PotentialSpec::sum(std::vector<Term> terms) {
    PotentialSpec p;
    p.form = Form::power_sum;
    p.terms = std::move(terms);
    return p;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> xs, std::vector<double> gs) {
    if (xs.size() != gs.size() || xs.size() < 2) {
        throw ValidityError("PotentialSpec: tabulated form needs matching arrays of size >= 2");
    }
    if (!std::is_sorted(xs.begin(), xs.end()) || xs.front() <= 0.0) {
        throw ValidityError("PotentialSpec: tabulated x must be positive and increasing");
    }
    PotentialSpec p;
    p.form = Form::tabulated;
    p.table_x = std::move(xs);
    p.table_g = std::move(gs);
    return p;
}

double PotentialSpec::operator()(double x) const {
    if (form == Form::tabulated) {
        if (x <= table_x.front()) {
            return table_g.front();
        }
        if (x >= table_x.back()) {
            return table_g.back();
        }
        const auto it = std::upper_bound(table_x.begin(), table_x.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - table_x.begin());
        const double w = std::log(x / table_x[i - 1]) / std::log(table_x[i] / table_x[i - 1]);
        return (1.0 - w) * table_g[i - 1] + w * table_g[i];
    }
    double g = 0.0;
    for (const auto& t : terms) {
        if (t.coeff != 0.0) {
            g += t.coeff * std::pow(x, t.exponent);
        }
    }
    return g;
}

double PotentialSpec::derivative(double x) const {
    if (form == Form::tabulated) {
        throw CapabilityError("PotentialSpec: tabulated potential has no derivative");
    }
    double dg = 0.0;
    for (const auto& t : terms) {
        if (t.coeff != 0.0 && t.exponent != 0.0) {
            dg += t.coeff * t.exponent * std::pow(x, t.exponent - 1.0);
        }
    }
    return dg;
}

bool PotentialSpec::singular_at_origin() const {
    if (form == Form::tabulated) {
        return false;
    }
    return std::any_of(terms.begin(), terms.end(),
                       [](const Term& t) { return t.coeff != 0.0 && t.exponent < 0.0; });
}

bool PotentialSpec::is_zero() const {
    if (form == Form::tabulated) {
        return std::all_of(table_g.begin(), table_g.end(), [](double g) { return g == 0.0; });
    }
    return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.coeff == 0.0; });
}

// ---------------------------------------------------------------------------------------------
// Residuals

std::string to_string(RiccatiFamily family) {
    switch (family) {
    case RiccatiFamily::laplace: return "laplace";
    case RiccatiFamily::quadratic: return "quadratic";
    case RiccatiFamily::cubic: return "cubic";
    case RiccatiFamily::log_constant: return "log_constant";
    case RiccatiFamily::log_linear: return "log_linear";
    }
    return "unknown";
}

double riccati_rhs(const RiccatiParams& p, double sigma, double gamma, double x) {
    if (is_log_family(p.family) != (gamma == 2.0)) {
        throw ValidityError("riccati: family " + to_string(p.family) +
                            " does not apply to this gamma");
    }
    const double m = 2.0 - gamma;
    switch (p.family) {
    case RiccatiFamily::laplace: return p.A * std::pow(x, m) + p.B;
    case RiccatiFamily::quadratic:
        return 0.5 * p.A * std::pow(x, 2 * m) + p.B * std::pow(x, m) + p.C;
    case RiccatiFamily::cubic:
        return 0.5 * p.A * std::pow(x, 2 * m) + 2.0 / 3.0 * p.B * std::pow(x, 1.5 * m) +
               p.C * std::pow(x, m) - 3.0 * sigma * sigma / (8.0 * m);
    case RiccatiFamily::log_constant: {
        const double xi = std::log(x);
        return (2 * sigma * p.A + 0.5 * sigma * sigma) * xi * xi + p.C;
    }
    case RiccatiFamily::log_linear: {
        const double xi = std::log(x);
        return 4.0 * sigma * p.A / 3.0 * xi * xi * xi +
               (2 * sigma * p.B + 0.5 * sigma * sigma) * xi * xi + p.C;
    }
    }
    return 0.0;
}

double riccati_lhs(const DiffusionSpec& diff, const PotentialSpec& pot, double x) {
    require_positive_x(x, "riccati_lhs");
    const double s = diff.sigma;
    const double gam = diff.gamma;
    if (gam == 2.0) {
        const double xi = std::log(x);
        const double fx = diff.f(x);
        const double inner = fx / x - s;  // e^{-ξ} f(e^ξ) - σ
        const double H = xi * inner;
        double dinner = 0.0;
        if (diff.drift_derivative) {
            dinner = -fx / x + diff.drift_derivative(x);
        } else {
            auto inner_xi = [&](double u) { return diff.f(std::exp(u)) * std::exp(-u); };
            dinner = d1_central(inner_xi, xi, 1e-4 * std::max(1.0, std::fabs(xi)));
        }
        const double dH = inner + xi * dinner;
        return s * xi * dH - s * H + 0.5 * H * H + 2 * s * xi * xi * pot(x);
    }
    const double fx = diff.f(x);
    const double h = std::pow(x, 1.0 - gam) * fx;
    double dh = 0.0;
    if (diff.drift_derivative) {
        dh = (1.0 - gam) * std::pow(x, -gam) * fx + std::pow(x, 1.0 - gam) * diff.drift_derivative(x);
    } else {
        auto hfun = [&](double u) { return std::pow(u, 1.0 - gam) * diff.f(u); };
        dh = d1_central(hfun, x, fd_step(x));
    }
    return s * x * dh - s * h + 0.5 * h * h + 2 * s * std::pow(x, 2.0 - gam) * pot(x);
}

double riccati_residual(const DiffusionSpec& diff, const PotentialSpec& pot,
                        const RiccatiParams& params, double x, ResidualForm form) {
    require_positive_x(x, "riccati_residual");
    if (form == ResidualForm::h_form) {
        return riccati_lhs(diff, pot, x) - riccati_rhs(params, diff.sigma, diff.gamma, x);
    }
    // Operator form: Lf = σx^γ k'' + f k' + g + x g'/(2-γ), k = x^{1-γ} f/(2σ(2-γ)).
    if (diff.gamma == 2.0) {
        throw CapabilityError("riccati_residual: operator form is only implemented for gamma != 2");
    }
    if (!pot.has_derivative()) {
        throw CapabilityError("riccati_residual: operator form needs g', which a tabulated "
                              "potential does not provide");
    }
    const double s = diff.sigma;
    const double gam = diff.gamma;
    const double m = 2.0 - gam;
    auto k = [&](double u) { return std::pow(u, 1.0 - gam) * diff.f(u) / (2 * s * m); };
    const double d = fd_step(x);
    const double lf = s * std::pow(x, gam) * d2_central(k, x, d) + diff.f(x) * d1_central(k, x, d) +
                      pot(x) + x * pot.derivative(x) / m;
    double rhs = 0.0;
    switch (params.family) {
    case RiccatiFamily::laplace: rhs = params.A / (2 * s); break;
    case RiccatiFamily::quadratic: rhs = (params.A * std::pow(x, m) + params.B) / (2 * s); break;
    case RiccatiFamily::cubic:
        rhs = (params.A * std::pow(x, m) + params.B * std::pow(x, 0.5 * m) + params.C) / (2 * s);
        break;
    default: throw ValidityError("riccati_residual: log families need gamma = 2");
    }
    return lf - rhs;
}

// ---------------------------------------------------------------------------------------------
// Fitting

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double w = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        g[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + w * (std::log(hi) - std::log(lo)));
    }
    return g;
}

namespace {

struct FamilyBasis {
    RiccatiFamily family;
    int nparams;  // columns map to (A, B) or (A, B, C)
    std::vector<int> slots;  // which of A=0, B=1, C=2 each column fills
};

std::optional<RiccatiParams> try_family(const FamilyBasis& fb, const DiffusionSpec& diff,
                                        const std::vector<double>& grid,
                                        const std::vector<double>& lhs) {
    const double s = diff.sigma;
    const double m = 2.0 - diff.gamma;
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd M(n, fb.nparams);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = grid[static_cast<std::size_t>(i)];
        double fixed = 0.0;
        switch (fb.family) {
        case RiccatiFamily::laplace:
            M(i, 0) = std::pow(x, m);
            M(i, 1) = 1.0;
            break;
        case RiccatiFamily::quadratic:
            M(i, 0) = 0.5 * std::pow(x, 2 * m);
            M(i, 1) = std::pow(x, m);
            M(i, 2) = 1.0;
            break;
        case RiccatiFamily::cubic:
            M(i, 0) = 0.5 * std::pow(x, 2 * m);
            M(i, 1) = 2.0 / 3.0 * std::pow(x, 1.5 * m);
            M(i, 2) = std::pow(x, m);
            fixed = -3.0 * s * s / (8.0 * m);
            break;
        case RiccatiFamily::log_constant: {
            const double xi = std::log(x);
            M(i, 0) = 2 * s * xi * xi;
            M(i, 1) = 1.0;
            fixed = 0.5 * s * s * xi * xi;
            break;
        }
        case RiccatiFamily::log_linear: {
            const double xi = std::log(x);
            M(i, 0) = 4.0 * s / 3.0 * xi * xi * xi;
            M(i, 1) = 2 * s * xi * xi;
            M(i, 2) = 1.0;
            fixed = 0.5 * s * s * xi * xi;
            break;
        }
        }
        rhs(i) = lhs[static_cast<std::size_t>(i)] - fixed;
    }
    Eigen::VectorXd scale = M.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        if (scale(j) == 0.0) {
            throw ConditioningError("fit_riccati: zero basis column");
        }
        M.col(j) /= scale(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-12);
    if (qr.rank() < M.cols()) {
        throw ConditioningError("fit_riccati: degenerate grid, basis columns are collinear");
    }
    Eigen::VectorXd coef = qr.solve(rhs);
    coef = coef.cwiseQuotient(scale);
    const Eigen::VectorXd fitted = M * coef.cwiseProduct(scale);
    double max_res = 0.0;
    double max_lhs = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        max_res = std::max(max_res, std::fabs(fitted(i) - rhs(i)));
        max_lhs = std::max(max_lhs, std::fabs(lhs[static_cast<std::size_t>(i)]));
    }
    if (max_res >= 1e-6 * max_lhs) {
        return std::nullopt;
    }
    RiccatiParams p;
    p.family = fb.family;
    double* slots[3] = {&p.A, &p.B, &p.C};
    for (int j = 0; j < fb.nparams; ++j) {
        *slots[fb.slots[static_cast<std::size_t>(j)]] = coef(j);
    }
    return p;
}

} // namespace

std::optional<RiccatiParams> fit_riccati(const DiffusionSpec& diff, const PotentialSpec& pot,
                                         const std::vector<double>& grid) {
    if (grid.size() < 8) {
        throw ValidityError("fit_riccati: grid needs at least 8 points");
    }
    for (double x : grid) {
        require_positive_x(x, "fit_riccati");
    }
    std::vector<FamilyBasis> order;
    if (diff.gamma == 2.0) {
        order = {{RiccatiFamily::log_constant, 2, {0, 2}}, {RiccatiFamily::log_linear, 3, {0, 1, 2}}};
    } else {
        order = {{RiccatiFamily::laplace, 2, {0, 1}},
                 {RiccatiFamily::quadratic, 3, {0, 1, 2}},
                 {RiccatiFamily::cubic, 3, {0, 1, 2}}};
    }
    std::vector<double> lhs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        lhs[i] = riccati_lhs(diff, pot, grid[i]);
    }
    // Rank is checked on the first (smallest) basis before the span requirement so that a
    // collapsed grid is reported as a conditioning problem.
    std::optional<RiccatiParams> found;
    bool span_checked = false;
    for (const auto& fb : order) {
        found = try_family(fb, diff, grid, lhs);
        if (!span_checked) {
            const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
            if (*hi < 10.0 * *lo) {
                throw ValidityError("fit_riccati: grid must span at least one decade");
            }
            span_checked = true;
        }
        if (found) {
            return found;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// build_drift

namespace {

struct BesselDrift {
    double A, B, sigma, c1, c2, alpha;

    struct Eval {
        double f;        // 2σ x y'/y
        double df;       // f'(x), from Bessel derivative recurrences
        double log_abs;  // ln|y|
        double sign;
    };

    Eval eval(double x) const {
        if (A == 0.0) {
            const double p = 0.5 * (1.0 + alpha);
            const double q = 0.5 * (1.0 - alpha);
            // Factor out the dominant power to stay finite.
            const double lx = std::log(x);
            const double lead = std::max(p, q) * lx;
            const double tp = c1 * std::exp(p * lx - lead);
            const double tq = c2 * std::exp(q * lx - lead);
            const double u = tp + tq;
            const double u1 = p * tp + q * tq;          // x u'
            const double u2 = p * p * tp + q * q * tq;  // x (x u')'
            const double f = 2.0 * sigma * u1 / u;
            const double df = 2.0 * sigma * (u2 / u - (u1 / u) * (u1 / u)) / x;
            return {f, df, lead + std::log(std::fabs(u)), u < 0 ? -1.0 : 1.0};
        }
        const double z = std::sqrt(2.0 * A * x) / sigma;
        auto is = [&](double k) { return specfun::bessel_i_scaled(alpha + k, z); };
        auto ks = [&](double k) { return specfun::bessel_k_scaled(alpha + k, z); };
        // P = c1 I_α + c2 K_α and its z-derivatives, all carried with a common scale.
        double P = 0.0, P1 = 0.0, P2 = 0.0, log_shift = 0.0;
        const double wk = c1 != 0.0 ? c2 * std::exp(-2.0 * z) : c2;
        const double wi = c1;
        if (c1 != 0.0) {
            log_shift = z;
        } else {
            log_shift = -z;
        }
        if (wi != 0.0) {
            const double im2 = is(-2), im1 = is(-1), i0 = is(0), ip1 = is(1), ip2 = is(2);
            P += wi * i0;
            P1 += wi * 0.5 * (im1 + ip1);
            P2 += wi * 0.25 * (im2 + 2.0 * i0 + ip2);
        }
        if (wk != 0.0) {
            const double km2 = ks(-2), km1 = ks(-1), k0 = ks(0), kp1 = ks(1), kp2 = ks(2);
            P += wk * k0;
            P1 -= wk * 0.5 * (km1 + kp1);
            P2 += wk * 0.25 * (km2 + 2.0 * k0 + kp2);
        }
        const double r = P1 / P;
        const double f = sigma + sigma * z * r;
        const double df = sigma * (z / (2.0 * x)) * (r + z * (P2 / P - r * r));
        return {f, df, 0.5 * std::log(x) + log_shift + std::log(std::fabs(P)), P < 0 ? -1.0 : 1.0};
    }
};

} // namespace

DiffusionSpec build_drift(double A, double B, double sigma, double c1, double c2) {
    if (!(sigma > 0.0)) {
        throw ValidityError("build_drift: sigma must be > 0");
    }
    if (!(A >= 0.0)) {
        throw ValidityError("build_drift: requires A >= 0");
    }
    if (!(2.0 * B + sigma * sigma > 0.0)) {
        throw ValidityError("build_drift: requires 2B + sigma^2 > 0");
    }
    if (c1 == 0.0 && c2 == 0.0) {
        throw ValidityError("build_drift: (c1, c2) must not both vanish");
    }
    auto st = std::make_shared<BesselDrift>(
        BesselDrift{A, B, sigma, c1, c2, std::sqrt(sigma * sigma + 2.0 * B) / sigma});

    // y must not vanish on (0, 100].
    const auto grid = log_grid(1e-6, 100.0, 2001);
    double prev_sign = st->eval(grid.front()).sign;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double sgn = st->eval(grid[i]).sign;
        if (sgn != prev_sign) {
            double lo = grid[i - 1];
            double hi = grid[i];
            for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (st->eval(mid).sign == prev_sign ? lo : hi) = mid;
            }
            std::ostringstream os;
            os << "build_drift: y(x) vanishes near x = " << 0.5 * (lo + hi);
            throw SingularDriftError(os.str(), 0.5 * (lo + hi));
        }
    }

    DiffusionSpec d;
    d.gamma = 1.0;
    d.sigma = sigma;
    d.drift = [st](double x) { return st->eval(x).f; };
    d.drift_derivative = [st](double x) { return st->eval(x).df; };
    d.drift_antiderivative = [st](double x) { return 2.0 * st->sigma * st->eval(x).log_abs; };
    std::ostringstream os;
    os << "build_drift(A=" << A << ",B=" << B << ",sigma=" << sigma << ",c1=" << c1 << ",c2=" << c2
       << ")";
    d.label = os.str();
    return d;
}

} // namespace fksym
