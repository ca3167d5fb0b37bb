#include "fksym/errors.hpp"
#include "fksym/verify.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace fksym {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 64) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

// Potential with the common exponents evaluated without std::pow.
class FastPotential {
public:
    explicit FastPotential(const PotentialSpec& pot) : pot_(pot) {
        if (pot.form == PotentialSpec::Form::tabulated) return;
        for (const auto& t : pot.terms) {
            if (t.coeff == 0.0) continue;
            const double e = t.exponent;
            if (e != -2.0 && e != -1.0 && e != 0.0 && e != 1.0 && e != 2.0) return;
            terms_.push_back(t);
        }
        fast_ = true;
    }

    double operator()(double x) const {
        if (!fast_) return pot_(x);
        double g = 0.0;
        for (const auto& t : terms_) {
            switch (static_cast<int>(t.exponent)) {
            case -2: g += t.coeff / (x * x); break;
            case -1: g += t.coeff / x; break;
            case 0: g += t.coeff; break;
            case 1: g += t.coeff * x; break;
            default: g += t.coeff * x * x; break;
            }
        }
        return g;
    }

private:
    const PotentialSpec& pot_;
    std::vector<PotentialSpec::Term> terms_;
    bool fast_ = false;
};

struct Counters {
    std::uint64_t clipped = 0;
    std::uint64_t evaluated = 0;
};

class PathSimulator {
public:
    PathSimulator(const DiffusionSpec& diff, const PotentialSpec& pot, double lambda, double t,
                  double x, const McSpec& spec)
        : diff_(diff), pot_(pot), fast_pot_(pot), lambda_(lambda), x0_(x), spec_(spec),
          h_(t / spec.n_steps), sqrt_h_(std::sqrt(t / spec.n_steps)),
          killing_(!pot.is_zero()), singular_(pot.singular_at_origin()) {
        if (spec.scheme == McScheme::exact_besq) {
            if (diff.gamma != 1.0 || diff.sigma != 2.0 || diff.f(1.0) != diff.f(2.0)) {
                throw CapabilityError("mc_expectation: exact_besq needs sigma = 2, gamma = 1 and a "
                                      "constant drift");
            }
            n_ = diff.f(1.0);
            if (!(n_ >= 0.0)) throw ValidityError("mc_expectation: BESQ dimension must be >= 0");
            integer_n_ = n_ == std::round(n_) && n_ <= 64.0;
            if (spec.antithetic && !integer_n_) {
                throw CapabilityError("mc_expectation: antithetic sampling needs integer dimension");
            }
        }
        if (spec.simulate_square && diff.gamma != 0.0) {
            throw CapabilityError("mc_expectation: simulate_square applies to gamma = 0 only");
        }
        power_ = spec.simulate_square ? 1.0 : 2.0 - diff.gamma;
    }

    // Discounted observable along one path; `sign` flips every normal for antithetic pairs.
    double run(std::mt19937_64& rng, double sign, Counters& c) const {
        boost::random::normal_distribution<double> normal;  // ziggurat
        auto z = [&] { return sign * normal(rng); };
        double integral = 0.0;
        double state = spec_.simulate_square ? x0_ * x0_ : x0_;
        double g_prev = killing_ ? g(state, c) : 0.0;

        if (spec_.scheme == McScheme::exact_besq && integer_n_) {
            const int n = static_cast<int>(n_);
            std::vector<double> b(n, 0.0);
            if (n > 0) b[0] = std::sqrt(x0_);
            for (int k = 0; k < spec_.n_steps; ++k) {
                double s = 0.0;
                for (double& bi : b) {
                    bi += sqrt_h_ * z();
                    s += bi * bi;
                }
                state = s;
                step_integral(state, g_prev, integral, c);
            }
        } else if (spec_.scheme == McScheme::exact_besq) {
            for (int k = 0; k < spec_.n_steps; ++k) {
                // X_{t+h} = h χ'²(n, X_t/h) as a Poisson mixture of gammas.
                const double mean = state / (2.0 * h_);
                long extra = 0;
                if (mean > 0.0) extra = std::poisson_distribution<long>(mean)(rng);
                std::gamma_distribution<double> gam(0.5 * n_ + extra, 2.0);
                state = h_ * gam(rng);
                step_integral(state, g_prev, integral, c);
            }
        } else if (spec_.simulate_square) {
            const double s2 = 2.0 * diff_.sigma;
            for (int k = 0; k < spec_.n_steps; ++k) {
                const double yp = std::max(state, 0.0);
                const double xe = std::max(std::sqrt(yp), spec_.x_floor);
                state += (2.0 * xe * diff_.f(xe) + s2) * h_ + 2.0 * std::sqrt(s2 * yp) * sqrt_h_ * z();
                step_integral(state, g_prev, integral, c);
            }
        } else if (diff_.gamma == 0.0) {
            const double vol = std::sqrt(2.0 * diff_.sigma);
            for (int k = 0; k < spec_.n_steps; ++k) {
                state += diff_.f(state) * h_ + vol * sqrt_h_ * z();
                step_integral(state, g_prev, integral, c);
            }
        } else {
            const bool linear = diff_.gamma == 1.0;
            for (int k = 0; k < spec_.n_steps; ++k) {
                const double xp = std::max(state, 0.0);
                const double drift = xp > 0.0 ? diff_.f(xp) : diff_.f(spec_.x_floor);
                const double xg = linear ? xp : std::pow(xp, diff_.gamma);
                state += drift * h_ + std::sqrt(2.0 * diff_.sigma * xg) * sqrt_h_ * z();
                step_integral(state, g_prev, integral, c);
            }
        }
        const double obs = std::max(state, 0.0);
        const double o = lambda_ == 0.0 ? 0.0 : lambda_ * std::pow(obs, power_);
        return std::exp(-o - integral);
    }

private:
    // g at the process value carried by `state` (X, or √Y when simulating the square).
    double g(double state, Counters& c) const {
        double xv = std::max(state, 0.0);
        if (spec_.simulate_square) xv = std::sqrt(xv);
        ++c.evaluated;
        if (singular_ && xv < spec_.x_floor) {
            ++c.clipped;
            xv = spec_.x_floor;
        }
        return fast_pot_(xv);
    }

    void step_integral(double state, double& g_prev, double& integral, Counters& c) const {
        if (!killing_) return;
        const double gn = g(state, c);
        integral += 0.5 * h_ * (g_prev + gn);
        g_prev = gn;
    }

    const DiffusionSpec& diff_;
    const PotentialSpec& pot_;
    FastPotential fast_pot_;
    double lambda_, x0_;
    const McSpec& spec_;
    double h_, sqrt_h_;
    bool killing_, singular_;
    double n_ = 0.0;
    bool integer_n_ = false;
    double power_ = 1.0;
};

} // namespace

McResult mc_expectation(const DiffusionSpec& diff, const PotentialSpec& pot, double lambda,
                        double t, double x, const McSpec& spec) {
    if (!(t > 0.0) || !(x > 0.0)) throw DomainError("mc_expectation: t and x must be > 0");
    if (!(lambda >= 0.0)) throw DomainError("mc_expectation: lambda must be >= 0");
    if (spec.n_paths < 2 || spec.n_steps < 1) {
        throw DomainError("mc_expectation: need n_paths >= 2 and n_steps >= 1");
    }
    if (spec.antithetic && spec.n_paths % 2 != 0) {
        throw DomainError("mc_expectation: antithetic sampling needs an even path count");
    }
    const PathSimulator sim(diff, pot, lambda, t, x, spec);

    // One sample per path, or per antithetic pair.
    const std::size_t n_samples = spec.antithetic ? spec.n_paths / 2 : spec.n_paths;
    std::vector<double> values(n_samples);
    unsigned n_threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_samples)));
    std::vector<Counters> counters(n_threads);

    auto worker = [&](unsigned w) {
        const std::size_t lo = n_samples * w / n_threads, hi = n_samples * (w + 1) / n_threads;
        for (std::size_t i = lo; i < hi; ++i) {
            std::mt19937_64 rng(stream_seed(spec.seed, i));
            if (spec.antithetic) {
                std::mt19937_64 twin = rng;
                values[i] = 0.5 * (sim.run(rng, 1.0, counters[w]) + sim.run(twin, -1.0, counters[w]));
            } else {
                values[i] = sim.run(rng, 1.0, counters[w]);
            }
        }
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    std::vector<double> finite;
    finite.reserve(values.size());
    for (double v : values) {
        if (std::isfinite(v)) finite.push_back(v);
    }
    McResult r;
    r.n_paths = spec.n_paths;
    r.n_failed = values.size() - finite.size();
    if (r.n_failed > 0.001 * values.size()) {
        throw SchemeError("mc_expectation: " + std::to_string(r.n_failed) + " of " +
                          std::to_string(values.size()) + " samples are not finite");
    }
    const double n = static_cast<double>(finite.size());
    r.estimate = pairwise_sum(finite) / n;
    std::vector<double> dev(finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i) {
        dev[i] = (finite[i] - r.estimate) * (finite[i] - r.estimate);
    }
    r.standard_error = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    std::uint64_t clipped = 0, evaluated = 0;
    for (const auto& c : counters) {
        clipped += c.clipped;
        evaluated += c.evaluated;
    }
    r.clip_rate = evaluated ? static_cast<double>(clipped) / static_cast<double>(evaluated) : 0.0;
    return r;
}

} // namespace fksym
