#include "rwreset/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rwreset {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Phi0(t) of the Sibuya law by the product recursion Phi(t) = Phi(t-1)(t-alpha)/t.
double sibuya_persistence(double alpha, std::int64_t t) {
    double phi = 1.0;
    for (std::int64_t s = 1; s <= t; ++s) phi *= (static_cast<double>(s) - alpha) / s;
    return phi;
}

// Same quantity through log-gamma; only used by the sampler far in the tail,
// where a relative error of order 1e-9 is irrelevant.
double sibuya_persistence_lgamma(double alpha, std::int64_t t) {
    const double x = static_cast<double>(t);
    return std::exp(std::lgamma(x + 1.0 - alpha) - std::lgamma(1.0 - alpha) - std::lgamma(x + 1.0));
}

}  // namespace

ResetLaw ResetLaw::geometric(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("geometric reset probability must lie in (0, 1]");
    return ResetLaw(Geometric{p});
}

ResetLaw ResetLaw::sibuya(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("Sibuya exponent must lie in (0, 1)");
    return ResetLaw(Sibuya{alpha});
}

ResetLaw ResetLaw::finite_support(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ValidationError("finite-support weights must be finite and non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("finite-support weights sum to " + format_double(total) + ", not 1");
    }
    while (!weights.empty() && weights.back() == 0.0) weights.pop_back();
    return ResetLaw(FiniteSupport{std::move(weights)});
}

ResetLaw ResetLaw::uniform(int horizon) {
    if (horizon < 1) throw ParameterError("uniform law needs a horizon >= 1");
    return finite_support(std::vector<double>(horizon, 1.0 / horizon));
}

ResetLaw ResetLaw::deterministic(std::int64_t period) {
    if (period < 1) throw ParameterError("reset period must be >= 1");
    return ResetLaw(DeterministicPeriod{period});
}

std::optional<double> ResetLaw::mean_interval() const {
    return std::visit(overloaded{
        [](const Geometric& g) -> std::optional<double> { return 1.0 / g.p; },
        [](const Sibuya&) -> std::optional<double> { return std::nullopt; },
        [](const FiniteSupport& f) -> std::optional<double> {
            double m = 0.0;
            for (std::size_t i = 0; i < f.weights.size(); ++i) m += static_cast<double>(i + 1) * f.weights[i];
            return m;
        },
        [](const DeterministicPeriod& d) -> std::optional<double> { return static_cast<double>(d.period); },
    }, v_);
}

std::optional<std::int64_t> ResetLaw::max_interval() const {
    return std::visit(overloaded{
        [](const Geometric& g) -> std::optional<std::int64_t> {
            if (g.p == 1.0) return 1;
            return std::nullopt;
        },
        [](const Sibuya&) -> std::optional<std::int64_t> { return std::nullopt; },
        [](const FiniteSupport& f) -> std::optional<std::int64_t> {
            return static_cast<std::int64_t>(f.weights.size());
        },
        [](const DeterministicPeriod& d) -> std::optional<std::int64_t> { return d.period; },
    }, v_);
}

std::string ResetLaw::describe() const {
    return std::visit(overloaded{
        [](const Geometric& g) { return "geom:" + format_double(g.p); },
        [](const Sibuya& s) { return "sibuya:" + format_double(s.alpha); },
        [](const FiniteSupport& f) { return "finite:T=" + std::to_string(f.weights.size()); },
        [](const DeterministicPeriod& d) { return "period:" + std::to_string(d.period); },
    }, v_);
}

ResetLaw load_finite_support_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open weights file " + path.string());
    std::vector<double> weights;
    std::vector<bool> seen;
    std::string line;
    int line_no = 0;
    bool data_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 't,psi'");
        }
        const std::string ts = line.substr(0, comma);
        const std::string ps = line.substr(comma + 1);
        long long t = 0;
        double psi = 0.0;
        std::size_t used_t = 0, used_p = 0;
        try {
            t = std::stoll(ts, &used_t);
            psi = std::stod(ps, &used_p);
        } catch (const std::exception&) {
            if (!data_seen) {  // header row
                data_seen = true;
                continue;
            }
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed row");
        }
        data_seen = true;
        if (ts.find_first_not_of(" \t", used_t) != std::string::npos ||
            ps.find_first_not_of(" \t\r", used_p) != std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed row");
        }
        if (t < 0) throw ValidationError(path.string() + ": negative interval");
        if (t == 0) {
            if (psi != 0.0) throw ValidationError(path.string() + ": psi(0) must be 0");
            continue;
        }
        if (static_cast<std::size_t>(t) > weights.size()) {
            weights.resize(static_cast<std::size_t>(t), 0.0);
            seen.resize(static_cast<std::size_t>(t), false);
        }
        if (seen[t - 1]) throw ValidationError(path.string() + ": duplicate t = " + std::to_string(t));
        seen[t - 1] = true;
        weights[t - 1] = psi;
    }
    if (weights.empty()) throw ParseError(path.string() + ": no weights");
    return ResetLaw::finite_support(std::move(weights));
}

double pdf(const ResetLaw& law, std::int64_t t) {
    if (t < 1) return 0.0;
    return std::visit(overloaded{
        [t](const Geometric& g) { return g.p * std::pow(1.0 - g.p, static_cast<double>(t - 1)); },
        [t](const Sibuya& s) { return s.alpha * sibuya_persistence(s.alpha, t - 1) / static_cast<double>(t); },
        [t](const FiniteSupport& f) {
            return static_cast<std::size_t>(t) <= f.weights.size() ? f.weights[t - 1] : 0.0;
        },
        [t](const DeterministicPeriod& d) { return t == d.period ? 1.0 : 0.0; },
    }, law.variant());
}

double gf(const ResetLaw& law, double u) {
    if (!(std::abs(u) <= 1.0)) throw ParameterError("generating function argument must satisfy |u| <= 1");
    return std::visit(overloaded{
        [u](const Geometric& g) { return g.p * u / (1.0 - (1.0 - g.p) * u); },
        [u](const Sibuya& s) { return 1.0 - std::pow(1.0 - u, s.alpha); },
        [u](const FiniteSupport& f) {
            double acc = 0.0;
            for (auto it = f.weights.rbegin(); it != f.weights.rend(); ++it) acc = (acc + *it) * u;
            return acc;
        },
        [u](const DeterministicPeriod& d) { return std::pow(u, static_cast<double>(d.period)); },
    }, law.variant());
}

double shifted_gf(const ResetLaw& law, double v) {
    if (!(std::abs(v) <= 1.0)) throw ParameterError("generating function argument must satisfy |v| <= 1");
    return std::visit(overloaded{
        [v](const Geometric& g) { return g.p / (1.0 - (1.0 - g.p) * v); },
        [v](const Sibuya& s) {
            if (std::abs(v) >= 0.25) return (1.0 - std::pow(1.0 - v, s.alpha)) / v;
            // Power series avoids the cancellation of the closed form near v = 0.
            double term_pdf = s.alpha;  // psi(1)
            double phi = 1.0 - s.alpha;  // Phi0(1)
            double vp = 1.0;
            double acc = term_pdf;
            for (int t = 2; t < 200; ++t) {
                term_pdf = s.alpha * phi / t;
                phi *= (t - s.alpha) / t;
                vp *= v;
                const double term = term_pdf * vp;
                acc += term;
                if (std::abs(term) < 1e-18 * std::abs(acc)) break;
            }
            return acc;
        },
        [v](const FiniteSupport& f) {
            double acc = 0.0;
            for (auto it = f.weights.rbegin(); it != f.weights.rend(); ++it) acc = acc * v + *it;
            return acc;
        },
        [v](const DeterministicPeriod& d) { return std::pow(v, static_cast<double>(d.period - 1)); },
    }, law.variant());
}

double persistence(const ResetLaw& law, std::int64_t t) {
    if (t < 0) throw ParameterError("persistence needs t >= 0");
    if (t == 0) return 1.0;
    return std::visit(overloaded{
        [t](const Geometric& g) { return std::pow(1.0 - g.p, static_cast<double>(t)); },
        [t](const Sibuya& s) { return sibuya_persistence(s.alpha, t); },
        [t](const FiniteSupport& f) {
            if (static_cast<std::size_t>(t) >= f.weights.size()) return 0.0;
            double phi = 1.0;
            for (std::int64_t r = 0; r < t; ++r) phi -= f.weights[r];
            return std::max(phi, 0.0);
        },
        [t](const DeterministicPeriod& d) { return t < d.period ? 1.0 : 0.0; },
    }, law.variant());
}

std::vector<double> resetting_rate_by_convolution(const ResetLaw& law, std::int64_t horizon) {
    if (horizon < 0) throw ParameterError("horizon must be >= 0");
    std::vector<double> psi(horizon + 1, 0.0);
    RenewalStream stream(law);
    for (std::int64_t t = 1; t <= horizon; ++t) {
        stream.advance();
        psi[t] = stream.pdf();
    }
    std::vector<double> rate(horizon + 1, 0.0);
    for (std::int64_t t = 1; t <= horizon; ++t) {
        double r = psi[t];
        for (std::int64_t k = 1; k < t; ++k) r += psi[k] * rate[t - k];
        rate[t] = r;
    }
    return rate;
}

namespace {

std::vector<double> rate_sequence(const ResetLaw& law, std::int64_t horizon) {
    std::vector<double> rate(horizon + 1, 0.0);
    if (const auto* g = std::get_if<Geometric>(&law.variant())) {
        for (std::int64_t t = 1; t <= horizon; ++t) rate[t] = g->p;
    } else if (const auto* s = std::get_if<Sibuya>(&law.variant())) {
        double h = 1.0;
        for (std::int64_t t = 1; t <= horizon; ++t) {
            h *= (static_cast<double>(t) - 1.0 + s->alpha) / static_cast<double>(t);
            rate[t] = h;
        }
    } else if (const auto* d = std::get_if<DeterministicPeriod>(&law.variant())) {
        for (std::int64_t t = d->period; t <= horizon; t += d->period) rate[t] = 1.0;
    } else {
        rate = resetting_rate_by_convolution(law, horizon);
    }
    return rate;
}

}  // namespace

double resetting_rate(const ResetLaw& law, std::int64_t t) {
    if (t < 0) throw ParameterError("resetting rate needs t >= 0");
    if (t == 0) return 0.0;
    return rate_sequence(law, t)[t];
}

double backward_recurrence(const ResetLaw& law, std::int64_t t, std::int64_t b) {
    if (t < 0 || b < 0) throw ParameterError("backward recurrence needs t, b >= 0");
    if (b > t) return 0.0;
    const double rate = b == t ? 1.0 : resetting_rate(law, t - b);
    return persistence(law, b) * rate;
}

double stationary_backward_recurrence(const ResetLaw& law, std::int64_t b) {
    if (b < 0) throw ParameterError("backward recurrence needs b >= 0");
    const auto mean = law.mean_interval();
    if (!mean) {
        throw RegimeError("infinite mean inter-reset time (" + law.describe() +
                          "): f(∞,b)→0 for every finite b, the backward recurrence time has no "
                          "stationary law");
    }
    return persistence(law, b) / *mean;
}

double state_probability(const ResetLaw& law, int n, std::int64_t t) {
    if (n < 0 || t < 0) throw ParameterError("state probability needs n, t >= 0");
    const RenewalTable table = RenewalTable::build(law, t);
    std::vector<double> current = table.persistence;
    std::vector<double> next(t + 1);
    for (int k = 1; k <= n; ++k) {
        for (std::int64_t s = 0; s <= t; ++s) {
            double acc = 0.0;
            for (std::int64_t r = 1; r <= s; ++r) acc += table.pdf[r] * current[s - r];
            next[s] = acc;
        }
        current.swap(next);
    }
    return current[t];
}

std::vector<double> memory_kernel(const ResetLaw& law, int t_max) {
    if (t_max < 1) throw ParameterError("memory kernel needs t_max >= 1");
    // R(u) = psi(u) / (1 - psi(u)) by power-series division, then multiply by (1 - u).
    const std::vector<double> rate = resetting_rate_by_convolution(law, t_max);
    std::vector<double> kernel(t_max + 1, 0.0);
    for (int t = 1; t <= t_max; ++t) kernel[t] = rate[t] - rate[t - 1];
    return kernel;
}

bool is_memoryless(const ResetLaw& law, int t_max, double tol) {
    const auto k = memory_kernel(law, t_max);
    for (int t = 2; t <= t_max; ++t) {
        if (std::abs(k[t]) > tol) return false;
    }
    return true;
}

std::int64_t sample_interval(const ResetLaw& law, SplitMix64& rng) {
    const double u = rng.uniform_open();
    return std::visit(overloaded{
        [u](const Geometric& g) -> std::int64_t {
            if (g.p == 1.0) return 1;
            // min{t >= 1 : q^t < U}
            const double x = std::floor(std::log(u) / std::log1p(-g.p)) + 1.0;
            if (!(x < static_cast<double>(kMaxSampledInterval))) return kMaxSampledInterval;
            return std::max<std::int64_t>(1, static_cast<std::int64_t>(x));
        },
        [u](const Sibuya& s) -> std::int64_t {
            constexpr std::int64_t kRecursionLimit = 1024;
            double phi = 1.0;
            for (std::int64_t t = 1; t <= kRecursionLimit; ++t) {
                phi *= (static_cast<double>(t) - s.alpha) / static_cast<double>(t);
                if (phi < u) return t;
            }
            // Tail: exponential search then bisection on the monotone Phi0.
            std::int64_t lo = kRecursionLimit;
            std::int64_t hi = 2 * kRecursionLimit;
            while (sibuya_persistence_lgamma(s.alpha, hi) >= u) {
                if (hi >= kMaxSampledInterval / 2) return kMaxSampledInterval;
                lo = hi;
                hi *= 2;
            }
            while (hi - lo > 1) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                if (sibuya_persistence_lgamma(s.alpha, mid) < u) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi;
        },
        [u](const FiniteSupport& f) -> std::int64_t {
            double phi = 1.0;
            const auto horizon = static_cast<std::int64_t>(f.weights.size());
            for (std::int64_t t = 1; t < horizon; ++t) {
                phi -= f.weights[t - 1];
                if (phi < u) return t;
            }
            return horizon;
        },
        [](const DeterministicPeriod& d) -> std::int64_t { return d.period; },
    }, law.variant());
}

RenewalTable RenewalTable::build(const ResetLaw& law, std::int64_t horizon) {
    if (horizon < 0) throw ParameterError("horizon must be >= 0");
    RenewalTable table;
    table.pdf.assign(horizon + 1, 0.0);
    table.persistence.assign(horizon + 1, 0.0);
    RenewalStream stream(law);
    table.persistence[0] = 1.0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        stream.advance();
        table.pdf[t] = stream.pdf();
        table.persistence[t] = stream.persistence();
    }
    table.rate = rate_sequence(law, horizon);
    return table;
}

double RenewalTable::backward_recurrence(std::int64_t t, std::int64_t b) const {
    if (t < 0 || b < 0 || t > horizon()) throw ParameterError("backward recurrence index out of range");
    if (b > t) return 0.0;
    return persistence[b] * (b == t ? 1.0 : rate[t - b]);
}

double RenewalTable::backward_gf(std::int64_t t, double v) const {
    if (t < 0 || t > horizon()) throw ParameterError("backward recurrence index out of range");
    // Horner in v over b = 0..t.
    double acc = persistence[t];
    for (std::int64_t b = t - 1; b >= 0; --b) acc = acc * v + persistence[b] * rate[t - b];
    return acc;
}

RenewalStream::RenewalStream(const ResetLaw& law) : law_(&law) {}

void RenewalStream::advance() {
    ++t_;
    const double prev = persistence_;
    std::visit(overloaded{
        [&](const Geometric& g) {
            pdf_ = g.p * prev;
            persistence_ = prev * (1.0 - g.p);
        },
        [&](const Sibuya& s) {
            const double t = static_cast<double>(t_);
            pdf_ = s.alpha * prev / t;
            persistence_ = prev * (t - s.alpha) / t;
        },
        [&](const FiniteSupport& f) {
            const auto horizon = static_cast<std::int64_t>(f.weights.size());
            pdf_ = t_ <= horizon ? f.weights[t_ - 1] : 0.0;
            persistence_ = t_ >= horizon ? 0.0 : std::max(prev - pdf_, 0.0);
        },
        [&](const DeterministicPeriod& d) {
            pdf_ = t_ == d.period ? 1.0 : 0.0;
            persistence_ = t_ < d.period ? 1.0 : 0.0;
        },
    }, law_->variant());
}

}  // namespace rwreset
