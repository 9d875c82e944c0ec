#pragma once

#include "rwreset/common.hpp"
#include "rwreset/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rwreset {

/// psi(t) = p q^(t-1): memoryless (Bernoulli) resetting.
struct Geometric {
    double p = 0.5;
};

/// Fat-tailed Sibuya law with generating function 1 - (1-u)^alpha.
struct Sibuya {
    double alpha = 0.5;
};

/// Arbitrary law on {1..T}; weights[t-1] = psi(t).
struct FiniteSupport {
    std::vector<double> weights;
};

/// Reset every T steps.
struct DeterministicPeriod {
    std::int64_t period = 1;
};

/// Distribution of the (i.i.d., >= 1) intervals between consecutive resets.
/// Immutable; the constructors validate the parameters.
class ResetLaw {
public:
    using Variant = std::variant<Geometric, Sibuya, FiniteSupport, DeterministicPeriod>;

    static ResetLaw geometric(double p);
    static ResetLaw sibuya(double alpha);
    static ResetLaw finite_support(std::vector<double> weights);
    static ResetLaw uniform(int horizon);
    static ResetLaw deterministic(std::int64_t period);

    const Variant& variant() const noexcept { return v_; }

    /// <Delta t>, or nullopt when the mean interval is infinite (Sibuya).
    std::optional<double> mean_interval() const;

    /// Largest interval with positive probability, nullopt for unbounded support.
    std::optional<std::int64_t> max_interval() const;

    /// Compact spec string, e.g. "geom:0.3" or "sibuya:0.5".
    std::string describe() const;

private:
    explicit ResetLaw(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Reads a FiniteSupport law from CSV with columns t, psi (header optional).
ResetLaw load_finite_support_csv(const std::filesystem::path& path);

double pdf(const ResetLaw& law, std::int64_t t);
double gf(const ResetLaw& law, double u);
/// g(v) = sum_{t>=1} psi(t) v^(t-1), so that gf(u) = u g(u).
double shifted_gf(const ResetLaw& law, double v);
/// Phi0(t): probability of no reset in 1..t.
double persistence(const ResetLaw& law, std::int64_t t);
/// R(t): probability that a reset happens exactly at time t.
double resetting_rate(const ResetLaw& law, std::int64_t t);

/// f(t, b): probability that the last reset before or at t happened at t - b
/// (b = t meaning no reset yet).
double backward_recurrence(const ResetLaw& law, std::int64_t t, std::int64_t b);

/// f(inf, b) = Phi0(b) / <Delta t>. Throws RegimeError for infinite-mean laws,
/// where f(inf, b) -> 0 for every finite b.
double stationary_backward_recurrence(const ResetLaw& law, std::int64_t b);

/// Phi^(n)(t): probability of exactly n resets in 1..t.
double state_probability(const ResetLaw& law, int n, std::int64_t t);

/// Memory kernel K(0..t_max), the inverse of (1-u) psi(u) / (1 - psi(u)).
std::vector<double> memory_kernel(const ResetLaw& law, int t_max);

/// True when K(t) vanishes for 1 < t <= t_max.
bool is_memoryless(const ResetLaw& law, int t_max = 64, double tol = 1e-12);

/// Largest interval the sampler reports; longer draws saturate here. Any
/// simulation horizon is far below it.
inline constexpr std::int64_t kMaxSampledInterval = std::int64_t{1} << 62;

/// Exact inverse-CDF draw: min{t >= 1 : Phi0(t) < U}, U uniform on (0,1).
std::int64_t sample_interval(const ResetLaw& law, SplitMix64& rng);

/// psi, Phi0 and R tabulated on 0..horizon.
struct RenewalTable {
    std::vector<double> pdf;
    std::vector<double> persistence;
    std::vector<double> rate;

    static RenewalTable build(const ResetLaw& law, std::int64_t horizon);

    std::int64_t horizon() const { return static_cast<std::int64_t>(pdf.size()) - 1; }
    double backward_recurrence(std::int64_t t, std::int64_t b) const;
    /// fbar(t, v) = sum_b f(t, b) v^b.
    double backward_gf(std::int64_t t, double v) const;
};

/// Resetting rate computed from the renewal convolution R = psi + psi * R,
/// valid for every law. Closed forms in resetting_rate() are checked against it.
std::vector<double> resetting_rate_by_convolution(const ResetLaw& law, std::int64_t horizon);

/// Walks psi(t), Phi0(t) for t = 0, 1, 2, ... without a horizon. Used by the
/// series evaluators, which decide themselves when to stop.
class RenewalStream {
public:
    explicit RenewalStream(const ResetLaw& law);

    std::int64_t time() const noexcept { return t_; }
    double pdf() const noexcept { return pdf_; }
    double persistence() const noexcept { return persistence_; }
    /// No probability mass remains beyond the current time.
    bool exhausted() const noexcept { return persistence_ == 0.0; }
    void advance();

private:
    const ResetLaw* law_;
    std::int64_t t_ = 0;
    double pdf_ = 0.0;
    double persistence_ = 1.0;
};

}  // namespace rwreset
