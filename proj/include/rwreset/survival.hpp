#pragma once

#include "rwreset/common.hpp"
#include "rwreset/graph.hpp"
#include "rwreset/propagator.hpp"
#include "rwreset/renewal.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rwreset {

/// The auxiliary walk: the walker is killed on entering a target node, either
/// by a step or by a reset.
class KilledSystem {
public:
    const Matrix& w_killed() const noexcept { return w_killed_; }
    const RowVector& r_killed() const noexcept { return r_killed_; }
    /// Sorted target set B.
    const std::vector<int>& targets() const noexcept { return targets_; }
    bool is_target(int j) const { return target_mask_.at(j) != 0; }
    /// sum_j Wtilde_ij; strictly below 1 for nodes adjacent to a target.
    const Vector& row_sums() const noexcept { return row_sums_; }
    /// rho(Wtilde) from power iteration; < 1 for every valid graph.
    double spectral_radius() const noexcept { return spectral_radius_; }
    int size() const noexcept { return static_cast<int>(w_killed_.rows()); }

    /// The undefective inputs, kept for the ergodicity conditions.
    const Matrix& w() const noexcept { return w_; }
    const RowVector& r() const noexcept { return r_; }
    const Vector& degrees() const noexcept { return degrees_; }

private:
    friend KilledSystem kill(const TransitionMatrix&, const RelocationVector&, std::span<const int>);
    Matrix w_;
    RowVector r_;
    Vector degrees_;
    Matrix w_killed_;
    RowVector r_killed_;
    std::vector<int> targets_;
    std::vector<char> target_mask_;
    Vector row_sums_;
    double spectral_radius_ = 0.0;
};

/// Throws ParameterError for an empty target set or one covering every node.
KilledSystem kill(const TransitionMatrix& w, const RelocationVector& rel,
                  std::span<const int> targets);

/// Survival Lambda_i(t) and first-hitting PDF chi_i(t) = Lambda_i(t-1) - Lambda_i(t);
/// column t, row i. chi(., 0) = 0.
struct HittingStats {
    Matrix survival;
    Matrix fht_pdf;

    std::int64_t horizon() const { return survival.cols() - 1; }
};

HittingStats survival_series(const KilledSystem& ks, const ResetLaw& law, std::int64_t t_max);

/// Full survival propagator matrices P_AWR(0..t_max) from the renewal equation
/// P(t) = Phi0(t) Wt^t + sum_k psi(k) Wt^(k-1) Rt P(t-k).
std::vector<Matrix> survival_propagator(const KilledSystem& ks, const ResetLaw& law,
                                        std::int64_t t_max);

/// Same recursion for arbitrary (w, r) inputs. With the undefective W and R it
/// reproduces the propagator of the walk with resetting.
std::vector<Matrix> survival_propagator(const Matrix& w, const RowVector& r, const ResetLaw& law,
                                        std::int64_t t_max);

struct MfhtResult {
    Vector per_start;   // +infinity where not finite
    double global = 0.0;  // mean over all start nodes
    double rho = 0.0;     // rho(gbar(Wt) Rt) = Rt gbar(Wt) 1
    bool finite = true;
};

/// Production path: direct series for gbar(Wt) 1 and sum_t Phi0(t) Wt^t 1,
/// then the rank-one (Sherman-Morrison) solve.
MfhtResult mfht(const KilledSystem& ks, const ResetLaw& law);

/// Cross-check: matrix functions of Wt through the eigenpairs of its
/// non-target block, with the closed-form generating functions.
MfhtResult mfht_spectral(const KilledSystem& ks, const ResetLaw& law);

/// Cross-check for Sibuya resetting with the regularized inverse
/// Wt_eps^{-1} = (Wt^2 + eps^2)^{-1} Wt.
MfhtResult mfht_sibuya_pseudo_inverse(const KilledSystem& ks, double alpha, double eps = 1e-8);

/// f(Wt) for a function analytic on the spectrum of Wt. With the non-target
/// block A and target rows C, f(Wt) = [[f(A), 0], [C h(A), f(0)]] where the
/// caller supplies h(x) = (f(x) - f(0)) / x.
Matrix killed_matrix_function(const KilledSystem& ks, const std::function<double(double)>& f,
                              const std::function<double(double)>& h);

enum class ErgodicityClass { ErgodicSufficient, NonErgodicHallmark, Inconclusive };

std::string to_string(ErgodicityClass c);

struct ErgodicityReport {
    ErgodicityClass classification = ErgodicityClass::Inconclusive;
    double rho = 0.0;
    bool gbar_positive = false;            // condition (a): gbar(W) > 0
    bool relocation_positive = false;      // condition (b): R > 0
    bool relocated_gbar_positive = false;  // condition (c): R gbar(W) > 0
};

ErgodicityReport ergodicity_check(const KilledSystem& ks, const ResetLaw& law);

enum class HittingStatus { Ergodic, FiniteSupportTrap, Plateau, Inconclusive };

std::string to_string(HittingStatus s);

struct HittingProbability {
    Vector probability;  // 1 - Lambda_i(inf)
    HittingStatus status = HittingStatus::Inconclusive;
};

HittingProbability hitting_probability(const KilledSystem& ks, const ResetLaw& law,
                                       std::int64_t t_plateau);

/// E[T_i^m] for m = 1..4, exact t^k-weighted series. Infinite outside the
/// ergodic regime.
Vector moments(const KilledSystem& ks, const ResetLaw& law, int order);

/// Shortest hop distance from any relocation node to any target, -1 when no
/// target is reachable.
int relocation_target_distance(const KilledSystem& ks);

}  // namespace rwreset
