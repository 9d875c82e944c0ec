#pragma once

#include "rwreset/common.hpp"
#include "rwreset/graph.hpp"
#include "rwreset/renewal.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rwreset {

/// Relocation probabilities R_j. The relocation matrix is 1 R (all rows equal),
/// so only the row is stored.
class RelocationVector {
public:
    /// Throws ValidationError unless entries are non-negative and sum to 1.
    explicit RelocationVector(RowVector r);

    static RelocationVector single_node(int n, int node);
    /// R_j = 1/|nodes| on the given nodes.
    static RelocationVector uniform(int n, std::span<const int> nodes);
    static RelocationVector uniform_all(int n);
    /// R_j proportional to K_j on the given nodes.
    static RelocationVector degree_weighted(const Graph& g, std::span<const int> nodes);
    /// R = K / sum K, the equilibrium of the reset-free walk.
    static RelocationVector stationary(const TransitionMatrix& w);

    int size() const noexcept { return static_cast<int>(r_.size()); }
    const RowVector& row() const noexcept { return r_; }
    double operator[](int j) const { return r_(j); }
    /// The r-nodes, i.e. indices with R_j > 0.
    std::vector<int> support() const;
    Matrix matrix() const;

private:
    RowVector r_;
};

/// W = sum_m lambda_m |phi_m><phibar_m| with lambda sorted descending.
/// Columns of `right` are |phi_m>, rows of `left` are <phibar_m|.
struct SpectralData {
    Vector eigenvalues;
    Matrix right;
    Matrix left;

    int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// Eigenpairs through the symmetric matrix D^{1/2} W D^{-1/2}. Throws
/// ValidationError when lambda_1 = 1 or lambda_N = -1 is (nearly) degenerate.
SpectralData spectral_decompose(const TransitionMatrix& w);

struct PropagatorSeries {
    std::vector<Matrix> matrices;  // P(0), ..., P(t_max)
    std::string law;
    RowVector relocation;
};

/// Renewal channel: P(t) = Phi0(t) W^t + sum_k psi(k) R P(t-k), using that
/// R P(s) has identical rows.
PropagatorSeries propagate(const TransitionMatrix& w, const RelocationVector& rel,
                           const ResetLaw& law, std::int64_t t_max);

/// Single time of the renewal channel without storing the series.
Matrix propagate_at(const TransitionMatrix& w, const RelocationVector& rel, const ResetLaw& law,
                    std::int64_t t);

/// The row R P(t) for t = 0..t_max (the relocation-averaged occupation).
std::vector<RowVector> relocated_rows(const TransitionMatrix& w, const RelocationVector& rel,
                                      const ResetLaw& law, std::int64_t t_max);

/// Spectral channel (canonical form).
Matrix propagate_spectral(const SpectralData& spec, const RelocationVector& rel,
                          const ResetLaw& law, std::int64_t t);

struct NessResult {
    RowVector row;
    /// False for infinite-mean laws; row then holds the equilibrium K / sum K.
    bool exists = true;

    Matrix matrix() const { return Vector::Ones(row.size()) * row; }
};

NessResult ness(const TransitionMatrix& w, const RelocationVector& rel, const ResetLaw& law);
NessResult ness_spectral(const SpectralData& spec, const RelocationVector& rel,
                         const ResetLaw& law);

/// (qW + pR)^t by repeated squaring.
Matrix bernoulli_propagator(const TransitionMatrix& w, const RelocationVector& rel, double p,
                            std::int64_t t);

/// W^t for t < T; 1 R W^(t mod T) afterwards.
Matrix periodic_propagator(const TransitionMatrix& w, const RelocationVector& rel,
                           std::int64_t period, std::int64_t t);

/// Row C_j = sum_{m>=2} (1 - lambda_m)^(alpha-1) (R.phi_m) phibar_m(j) such that
/// P_ij(t) - K_j / sum K ~ t^(alpha-1) C_j / Gamma(alpha) for Sibuya resetting.
RowVector sibuya_asymptotic_row(const SpectralData& spec, const RelocationVector& rel,
                                double alpha);

}  // namespace rwreset
