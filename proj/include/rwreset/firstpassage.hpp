#pragma once

#include "rwreset/common.hpp"
#include "rwreset/graph.hpp"
#include "rwreset/propagator.hpp"

#include <optional>

namespace rwreset {

/// Stand-in for p -> 0+, where 1 - W is singular.
inline constexpr double kNoResetProxy = 1e-9;

/// S(p) = (1 - qW)^{-1} - |phi_1><phibar_1| / p, evaluated in the deflated
/// form so that it stays accurate for p close to 0. Throws RegimeError at p = 0.
Matrix s_matrix(const TransitionMatrix& w, double p);

/// <T_ij> = (delta_ij + S_jj - S_ij) / P_j(inf) for geometric resetting.
/// Entries with P_j(inf) < 1e-14 are +infinity.
Matrix mfpt_matrix(const TransitionMatrix& w, const RelocationVector& rel, double p);

struct KemenyResult {
    double kemeny = 0.0;
    double efficiency = 0.0;  // N / kemeny
};

/// K(p) = tr S(p) = sum_{m>=2} 1 / (1 - q lambda_m). Independent of R.
KemenyResult kemeny(const TransitionMatrix& w, double p);
/// Spectral sum; also valid at p = 0.
KemenyResult kemeny(const SpectralData& spec, double p);

/// dK/dp and d2K/dp2 from the spectrum.
double kemeny_derivative(const SpectralData& spec, double p);
double kemeny_second_derivative(const SpectralData& spec, double p);

struct RelaxationTimes {
    Vector per_node;
    double global = 0.0;  // mean of per_node, equal to K(p) / N
};

RelaxationTimes mean_relaxation(const TransitionMatrix& w, const RelocationVector& rel, double p);

/// Minimizer of K(p) on (0, 1) when K decreases at p = 0+, else nullopt.
std::optional<double> optimal_reset_rate(const SpectralData& spec);

struct FirstPassageReport {
    Matrix mfpt;
    KemenyResult kemeny;
    RelaxationTimes relaxation;
    NessResult ness;
};

FirstPassageReport first_passage_report(const TransitionMatrix& w, const RelocationVector& rel,
                                        double p);

}  // namespace rwreset
