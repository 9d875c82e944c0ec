#include "rwreset/firstpassage.hpp"

#include "rwreset/linalg.hpp"

#include <cmath>

namespace rwreset {

namespace {

void check_p(double p) {
    if (p == 0.0) {
        throw RegimeError("p = 0 makes 1 - W singular; use the limit p -> 0+ (e.g. p = 1e-9)");
    }
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("reset probability must lie in (0, 1]");
}

}  // namespace

Matrix s_matrix(const TransitionMatrix& w, double p) {
    check_p(p);
    // (1 - qW + Pi)^{-1} - Pi / (1 + p) equals (1 - qW)^{-1} - Pi / p.
    return deflated_resolvent(w.matrix(), w.stationary(), 1.0 - p);
}

Matrix mfpt_matrix(const TransitionMatrix& w, const RelocationVector& rel, double p) {
    check_p(p);
    if (w.size() != rel.size()) throw ParameterError("relocation vector size does not match the graph");
    const int n = w.size();
    const Matrix s = s_matrix(w, p);
    const RowVector pinf = w.stationary() + p * (rel.row() * s);
    Matrix t(n, n);
    for (int j = 0; j < n; ++j) {
        if (pinf(j) < 1e-14) {
            t.col(j).setConstant(kInfinity);
            continue;
        }
        for (int i = 0; i < n; ++i) t(i, j) = ((i == j ? 1.0 : 0.0) + s(j, j) - s(i, j)) / pinf(j);
    }
    return t;
}

KemenyResult kemeny(const TransitionMatrix& w, double p) {
    const double k = s_matrix(w, p).trace();
    return KemenyResult{k, w.size() / k};
}

KemenyResult kemeny(const SpectralData& spec, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("reset probability must lie in [0, 1]");
    const double q = 1.0 - p;
    double k = 0.0;
    for (int m = 1; m < spec.size(); ++m) k += 1.0 / (1.0 - q * spec.eigenvalues(m));
    return KemenyResult{k, spec.size() / k};
}

double kemeny_derivative(const SpectralData& spec, double p) {
    double d = 0.0;
    for (int m = 1; m < spec.size(); ++m) {
        const double l = spec.eigenvalues(m);
        const double den = 1.0 + (p - 1.0) * l;
        d -= l / (den * den);
    }
    return d;
}

double kemeny_second_derivative(const SpectralData& spec, double p) {
    double d = 0.0;
    for (int m = 1; m < spec.size(); ++m) {
        const double l = spec.eigenvalues(m);
        const double den = 1.0 + (p - 1.0) * l;
        d += 2.0 * l * l / (den * den * den);
    }
    return d;
}

RelaxationTimes mean_relaxation(const TransitionMatrix& w, const RelocationVector& rel, double p) {
    check_p(p);
    if (w.size() != rel.size()) throw ParameterError("relocation vector size does not match the graph");
    // [(1 - qW - pR)(1 - qW)^{-2}]_ii rewritten with S = (1 - qW)^{-1} - Pi/p:
    // the Pi parts cancel and leave S_ii - p (R S^2)_i.
    const Matrix s = s_matrix(w, p);
    const RowVector rs = rel.row() * s;
    const RowVector rss = rs * s;
    RelaxationTimes out;
    out.per_node.resize(w.size());
    for (int i = 0; i < w.size(); ++i) out.per_node(i) = s(i, i) - p * rss(i);
    out.global = out.per_node.mean();
    return out;
}

std::optional<double> optimal_reset_rate(const SpectralData& spec) {
    if (kemeny_derivative(spec, 0.0) >= 0.0) return std::nullopt;
    // K is convex with K'(1) = 1 > 0, so the root of K' is bracketed.
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (kemeny_derivative(spec, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

FirstPassageReport first_passage_report(const TransitionMatrix& w, const RelocationVector& rel,
                                        double p) {
    FirstPassageReport out;
    out.mfpt = mfpt_matrix(w, rel, p);
    out.kemeny = kemeny(w, p);
    out.relaxation = mean_relaxation(w, rel, p);
    out.ness = ness(w, rel, ResetLaw::geometric(p));
    return out;
}

}  // namespace rwreset
