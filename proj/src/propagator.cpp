#include "rwreset/propagator.hpp"

#include "rwreset/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace rwreset {

RelocationVector::RelocationVector(RowVector r) : r_(std::move(r)) {
    if (r_.size() == 0) throw ValidationError("relocation vector is empty");
    for (Eigen::Index j = 0; j < r_.size(); ++j) {
        if (!(r_(j) >= 0.0) || !std::isfinite(r_(j))) {
            throw ValidationError("relocation probabilities must be finite and non-negative");
        }
    }
    if (std::abs(r_.sum() - 1.0) > 1e-12) throw ValidationError("relocation probabilities must sum to 1");
}

RelocationVector RelocationVector::single_node(int n, int node) {
    if (node < 0 || node >= n) throw ParameterError("relocation node out of range");
    RowVector r = RowVector::Zero(n);
    r(node) = 1.0;
    return RelocationVector(std::move(r));
}

RelocationVector RelocationVector::uniform(int n, std::span<const int> nodes) {
    RowVector r = RowVector::Zero(n);
    for (int j : nodes) {
        if (j < 0 || j >= n) throw ParameterError("relocation node out of range");
        r(j) = 1.0;
    }
    const double count = r.sum();
    if (count == 0.0) throw ParameterError("relocation node set is empty");
    return RelocationVector(r / count);
}

RelocationVector RelocationVector::uniform_all(int n) {
    if (n < 1) throw ParameterError("relocation vector needs n >= 1");
    return RelocationVector(RowVector::Constant(n, 1.0 / n));
}

RelocationVector RelocationVector::degree_weighted(const Graph& g, std::span<const int> nodes) {
    const int n = g.size();
    RowVector r = RowVector::Zero(n);
    for (int j : nodes) {
        if (j < 0 || j >= n) throw ParameterError("relocation node out of range");
        r(j) = g.degree(j);
    }
    const double total = r.sum();
    if (total == 0.0) throw ParameterError("relocation node set is empty");
    return RelocationVector(r / total);
}

RelocationVector RelocationVector::stationary(const TransitionMatrix& w) {
    return RelocationVector(w.stationary());
}

std::vector<int> RelocationVector::support() const {
    std::vector<int> out;
    for (Eigen::Index j = 0; j < r_.size(); ++j) {
        if (r_(j) > 0.0) out.push_back(static_cast<int>(j));
    }
    return out;
}

Matrix RelocationVector::matrix() const { return Vector::Ones(r_.size()) * r_; }

namespace {

void check_sizes(const TransitionMatrix& w, const RelocationVector& rel) {
    if (w.size() != rel.size()) throw ParameterError("relocation vector size does not match the graph");
}

}  // namespace

SpectralData spectral_decompose(const TransitionMatrix& w) {
    const int n = w.size();
    const Vector sqrt_k = w.degrees().cwiseSqrt();
    const Vector inv_sqrt_k = sqrt_k.cwiseInverse();
    const Matrix sym = sqrt_k.asDiagonal() * w.matrix() * inv_sqrt_k.asDiagonal();
    const Matrix symmetrized = 0.5 * (sym + sym.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized);
    if (solver.info() != Eigen::Success) throw ValidationError("eigendecomposition failed");

    SpectralData out;
    out.eigenvalues.resize(n);
    Matrix u(n, n);
    for (int m = 0; m < n; ++m) {
        out.eigenvalues(m) = solver.eigenvalues()(n - 1 - m);
        u.col(m) = solver.eigenvectors().col(n - 1 - m);
    }
    if (n > 1 && 1.0 - out.eigenvalues(1) < 1e-10) {
        throw ValidationError("lambda_1 = 1 is degenerate: graph is effectively disconnected");
    }
    if (1.0 + out.eigenvalues(n - 1) < 1e-10) {
        throw ValidationError("lambda_N = -1: graph is effectively bipartite");
    }
    out.eigenvalues(0) = 1.0;
    // Fix the Perron pair to phi_1 = 1, phibar_1 = K / sum K.
    if (u.col(0).sum() < 0.0) u.col(0) = -u.col(0);
    out.right = inv_sqrt_k.asDiagonal() * u;
    out.left = u.transpose() * sqrt_k.asDiagonal();
    const double scale = out.right.col(0).mean();
    out.right.col(0) /= scale;
    out.left.row(0) *= scale;
    return out;
}

std::vector<RowVector> relocated_rows(const TransitionMatrix& w, const RelocationVector& rel,
                                      const ResetLaw& law, std::int64_t t_max) {
    check_sizes(w, rel);
    if (t_max < 0) throw ParameterError("horizon must be >= 0");
    const RenewalTable table = RenewalTable::build(law, t_max);
    std::vector<RowVector> rows(t_max + 1);
    RowVector walk = rel.row();  // R W^s
    for (std::int64_t s = 0; s <= t_max; ++s) {
        RowVector acc = table.persistence[s] * walk;
        for (std::int64_t k = 1; k <= s; ++k) {
            if (table.pdf[k] != 0.0) acc += table.pdf[k] * rows[s - k];
        }
        rows[s] = acc;
        if (s < t_max) walk = walk * w.matrix();
    }
    return rows;
}

PropagatorSeries propagate(const TransitionMatrix& w, const RelocationVector& rel,
                           const ResetLaw& law, std::int64_t t_max) {
    const std::vector<RowVector> rows = relocated_rows(w, rel, law, t_max);
    const RenewalTable table = RenewalTable::build(law, t_max);
    const int n = w.size();
    PropagatorSeries out;
    out.law = law.describe();
    out.relocation = rel.row();
    out.matrices.reserve(t_max + 1);
    Matrix power = Matrix::Identity(n, n);
    for (std::int64_t t = 0; t <= t_max; ++t) {
        RowVector reset_part = RowVector::Zero(n);
        for (std::int64_t k = 1; k <= t; ++k) {
            if (table.pdf[k] != 0.0) reset_part += table.pdf[k] * rows[t - k];
        }
        Matrix p = table.persistence[t] * power;
        p.rowwise() += reset_part;
        out.matrices.push_back(std::move(p));
        if (t < t_max) {
            power = (power * w.matrix()).eval();
            renormalize_rows(power);
        }
    }
    return out;
}

Matrix propagate_at(const TransitionMatrix& w, const RelocationVector& rel, const ResetLaw& law,
                    std::int64_t t) {
    const std::vector<RowVector> rows = relocated_rows(w, rel, law, t);
    const RenewalTable table = RenewalTable::build(law, t);
    RowVector reset_part = RowVector::Zero(w.size());
    for (std::int64_t k = 1; k <= t; ++k) {
        if (table.pdf[k] != 0.0) reset_part += table.pdf[k] * rows[t - k];
    }
    Matrix p = table.persistence[t] * stochastic_power(w.matrix(), t);
    p.rowwise() += reset_part;
    return p;
}

Matrix propagate_spectral(const SpectralData& spec, const RelocationVector& rel,
                          const ResetLaw& law, std::int64_t t) {
    if (spec.size() != rel.size()) throw ParameterError("relocation vector size does not match the graph");
    if (t < 0) throw ParameterError("time must be >= 0");
    const RenewalTable table = RenewalTable::build(law, t);
    const int n = spec.size();
    Vector start_weight(n);
    Vector reset_weight(n);
    for (int m = 0; m < n; ++m) {
        const double lambda = spec.eigenvalues(m);
        start_weight(m) = table.persistence[t] * std::pow(lambda, static_cast<double>(t));
        reset_weight(m) = table.backward_gf(t, lambda) - start_weight(m);
    }
    const RowVector coeff = rel.row() * spec.right;
    Matrix p = spec.right * start_weight.asDiagonal() * spec.left;
    const RowVector reset_row = coeff.cwiseProduct(reset_weight.transpose()) * spec.left;
    p.rowwise() += reset_row;
    return p;
}

NessResult ness(const TransitionMatrix& w, const RelocationVector& rel, const ResetLaw& law) {
    check_sizes(w, rel);
    const auto mean = law.mean_interval();
    if (!mean) return NessResult{w.stationary(), false};
    if (const auto* g = std::get_if<Geometric>(&law.variant())) {
        // p R (1 - qW)^{-1} = pi + p R S with the deflated resolvent S.
        const Matrix s = deflated_resolvent(w.matrix(), w.stationary(), 1.0 - g->p);
        RowVector row = w.stationary() + g->p * (rel.row() * s);
        return NessResult{row, true};
    }
    const std::int64_t horizon = *law.max_interval();
    RowVector acc = RowVector::Zero(w.size());
    RowVector walk = rel.row();
    RenewalStream stream(law);
    for (std::int64_t r = 0; r < horizon; ++r) {
        acc += stream.persistence() * walk;
        stream.advance();
        walk = walk * w.matrix();
    }
    return NessResult{acc / *mean, true};
}

NessResult ness_spectral(const SpectralData& spec, const RelocationVector& rel,
                         const ResetLaw& law) {
    if (spec.size() != rel.size()) throw ParameterError("relocation vector size does not match the graph");
    const RowVector pi = spec.left.row(0);
    const auto mean = law.mean_interval();
    if (!mean) return NessResult{pi, false};
    const RowVector coeff = rel.row() * spec.right;
    RowVector row = pi;
    for (int m = 1; m < spec.size(); ++m) {
        const double lambda = spec.eigenvalues(m);
        const double weight = (1.0 - gf(law, lambda)) / (1.0 - lambda) / *mean;
        row += weight * coeff(m) * spec.left.row(m);
    }
    return NessResult{row, true};
}

Matrix bernoulli_propagator(const TransitionMatrix& w, const RelocationVector& rel, double p,
                            std::int64_t t) {
    check_sizes(w, rel);
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("reset probability must lie in (0, 1]");
    Matrix step = (1.0 - p) * w.matrix();
    step.rowwise() += p * rel.row();
    return stochastic_power(step, t);
}

Matrix periodic_propagator(const TransitionMatrix& w, const RelocationVector& rel,
                           std::int64_t period, std::int64_t t) {
    check_sizes(w, rel);
    if (period < 1) throw ParameterError("reset period must be >= 1");
    if (t < 0) throw ParameterError("time must be >= 0");
    if (t < period) return stochastic_power(w.matrix(), t);
    const Matrix tail = stochastic_power(w.matrix(), t % period);
    return Vector::Ones(w.size()) * (rel.row() * tail);
}

RowVector sibuya_asymptotic_row(const SpectralData& spec, const RelocationVector& rel,
                                double alpha) {
    const RowVector coeff = rel.row() * spec.right;
    RowVector c = RowVector::Zero(spec.size());
    for (int m = 1; m < spec.size(); ++m) {
        c += std::pow(1.0 - spec.eigenvalues(m), alpha - 1.0) * coeff(m) * spec.left.row(m);
    }
    return c;
}

}  // namespace rwreset
