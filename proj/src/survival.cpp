#include "rwreset/survival.hpp"

#include "rwreset/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

namespace rwreset {

KilledSystem kill(const TransitionMatrix& w, const RelocationVector& rel,
                  std::span<const int> targets) {
    const int n = w.size();
    if (rel.size() != n) throw ParameterError("relocation vector size does not match the graph");
    KilledSystem ks;
    ks.target_mask_.assign(n, 0);
    for (int b : targets) {
        if (b < 0 || b >= n) throw ParameterError("target node out of range");
        ks.target_mask_[b] = 1;
    }
    for (int j = 0; j < n; ++j) {
        if (ks.target_mask_[j]) ks.targets_.push_back(j);
    }
    if (ks.targets_.empty()) throw ParameterError("target set is empty");
    if (static_cast<int>(ks.targets_.size()) == n) throw ParameterError("target set covers every node");

    ks.w_ = w.matrix();
    ks.r_ = rel.row();
    ks.degrees_ = w.degrees();
    ks.w_killed_ = w.matrix();
    ks.r_killed_ = rel.row();
    for (int b : ks.targets_) {
        ks.w_killed_.col(b).setZero();
        ks.r_killed_(b) = 0.0;
    }
    ks.row_sums_ = ks.w_killed_.rowwise().sum();
    ks.spectral_radius_ = spectral_radius(ks.w_killed_).value;
    return ks;
}

namespace {

// t^k-weighted sums c_k = sum_t t^k psi(t) Wt^(t-1) 1 and
// m_k = sum_t t^k Phi0(t) Wt^t 1, k = 0..orders-1.
struct KilledSeries {
    std::vector<Vector> c;
    std::vector<Vector> m;
};

constexpr std::int64_t kMaxSeriesTerms = 1'000'000;

KilledSeries killed_series(const KilledSystem& ks, const ResetLaw& law, int orders) {
    const int n = ks.size();
    KilledSeries s;
    s.c.assign(orders, Vector::Zero(n));
    s.m.assign(orders, Vector::Zero(n));
    Vector a = Vector::Ones(n);
    s.m[0] += a;
    const double slack = 1.0 / std::max(1.0 - ks.spectral_radius(), 1e-12);
    RenewalStream stream(law);
    std::vector<double> tk(orders);
    for (std::int64_t t = 1;; ++t) {
        if (t > kMaxSeriesTerms) {
            throw RegimeError("killed-walk series did not converge within 1e6 terms");
        }
        stream.advance();
        const double td = static_cast<double>(t);
        tk[0] = 1.0;
        for (int k = 1; k < orders; ++k) tk[k] = tk[k - 1] * td;
        if (stream.pdf() != 0.0) {
            for (int k = 0; k < orders; ++k) s.c[k] += (stream.pdf() * tk[k]) * a;
        }
        a = ks.w_killed() * a;
        if (stream.persistence() != 0.0) {
            for (int k = 0; k < orders; ++k) s.m[k] += (stream.persistence() * tk[k]) * a;
        }
        const double amax = a.maxCoeff();
        if (amax == 0.0 || stream.exhausted()) break;
        // Remaining mass is at most Phi0(t) |a(t)| per unit weight; the
        // weighted tails pick up powers of the decay time 1 / (1 - rho).
        bool done = true;
        for (int k = 0; k < orders && done; ++k) {
            const double tail = stream.persistence() * amax * std::pow(slack, k + 1) *
                                std::pow(td + slack, k);
            const double scale = std::max({s.c[k].maxCoeff(), s.m[k].maxCoeff(), 1.0});
            done = tail < 1e-14 * scale;
        }
        if (done) break;
    }
    return s;
}

constexpr double kErgodicThreshold = 1.0 - 1e-8;

MfhtResult rank_one_solve(const KilledSystem& ks, const Vector& c, const Vector& m) {
    MfhtResult out;
    const int n = ks.size();
    out.rho = ks.r_killed() * c;
    if (out.rho < kErgodicThreshold) {
        const double sigma = ks.r_killed() * m;
        out.per_start = m + c * (sigma / (1.0 - out.rho));
        out.global = out.per_start.mean();
        out.finite = true;
    } else {
        out.per_start = Vector::Constant(n, kInfinity);
        out.global = kInfinity;
        out.finite = false;
    }
    return out;
}

// f(x) evaluated as sum_k coeff[k] x^k near zero and by a closed form elsewhere,
// together with h(x) = (f(x) - f(0)) / x.
struct SeriesFunction {
    std::function<double(double)> closed;
    std::vector<double> coeff;

    double f(double x) const {
        if (std::abs(x) < 0.05) {
            double acc = 0.0;
            for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) acc = acc * x + *it;
            return acc;
        }
        return closed(x);
    }
    double h(double x) const {
        if (std::abs(x) < 0.05) {
            double acc = 0.0;
            for (std::size_t k = coeff.size() - 1; k >= 1; --k) acc = acc * x + coeff[k];
            return acc;
        }
        return (closed(x) - coeff[0]) / x;
    }
};

constexpr int kTaylorTerms = 40;

std::vector<double> pdf_coefficients(const ResetLaw& law, int shift) {
    std::vector<double> out;
    if (shift == 0) out.push_back(0.0);
    RenewalStream stream(law);
    for (int t = 1; static_cast<int>(out.size()) < kTaylorTerms; ++t) {
        stream.advance();
        if (t >= shift) out.push_back(stream.pdf());
    }
    return out;
}

std::vector<double> persistence_coefficients(const ResetLaw& law) {
    std::vector<double> out{1.0};
    RenewalStream stream(law);
    while (static_cast<int>(out.size()) < kTaylorTerms) {
        stream.advance();
        out.push_back(stream.persistence());
    }
    return out;
}

Matrix apply(const KilledSystem& ks, const SeriesFunction& fn) {
    return killed_matrix_function(
        ks, [&](double x) { return fn.f(x); }, [&](double x) { return fn.h(x); });
}

}  // namespace

HittingStats survival_series(const KilledSystem& ks, const ResetLaw& law, std::int64_t t_max) {
    if (t_max < 1) throw ParameterError("horizon must be >= 1");
    const int n = ks.size();
    const RenewalTable table = RenewalTable::build(law, t_max);
    Matrix a(n, t_max + 1);  // a(k) = Wt^k 1
    a.col(0).setOnes();
    for (std::int64_t k = 1; k <= t_max; ++k) a.col(k) = ks.w_killed() * a.col(k - 1);

    HittingStats out;
    out.survival.resize(n, t_max + 1);
    out.fht_pdf.resize(n, t_max + 1);
    out.survival.col(0).setOnes();
    out.fht_pdf.col(0).setZero();
    std::vector<double> sigma(t_max + 1);  // Rt . Lambda(s)
    sigma[0] = ks.r_killed().sum();
    Vector weights(t_max);
    for (std::int64_t t = 1; t <= t_max; ++t) {
        for (std::int64_t k = 1; k <= t; ++k) weights(k - 1) = table.pdf[k] * sigma[t - k];
        Vector lambda = table.persistence[t] * a.col(t);
        lambda.noalias() += a.leftCols(t) * weights.head(t);
        out.survival.col(t) = lambda;
        out.fht_pdf.col(t) = out.survival.col(t - 1) - lambda;
        sigma[t] = ks.r_killed() * lambda;
    }
    return out;
}

std::vector<Matrix> survival_propagator(const Matrix& w, const RowVector& r, const ResetLaw& law,
                                        std::int64_t t_max) {
    if (t_max < 0) throw ParameterError("horizon must be >= 0");
    const Eigen::Index n = w.rows();
    const RenewalTable table = RenewalTable::build(law, t_max);
    std::vector<Vector> a(t_max + 1);
    a[0] = Vector::Ones(n);
    for (std::int64_t k = 1; k <= t_max; ++k) a[k] = w * a[k - 1];

    std::vector<RowVector> rows(t_max + 1);  // r P(s)
    RowVector walk = r;                      // r W^s
    for (std::int64_t s = 0; s <= t_max; ++s) {
        RowVector acc = table.persistence[s] * walk;
        for (std::int64_t k = 1; k <= s; ++k) {
            if (table.pdf[k] != 0.0) acc += (table.pdf[k] * r.dot(a[k - 1])) * rows[s - k];
        }
        rows[s] = acc;
        walk = walk * w;
    }

    std::vector<Matrix> out;
    out.reserve(t_max + 1);
    Matrix power = Matrix::Identity(n, n);
    for (std::int64_t t = 0; t <= t_max; ++t) {
        Matrix p = table.persistence[t] * power;
        for (std::int64_t k = 1; k <= t; ++k) {
            if (table.pdf[k] != 0.0) p.noalias() += table.pdf[k] * a[k - 1] * rows[t - k];
        }
        out.push_back(std::move(p));
        power = (power * w).eval();
    }
    return out;
}

std::vector<Matrix> survival_propagator(const KilledSystem& ks, const ResetLaw& law,
                                        std::int64_t t_max) {
    return survival_propagator(ks.w_killed(), ks.r_killed(), law, t_max);
}

MfhtResult mfht(const KilledSystem& ks, const ResetLaw& law) {
    const KilledSeries s = killed_series(ks, law, 1);
    return rank_one_solve(ks, s.c[0], s.m[0]);
}

Matrix killed_matrix_function(const KilledSystem& ks, const std::function<double(double)>& f,
                              const std::function<double(double)>& h) {
    const int n = ks.size();
    std::vector<int> free_nodes;
    for (int j = 0; j < n; ++j) {
        if (!ks.is_target(j)) free_nodes.push_back(j);
    }
    const auto& targets = ks.targets();
    const int n1 = static_cast<int>(free_nodes.size());

    // A = D^{-1} Adj on the free nodes is similar to the symmetric
    // D^{1/2} A D^{-1/2}.
    Vector sqrt_k(n1);
    Matrix sym(n1, n1);
    for (int a = 0; a < n1; ++a) sqrt_k(a) = std::sqrt(ks.degrees()(free_nodes[a]));
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n1; ++b) {
            sym(a, b) = sqrt_k(a) * ks.w_killed()(free_nodes[a], free_nodes[b]) / sqrt_k(b);
        }
    }
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    const Vector& lambda = solver.eigenvalues();
    const Matrix& u = solver.eigenvectors();
    Vector fl(n1), hl(n1);
    for (int m = 0; m < n1; ++m) {
        fl(m) = f(lambda(m));
        hl(m) = h(lambda(m));
    }
    const Matrix left = sqrt_k.cwiseInverse().asDiagonal() * u;
    const Matrix right = u.transpose() * sqrt_k.asDiagonal();
    const Matrix fa = left * fl.asDiagonal() * right;
    const Matrix ha = left * hl.asDiagonal() * right;

    Matrix out = Matrix::Zero(n, n);
    const double f0 = f(0.0);
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n1; ++b) out(free_nodes[a], free_nodes[b]) = fa(a, b);
    }
    for (int bt : targets) {
        RowVector c(n1);
        for (int a = 0; a < n1; ++a) c(a) = ks.w_killed()(bt, free_nodes[a]);
        const RowVector ch = c * ha;
        for (int a = 0; a < n1; ++a) out(bt, free_nodes[a]) = ch(a);
        out(bt, bt) = f0;
    }
    return out;
}

MfhtResult mfht_spectral(const KilledSystem& ks, const ResetLaw& law) {
    const SeriesFunction gbar{[&](double x) { return shifted_gf(law, x); }, pdf_coefficients(law, 1)};
    const SeriesFunction phibar{[&](double x) { return (1.0 - gf(law, x)) / (1.0 - x); },
                                persistence_coefficients(law)};
    const Vector ones = Vector::Ones(ks.size());
    return rank_one_solve(ks, apply(ks, gbar) * ones, apply(ks, phibar) * ones);
}

MfhtResult mfht_sibuya_pseudo_inverse(const KilledSystem& ks, double alpha, double eps) {
    const ResetLaw law = ResetLaw::sibuya(alpha);
    // Wt_eps^{-1} psibar(Wt) as one spectral function x psibar(x) / (x^2 + eps^2);
    // psibar(x) = 1 - (1 - x)^alpha, so f(0) = 0 and h(x) = psibar(x) / (x^2 + eps^2).
    const SeriesFunction psibar{[&](double x) { return gf(law, x); }, pdf_coefficients(law, 0)};
    const double e2 = eps * eps;
    const Matrix g = killed_matrix_function(
        ks, [&](double x) { return x * psibar.f(x) / (x * x + e2); },
        [&](double x) { return psibar.f(x) / (x * x + e2); });
    const SeriesFunction phibar{[&](double x) { return std::pow(1.0 - x, alpha - 1.0); },
                                persistence_coefficients(law)};
    const Vector ones = Vector::Ones(ks.size());
    return rank_one_solve(ks, g * ones, apply(ks, phibar) * ones);
}

std::string to_string(ErgodicityClass c) {
    switch (c) {
        case ErgodicityClass::ErgodicSufficient: return "ergodic-sufficient";
        case ErgodicityClass::NonErgodicHallmark: return "non-ergodic-hallmark";
        case ErgodicityClass::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(HittingStatus s) {
    switch (s) {
        case HittingStatus::Ergodic: return "ergodic";
        case HittingStatus::FiniteSupportTrap: return "finite-support-trap";
        case HittingStatus::Plateau: return "plateau";
        case HittingStatus::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Positivity pattern of sum_{t : psi(t) > 0} W^(t-1) (rows) or of the same
// sum applied to a row vector.
struct PatternScan {
    bool matrix_positive = false;
    bool row_positive = false;
};

PatternScan gbar_pattern(const Matrix& w, const RowVector& r, const ResetLaw& law) {
    const Eigen::Index n = w.rows();
    const auto support = law.max_interval();
    const bool infinite_support = !support.has_value() ||
        (std::holds_alternative<Geometric>(law.variant()) && std::get<Geometric>(law.variant()).p < 1.0);
    const Matrix pattern_w = (w.array() > 0.0).cast<double>().matrix();
    Matrix acc = Matrix::Zero(n, n);
    RowVector acc_row = RowVector::Zero(n);
    Matrix power = Matrix::Identity(n, n);  // pattern of W^(t-1)
    RowVector row = (r.array() > 0.0).cast<double>().matrix();
    RenewalStream stream(law);
    // An aperiodic irreducible pattern is positive from (N-1)^2 + 1 on.
    const std::int64_t stable = (n - 1) * (n - 1) + 2;
    const std::int64_t last = infinite_support ? stable : std::min<std::int64_t>(*support, stable);
    for (std::int64_t t = 1; t <= last; ++t) {
        stream.advance();
        if (stream.pdf() > 0.0) {
            acc = ((acc + power).array() > 0.0).cast<double>().matrix();
            acc_row = ((acc_row + row).array() > 0.0).cast<double>().matrix();
        }
        const bool power_positive = (power.array() > 0.0).all();
        if (power_positive && stream.persistence() > 0.0) {
            // Some later t carries mass, and every later power is positive.
            acc.setOnes();
            acc_row.setOnes();
            break;
        }
        power = ((power * pattern_w).array() > 0.0).cast<double>().matrix();
        row = ((row * pattern_w).array() > 0.0).cast<double>().matrix();
    }
    return PatternScan{(acc.array() > 0.0).all(), (acc_row.array() > 0.0).all()};
}

}  // namespace

ErgodicityReport ergodicity_check(const KilledSystem& ks, const ResetLaw& law) {
    ErgodicityReport out;
    const KilledSeries s = killed_series(ks, law, 1);
    out.rho = ks.r_killed() * s.c[0];
    if (out.rho < kErgodicThreshold) {
        out.classification = ErgodicityClass::ErgodicSufficient;
    } else if (std::abs(out.rho - 1.0) <= 1e-8) {
        out.classification = ErgodicityClass::NonErgodicHallmark;
    } else {
        out.classification = ErgodicityClass::Inconclusive;
    }
    const PatternScan scan = gbar_pattern(ks.w(), ks.r(), law);
    out.gbar_positive = scan.matrix_positive;
    out.relocation_positive = (ks.r().array() > 0.0).all();
    out.relocated_gbar_positive = scan.row_positive;
    return out;
}

int relocation_target_distance(const KilledSystem& ks) {
    const int n = ks.size();
    std::vector<int> dist(n, -1);
    std::deque<int> queue;
    for (int j = 0; j < n; ++j) {
        if (ks.r()(j) > 0.0) {
            dist[j] = 0;
            queue.push_back(j);
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (ks.is_target(u)) return dist[u];
        for (int v = 0; v < n; ++v) {
            if (ks.w()(u, v) > 0.0 && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return -1;
}

HittingProbability hitting_probability(const KilledSystem& ks, const ResetLaw& law,
                                       std::int64_t t_plateau) {
    if (t_plateau < 1) throw ParameterError("plateau horizon must be >= 1");
    const int n = ks.size();
    HittingProbability out;
    const ErgodicityReport report = ergodicity_check(ks, law);
    if (report.classification == ErgodicityClass::ErgodicSufficient) {
        out.probability = Vector::Ones(n);
        out.status = HittingStatus::Ergodic;
        return out;
    }
    const auto horizon = law.max_interval();
    const int distance = relocation_target_distance(ks);
    if (horizon && (distance < 0 || distance > *horizon)) {
        // After the first reset the walker never reaches a target, so the
        // surviving mass is the probability to survive until that reset.
        Vector a = Vector::Ones(n);
        Vector c = Vector::Zero(n);
        RenewalStream stream(law);
        for (std::int64_t t = 1; t <= *horizon; ++t) {
            stream.advance();
            c += stream.pdf() * a;
            a = ks.w_killed() * a;
        }
        out.probability = Vector::Ones(n) - c;
        out.status = HittingStatus::FiniteSupportTrap;
        return out;
    }
    const HittingStats stats = survival_series(ks, law, t_plateau);
    const std::int64_t window =
        horizon ? std::min<std::int64_t>(*horizon, t_plateau / 2) : std::max<std::int64_t>(1, t_plateau / 10);
    const Vector last = stats.survival.col(t_plateau);
    double drift = 0.0;
    for (std::int64_t t = t_plateau - window; t <= t_plateau; ++t) {
        drift = std::max(drift, (stats.survival.col(t) - last).cwiseAbs().maxCoeff());
    }
    out.probability = Vector::Ones(n) - last;
    out.status = drift < 1e-10 ? HittingStatus::Plateau : HittingStatus::Inconclusive;
    return out;
}

Vector moments(const KilledSystem& ks, const ResetLaw& law, int order) {
    if (order < 1 || order > 4) throw ParameterError("moment order must lie in 1..4");
    const int n = ks.size();
    const KilledSeries s = killed_series(ks, law, order);
    const double rho0 = ks.r_killed() * s.c[0];
    if (!(rho0 < kErgodicThreshold)) return Vector::Constant(n, kInfinity);

    static constexpr std::array<std::array<double, 5>, 5> binom{{
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}}};
    std::vector<double> rho(order), sigma(order), z(order);
    for (int k = 0; k < order; ++k) {
        rho[k] = ks.r_killed() * s.c[k];
        sigma[k] = ks.r_killed() * s.m[k];
    }
    // z = sigma / (1 - rho) differentiated with Leibniz' rule.
    for (int k = 0; k < order; ++k) {
        double acc = sigma[k];
        for (int j = 0; j < k; ++j) acc += binom[k][j] * z[j] * rho[k - j];
        z[k] = acc / (1.0 - rho0);
    }
    // L_k = sum_t t^k Lambda(t); E[T^m] = sum_{k<m} C(m,k) L_k.
    Vector result = Vector::Zero(n);
    for (int k = 0; k < order; ++k) {
        Vector lk = s.m[k];
        for (int j = 0; j <= k; ++j) lk += binom[k][j] * z[k - j] * s.c[j];
        result += binom[order][k] * lk;
    }
    return result;
}

}  // namespace rwreset
