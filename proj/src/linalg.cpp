#include "rwreset/linalg.hpp"

#include <cmath>

namespace rwreset {

void renormalize_rows(Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double& x = m(i, j);
            if (x < 0.0 && x > -1e-14) x = 0.0;
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-13 && sum > 0.0) m.row(i) /= sum;
    }
}

Matrix stochastic_power(const Matrix& m, std::int64_t t) {
    if (t < 0) throw ParameterError("matrix power needs t >= 0");
    Matrix result = Matrix::Identity(m.rows(), m.cols());
    Matrix base = m;
    bool first = true;
    while (t > 0) {
        if (t & 1) {
            if (first) {
                result = base;
                first = false;
            } else {
                result = (result * base).eval();
                renormalize_rows(result);
            }
        }
        t >>= 1;
        if (t > 0) {
            base = (base * base).eval();
            renormalize_rows(base);
        }
    }
    return result;
}

Matrix matrix_power(const Matrix& m, std::int64_t t) {
    if (t < 0) throw ParameterError("matrix power needs t >= 0");
    Matrix result = Matrix::Identity(m.rows(), m.cols());
    Matrix base = m;
    while (t > 0) {
        if (t & 1) result = (result * base).eval();
        t >>= 1;
        if (t > 0) base = (base * base).eval();
    }
    return result;
}

SpectralRadius spectral_radius(const Matrix& m, double tol, int max_iterations) {
    const Eigen::Index n = m.rows();
    SpectralRadius out;
    if (n == 0) {
        out.converged = true;
        return out;
    }
    // The shift keeps every iterate strictly positive, so the Collatz-Wielandt
    // ratios are defined even for reducible or nilpotent blocks.
    const Matrix b = m.cwiseAbs() + Matrix::Identity(n, n);
    Vector x = Vector::Ones(n);
    for (int it = 1; it <= max_iterations; ++it) {
        const Vector y = b * x;
        const Vector ratio = y.cwiseQuotient(x);
        out.lower = ratio.minCoeff() - 1.0;
        out.upper = ratio.maxCoeff() - 1.0;
        out.iterations = it;
        x = y / y.maxCoeff();
        if (out.upper - out.lower < tol) {
            out.converged = true;
            break;
        }
    }
    out.lower = std::max(out.lower, 0.0);
    // Without convergence (reducible M) only the upper bound is known to
    // approach the Perron root.
    out.value = out.converged ? 0.5 * (out.lower + out.upper) : out.upper;
    return out;
}

Matrix deflated_resolvent(const Matrix& w, const RowVector& pi, double q) {
    const Eigen::Index n = w.rows();
    const Matrix proj = Vector::Ones(n) * pi;
    const Matrix a = Matrix::Identity(n, n) - q * w + proj;
    return a.partialPivLu().inverse() - proj / (2.0 - q);
}

}  // namespace rwreset
