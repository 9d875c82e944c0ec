#pragma once

#include "rwreset/common.hpp"

#include <cstdint>

namespace rwreset {

/// Clips entries in (-1e-14, 0) to zero and rescales rows whose sum drifted
/// from 1 by more than 1e-13. Larger negative entries are left alone so that
/// genuine errors stay visible.
void renormalize_rows(Matrix& m);

/// M^t for a row-stochastic M by repeated squaring, renormalizing after
/// every product.
Matrix stochastic_power(const Matrix& m, std::int64_t t);

/// Plain M^t by repeated squaring (no stochasticity assumed).
Matrix matrix_power(const Matrix& m, std::int64_t t);

struct SpectralRadius {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Perron root of |M| by power iteration on |M| + I, bracketed by the
/// Collatz-Wielandt bounds. Stops when upper - lower < tol.
SpectralRadius spectral_radius(const Matrix& m, double tol = 1e-12, int max_iterations = 100000);

/// (1 - qW + 1 pi)^{-1} - 1 pi / (2 - q) for a row-stochastic W with
/// stationary row pi. Equals (1 - qW)^{-1} - 1 pi / (1 - q) for q < 1 and
/// stays well conditioned as q -> 1, where it tends to the deviation matrix.
Matrix deflated_resolvent(const Matrix& w, const RowVector& pi, double q);

}  // namespace rwreset
