#pragma once

#include <Eigen/Dense>

namespace crg::numerics {

// Largest eigenvalue modulus of a square matrix, accurate to 1e-6 or better
// at the small sizes used throughout (n ≤ 6).
//
// Throws std::runtime_error when the underlying eigenvalue iteration fails to
// converge (defective or borderline spectra).  Callers that only need a
// stability verdict should use is_schur(), which falls back to a power-decay
// test in that situation instead of propagating the error.
double spectral_radius(const Eigen::MatrixXd& A);

// True iff all eigenvalues of A lie strictly inside the unit circle.
//
// Primary route: spectral_radius(A) < 1 − margin.  If the eigenvalue
// iteration does not converge, falls back to testing geometric decay of the
// powers ‖A^k‖∞: convergence of Σ‖A^k‖ (decay below 1e-12) certifies a Schur
// matrix, blow-up past 1e12 certifies the opposite.
bool is_schur(const Eigen::MatrixXd& A, double margin = 0.0);

}  // namespace crg::numerics
