#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ptchain/errors.hpp"

namespace ptchain {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// A chain of n harmonic oscillators with squared natural frequencies
/// omega_sq[j] and nearest-neighbour coupling i*gamma*x_j*x_{j+1}.
/// All quantities are dimensionless.
struct ChainSpec {
    int n = 0;
    std::vector<double> omega_sq;
    double gamma = 0.0;

    /// Throws InvalidSpec unless n >= 2, omega_sq has n entries, all > 0.
    void validate() const;

    /// True iff every omega_sq[j] equals 1 (the closed-form chain).
    bool uniform() const;

    /// Chain with omega_j = 1 everywhere.
    static ChainSpec uniform_chain(int n, double gamma);
};

/// Tridiagonal complex-symmetric matrix with diagonal omega_sq[j] and
/// off-diagonal i*gamma.  Complex symmetric (M = M^T), not Hermitian
/// unless gamma = 0.
struct CouplingMatrix {
    ComplexMatrix entries;

    int size() const { return static_cast<int>(entries.rows()); }
    const ComplexMatrix& matrix() const { return entries; }
};

CouplingMatrix build_coupling_matrix(const ChainSpec& spec);

/// Coefficients of the monic characteristic polynomial
/// p(lambda) = det(lambda*I - M), ascending order (coeffs[k] multiplies
/// lambda^k, coeffs[n] = 1).  All coefficients are real because the
/// off-diagonal squares contribute (i*gamma)^2 = -gamma^2.
/// Built by the tridiagonal three-term recurrence
///   p_k = (lambda - omega_k^2) p_{k-1} + gamma^2 p_{k-2},
/// p_0 = 1, p_{-1} = 0.
std::vector<double> characteristic_polynomial(const ChainSpec& spec);

/// Evaluates an ascending-coefficient polynomial at a complex point.
Complex evaluate_polynomial(const std::vector<double>& coeffs, Complex lambda);

}  // namespace ptchain
