#pragma once

#include <complex>
#include <vector>

#include "ptchain/chain.hpp"

namespace ptchain {

/// Square root with Re(w) > 0, tie broken toward Im(w) >= 0 on the
/// imaginary axis.  This is the branch applied to every mode frequency
/// and to the ground-state matrix, so that all decoupled oscillators
/// have frequencies in the right half-plane.
inline Complex principal_sqrt(Complex z) {
    Complex w = std::sqrt(z);
    if (w.real() < 0.0 || (w.real() == 0.0 && w.imag() < 0.0)) w = -w;
    return w;
}

/// Describes how one or two mode indices relate under complex conjugation.
struct ModePair {
    enum class Kind { ConjugatePair, RealSingleton };
    Kind kind = Kind::RealSingleton;
    int a = -1;  ///< first index (Im nu > 0 member of a conjugate pair)
    int b = -1;  ///< partner index, -1 for a singleton

    static ModePair conjugate(int a, int b) { return {Kind::ConjugatePair, a, b}; }
    static ModePair singleton(int j) { return {Kind::RealSingleton, j, -1}; }
};

/// Decoupled normal-mode frequencies of a chain.
///
/// nu[j] is the principal square root of nu_sq[j]; pairing partitions the
/// indices into exact conjugate pairs and real singletons.  Within a
/// conjugate pair the stored values satisfy nu[b] == conj(nu[a]) exactly
/// (the raw eigensolver output is symmetrized), and singletons have
/// Im nu == 0 exactly; both operations move values by less than
/// branch_tol*(1+|nu|).
struct ModeSet {
    std::vector<Complex> nu_sq;
    std::vector<Complex> nu;
    std::vector<ModePair> pairing;
    double branch_tol = 1e-8;

    int size() const { return static_cast<int>(nu.size()); }
};

/// Closed-form modes of the uniform chain:
///   nu_sq[j-1] = 1 + 2i*gamma*cos(j*pi/(n+1)),  j = 1..n,
/// in that analytic order; index j-1 pairs with index n-j, and the middle
/// index of an odd chain is the real mode nu = 1.
ModeSet uniform_mode_frequencies(int n, double gamma, double branch_tol = 1e-8);

/// Modes of an arbitrary chain: the eigenvalues of the coupling matrix
/// (equivalently the roots of the characteristic polynomial), ordered by
/// Re nu descending with Im nu descending inside groups of equal real
/// part, then paired by greedy conjugate matching within branch_tol.
///
/// The eigenvalues are computed from the tridiagonal matrix itself
/// (Hessenberg QR); see the project notes for why the companion-matrix
/// form of the same computation is avoided at large n.
ModeSet general_mode_frequencies(const ChainSpec& spec, double branch_tol = 1e-8);

/// Dispatch: closed form for uniform chains (preserving the analytic
/// order), general solver otherwise.
ModeSet mode_set(const ChainSpec& spec, double branch_tol = 1e-8);

/// A mode set together with the complex-orthogonal transform that
/// realizes it: V^T V = I and M = V diag(nu_sq) V^T, columns in mode
/// order.
struct DecoupledSystem {
    ModeSet modes;
    ComplexMatrix transform;
};

/// Complex-orthogonal decoupling transform.  For uniform chains this is
/// the real sine transform V(j,k) = sqrt(2/(n+1)) sin((j+1)(k+1)pi/(n+1));
/// otherwise it is assembled from eigenvectors normalized to v^T v = 1.
/// Throws DegenerateModes when two nu_sq coincide within tolerance
/// (exceptional point): a complex-orthogonal diagonalization may not
/// exist there, and this refuses rather than returning a defective one.
DecoupledSystem decouple(const ChainSpec& spec, double branch_tol = 1e-8);

/// Transform matrix only (see decouple()).
ComplexMatrix decoupling_transform(const ChainSpec& spec, double branch_tol = 1e-8);

}  // namespace ptchain
