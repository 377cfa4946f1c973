#pragma once

#include <cstdint>
#include <vector>

#include "ptchain/spectrum.hpp"

namespace ptchain {

inline constexpr std::int64_t kDefaultFockDimensionCap = 20'000;

/// Truncated product basis: each site carries the unit-oscillator states
/// |0..cutoff>, total dimension (cutoff+1)^n_sites.
struct FockBasisSpec {
    int cutoff = 10;
    int n_sites = 2;

    std::int64_t dimension() const;
};

/// Dense matrix of the chain Hamiltonian in the truncated basis, complex
/// symmetric.  Site terms use the ladder-operator matrix elements
///   <m|x|n>   = sqrt(n/2) delta_{m,n-1} + sqrt((n+1)/2) delta_{m,n+1},
///   <n|p^2|n> = n + 1/2,  <n|p^2|n+-2> = -sqrt((n+1)(n+2))/2 (shifted),
/// and the coupling contributes i*gamma*x_j*x_{j+1}.
ComplexMatrix build_fock_hamiltonian(const ChainSpec& spec, const FockBasisSpec& basis,
                                     std::int64_t dimension_cap = kDefaultFockDimensionCap,
                                     int threads = 1);

/// Same builder without ChainSpec validation; supports a single site for
/// sanity checks against the exact oscillator ladder.
ComplexMatrix fock_hamiltonian_sites(const std::vector<double>& omega_sq, double gamma,
                                     int cutoff,
                                     std::int64_t dimension_cap = kDefaultFockDimensionCap,
                                     int threads = 1);

/// Exact trace of the truncated matrix (sum of the diagonal site terms),
/// for the finite-sum trace identity.
Complex fock_trace_identity(const std::vector<double>& omega_sq, int cutoff);

struct LevelMatch {
    OccupationVector occ;
    Complex analytic;
    Complex numeric;
    double distance = 0.0;
};

struct SpectralComparison {
    int cutoff = 0;
    std::int64_t dimension = 0;
    std::vector<LevelMatch> matches;
    double max_distance = 0.0;
};

/// Diagonalizes the truncated Hamiltonian and greedily matches the
/// numeric eigenvalues to the analytic levels with total quanta
/// <= max_total_quanta (default cutoff/4, where truncation bias is
/// negligible).  Matching is injective, by ascending distance; throws
/// MatchingAmbiguous when two analytic levels compete for one eigenvalue
/// within a tenth of the typical level spacing.
SpectralComparison fock_spectrum_check(const ChainSpec& spec, const FockBasisSpec& basis,
                                       int max_total_quanta = -1,
                                       std::int64_t dimension_cap = kDefaultFockDimensionCap);

/// Eigenvalues of the truncated Hamiltonian (no eigenvectors).
std::vector<Complex> fock_eigenvalues(const ComplexMatrix& h);

}  // namespace ptchain
