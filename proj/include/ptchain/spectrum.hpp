#pragma once

#include <cstdint>
#include <vector>

#include "ptchain/modes.hpp"

namespace ptchain {

/// Quanta per decoupled mode, in mode-set order.
using OccupationVector = std::vector<int>;

struct EnergyLevel {
    OccupationVector occ;
    Complex energy;
    /// Set from the pairing rule: occupations equal within every conjugate
    /// pair.  Coincides with |Im energy| <= reality_tol away from phase
    /// boundaries.
    bool is_real = false;
    /// Re(energy) rounded to the grouping tolerance, for degeneracy counts.
    double degeneracy_key = 0.0;
};

inline constexpr double kRealityTol = 1e-10;
inline constexpr double kDegeneracyGroupTol = 1e-9;
inline constexpr std::int64_t kDefaultLevelCap = 1'000'000;

/// E_0 = (1/2) sum_j nu_j.  Real for every uniform chain.
Complex ground_state_energy(const ChainSpec& spec);

/// E = sum_j nu_j (n_j + 1/2) with the reality flag from the pairing rule.
EnergyLevel level_energy(const ChainSpec& spec, const OccupationVector& occ);
EnergyLevel level_energy(const ModeSet& modes, const OccupationVector& occ);

/// All levels with total quanta <= max_quanta, sorted by
/// (Re E ascending, Im E ascending).  The count is C(max_quanta + n, n);
/// throws CombinatorialOverflow beyond level_cap.
std::vector<EnergyLevel> enumerate_levels(const ChainSpec& spec, int max_quanta,
                                          std::int64_t level_cap = kDefaultLevelCap,
                                          int threads = 1);

/// Number of levels enumerate_levels would produce, as a double so the
/// cap check cannot itself overflow.
double level_count(int n, int max_quanta);

/// Ground state psi_0(x) ~ exp(-x^T A x / 2) with A the principal square
/// root of the coupling matrix.
struct GaussianGroundState {
    ComplexMatrix a_matrix;
    Complex energy;  ///< trace(A)/2
};

/// Computes A via the spectral decomposition when the modes are well
/// separated, falling back to a Denman-Beavers iteration near exceptional
/// points (where the transform is ill-conditioned but the square root
/// still exists).  Throws DegenerateModes only if the iteration fails.
GaussianGroundState ground_state_gaussian(const ChainSpec& spec);

/// Unnormalized eigenfunction values at arbitrary points:
///   psi(x) = prod_j H_{n_j}(sqrt(nu_j) q_j) exp(-nu_j q_j^2 / 2),
/// q = V^T x.  Requires nondegenerate modes.
struct EigenfunctionSample {
    OccupationVector occ;
    std::vector<std::vector<double>> points;
    std::vector<Complex> values;
};

EigenfunctionSample eigenfunction_evaluate(const ChainSpec& spec, const OccupationVector& occ,
                                           const std::vector<std::vector<double>>& points);

/// Physicists' Hermite polynomial H_k at a complex argument, by the
/// forward recurrence H_{k+1} = 2 z H_k - 2 k H_{k-1}.
Complex hermite(int k, Complex z);

/// Deviation of psi from partial-PT symmetry under sign reversal of the
/// coordinates in flip_set (0-based):
///   residual = min over s in {+1,-1} of
///              max_points |conj(psi(flip(x))) - s psi(x)| / max|psi|.
struct PtResidual {
    double residual = 0.0;
    int sign = +1;  ///< the minimizing s
};

PtResidual partial_pt_residual(const ChainSpec& spec, const OccupationVector& occ,
                               const std::vector<std::vector<double>>& points,
                               const std::vector<int>& flip_set);

}  // namespace ptchain
