#pragma once

#include <vector>

#include "ptchain/modes.hpp"

namespace ptchain {

/// Complexified positions and velocities of the chain at one instant.
struct ClassicalState {
    double t = 0.0;
    std::vector<Complex> x;
    std::vector<Complex> v;
};

/// a_j = -omega_j^2 x_j - i gamma (x_{j-1} + x_{j+1})  (== -M x).
std::vector<Complex> equations_of_motion(const ChainSpec& spec, const ClassicalState& state);

/// Complex energy H = (1/2) sum v_j^2 + (1/2) x^T M x (unconjugated
/// transposes); exactly conserved by the true flow in every phase.
Complex classical_energy(const ChainSpec& spec, const ClassicalState& state);

/// Amplitudes of the exact solution q_j(t) = c+_j e^{i nu_j t}
///                                         + c-_j e^{-i nu_j t}
/// in the decoupled coordinates q = V^T x.
struct ModeAmplitudes {
    double t0 = 0.0;  ///< time the amplitudes were fitted at
    std::vector<Complex> c_plus;
    std::vector<Complex> c_minus;
    ModeSet modes;
    ComplexMatrix transform;

    ClassicalState reconstruct(double t) const;
};

/// Throws DegenerateModes at exceptional points, where the analytic
/// solution picks up secular t*e^{i nu t} terms (the integrator still
/// works there).
ModeAmplitudes mode_decompose(const ChainSpec& spec, const ClassicalState& init);

/// Uniformly sampled trajectory plus its conserved-energy ledger.
struct TrajectoryRecord {
    ChainSpec spec;
    ClassicalState init;
    double dt_out = 0.0;
    std::vector<ClassicalState> states;
    std::vector<Complex> energy;
};

/// Fixed-step RK4 on the first-order system (x, v).  dt is snapped to an
/// integer divisor of dt_out so samples land exactly on the output grid.
/// Aborts with StepTooLarge if the energy drift exceeds ten times the
/// integrator contract mid-run; the drift is normalized by the running
/// magnitude scale of the energy (the conserved H itself does not grow
/// along spiraling trajectories, so it cannot serve as the normalizer).
TrajectoryRecord integrate(const ChainSpec& spec, const ClassicalState& init, double dt,
                           double t_end, double dt_out);

enum class TrajectoryKind { Bounded, Growing, Decaying, Secular };

struct TrajectoryClass {
    TrajectoryKind kind = TrajectoryKind::Bounded;
    double rate = 0.0;            ///< e-folding rate for Growing/Decaying
    double rate_half_width = 0.0; ///< 95% interval half-width (fit route only)
};

/// Classification from the analytic amplitudes: Growing with
/// rate = max |Im nu_j| over modes excited on a growing branch, Decaying
/// when every excited branch decays, Bounded when all excited modes are
/// real, Secular at exceptional points.  excite_tol ignores amplitudes
/// that vanish to rounding.
TrajectoryClass classify_trajectory(const ChainSpec& spec, const ClassicalState& init,
                                    double excite_tol = 1e-12);

/// Fallback classification from a sampled record: fits the slope of
/// log(windowed max |x|) and reports the 95% confidence half-width.
/// Requires at least ten periods of the slowest mode (InsufficientData).
TrajectoryClass classify_trajectory(const TrajectoryRecord& record);

enum class ComplexPart { Re, Im };
enum class CrossingDirection { Ascending, Descending, Both };

/// Section surface part(x[coord]) == level, crossed in the configured
/// direction; points are (part(x[project]), part(v[project])) at the
/// crossings, refined by cubic Hermite interpolation of the stored states
/// with derivatives supplied by the equations of motion.
struct SectionConfig {
    int coord = 1;
    ComplexPart part = ComplexPart::Re;
    double level = 0.0;
    CrossingDirection direction = CrossingDirection::Ascending;
    int project = 0;
    ComplexPart project_part = ComplexPart::Re;
};

struct PoincareSection {
    SectionConfig config;
    int interpolation_order = 3;
    std::vector<double> times;
    std::vector<std::pair<double, double>> points;
};

PoincareSection poincare_section(const TrajectoryRecord& record, const SectionConfig& config);

}  // namespace ptchain
