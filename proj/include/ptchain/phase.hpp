#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ptchain/modes.hpp"

namespace ptchain {

/// 0 = Unbroken, 1 = Exceptional, 2 = Broken; the integer codes are the
/// ones written to grid CSV output.
enum class PhaseVariant : std::uint8_t { Unbroken = 0, Exceptional = 1, Broken = 2 };

std::string to_string(PhaseVariant v);

/// Classification of one parameter point.
///   Unbroken    - all nu_sq real, positive and pairwise distinct beyond tol
///   Exceptional - real spectrum with a degeneracy within tol
///   Broken      - anything else (some nu_sq complex, or nonpositive)
/// witness_a/witness_b hold the index of a complex nu_sq (Broken) or the
/// near-degenerate pair (Exceptional) when the classification came from
/// explicit roots; closed-form classifiers leave them at -1.
struct PhaseClass {
    PhaseVariant variant = PhaseVariant::Broken;
    int witness_a = -1;
    int witness_b = -1;
};

inline constexpr double kPhaseTol = 1e-9;

/// N=2 closed form: the spectrum is entirely real iff
/// |omega_x^2 - omega_y^2| >= 2|gamma|, with equality the exceptional
/// boundary (degenerate nu_sq, defective coupling matrix).
PhaseClass classify_phase_n2(double omega_x_sq, double omega_y_sq, double gamma,
                             double tol = kPhaseTol);

/// N=3 closed form via the cubic f(lambda) and its extrema: unbroken iff
/// f(0)<0, both extrema abscissas positive, f(local max)>0 and
/// f(local min)<0, all by margin tol.
PhaseClass cubic_criteria_n3(const std::array<double, 3>& omega_sq, double gamma,
                             double tol = kPhaseTol);

/// N=4 closed form via the quartic coefficients: unbroken iff f(0)>0,
/// f' has three positive roots, the local minima of f are negative and
/// the local maximum is positive, all by margin tol.
PhaseClass quartic_criteria_n4(const std::array<double, 4>& omega_sq, double gamma,
                               double tol = kPhaseTol);

/// Generic classifier for any n: solves for the modes and applies the
/// taxonomy above to the actual roots.
PhaseClass classify_phase(const ChainSpec& spec, double tol = kPhaseTol);

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0), ascending.
/// Closed form (trigonometric / Cardano), one or three roots.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

/// Which chain parameter a scan axis varies.
enum class AxisParam { Omega, OmegaSq, Gamma };

struct ScanAxis {
    AxisParam param = AxisParam::OmegaSq;
    int site = 0;  ///< 0-based oscillator index (ignored for Gamma)
    double min = 0.0;
    double max = 1.0;
    int count = 2;
    std::string label;

    double value(int i) const;
};

struct ScanRequest {
    ChainSpec base;
    std::vector<ScanAxis> axes;  ///< 1 to 3 axes
    double tol = kPhaseTol;
};

inline constexpr std::int64_t kMaxGridCells = 10'000'000;

/// Grid of classifications; cells are variant codes flattened with the
/// last axis fastest.
struct PhaseGrid {
    ChainSpec base;
    std::vector<ScanAxis> axes;
    std::vector<std::uint8_t> cells;

    std::int64_t cell_count() const { return static_cast<std::int64_t>(cells.size()); }
};

/// Classifies every cell with the cheapest applicable classifier (closed
/// forms for n = 2, 3, 4, generic otherwise).  Cells are independent and
/// evaluated in parallel; output is identical for every thread count.
PhaseGrid scan_phase_diagram(const ScanRequest& request, int threads = 1);

}  // namespace ptchain
