#include "ptchain/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptchain/parallel.hpp"

namespace ptchain {

Complex ground_state_energy(const ChainSpec& spec) {
    const ModeSet ms = mode_set(spec);
    Complex sum(0.0, 0.0);
    // Sum conjugate pairs together so their imaginary parts cancel exactly.
    for (const ModePair& p : ms.pairing) {
        if (p.kind == ModePair::Kind::ConjugatePair)
            sum += Complex(2.0 * ms.nu[static_cast<size_t>(p.a)].real(), 0.0);
        else
            sum += ms.nu[static_cast<size_t>(p.a)];
    }
    return 0.5 * sum;
}

EnergyLevel level_energy(const ModeSet& modes, const OccupationVector& occ) {
    if (static_cast<int>(occ.size()) != modes.size())
        throw DimensionMismatch("level_energy: occupation length does not match mode count");
    for (int q : occ)
        if (q < 0) throw InvalidSpec("level_energy: occupations must be >= 0");

    Complex e(0.0, 0.0);
    bool real = true;
    for (const ModePair& p : modes.pairing) {
        if (p.kind == ModePair::Kind::ConjugatePair) {
            const int na = occ[static_cast<size_t>(p.a)];
            const int nb = occ[static_cast<size_t>(p.b)];
            const Complex nu_a = modes.nu[static_cast<size_t>(p.a)];
            if (na == nb) {
                // nu_b = conj(nu_a) exactly; the pair sums to a real number
                e += Complex(2.0 * nu_a.real() * (na + 0.5), 0.0);
            } else {
                real = false;
                e += nu_a * (na + 0.5) + std::conj(nu_a) * (nb + 0.5);
            }
        } else {
            e += modes.nu[static_cast<size_t>(p.a)] * (occ[static_cast<size_t>(p.a)] + 0.5);
        }
    }
    EnergyLevel lvl;
    lvl.occ = occ;
    lvl.energy = e;
    lvl.is_real = real;
    lvl.degeneracy_key = std::round(e.real() / kDegeneracyGroupTol) * kDegeneracyGroupTol;
    return lvl;
}

EnergyLevel level_energy(const ChainSpec& spec, const OccupationVector& occ) {
    return level_energy(mode_set(spec), occ);
}

double level_count(int n, int max_quanta) {
    double count = 1.0;
    for (int k = 1; k <= n; ++k) count *= static_cast<double>(max_quanta + k) / k;
    return std::round(count);
}

std::vector<EnergyLevel> enumerate_levels(const ChainSpec& spec, int max_quanta,
                                          std::int64_t level_cap, int threads) {
    spec.validate();
    if (max_quanta < 0) throw InvalidSpec("enumerate_levels: max_quanta must be >= 0");
    const double count = level_count(spec.n, max_quanta);
    if (count > static_cast<double>(level_cap))
        throw CombinatorialOverflow("enumerate_levels: " + std::to_string(count) +
                                    " levels exceed cap " + std::to_string(level_cap));

    const ModeSet ms = mode_set(spec);
    std::vector<OccupationVector> occs;
    occs.reserve(static_cast<size_t>(count));
    OccupationVector cur(static_cast<size_t>(spec.n), 0);
    // lexicographic enumeration of all occupations with sum <= max_quanta
    const auto recurse = [&](auto&& self, int site, int remaining) -> void {
        if (site == spec.n - 1) {
            for (int q = 0; q <= remaining; ++q) {
                cur[static_cast<size_t>(site)] = q;
                occs.push_back(cur);
            }
            cur[static_cast<size_t>(site)] = 0;
            return;
        }
        for (int q = 0; q <= remaining; ++q) {
            cur[static_cast<size_t>(site)] = q;
            self(self, site + 1, remaining - q);
        }
        cur[static_cast<size_t>(site)] = 0;
    };
    recurse(recurse, 0, max_quanta);

    std::vector<EnergyLevel> levels(occs.size());
    parallel_for(occs.size(), threads,
                 [&](size_t i) { levels[i] = level_energy(ms, occs[i]); });
    std::sort(levels.begin(), levels.end(), [](const EnergyLevel& a, const EnergyLevel& b) {
        if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
        if (a.energy.imag() != b.energy.imag()) return a.energy.imag() < b.energy.imag();
        return a.occ < b.occ;
    });
    return levels;
}

namespace {

GaussianGroundState gaussian_from_decoupling(const DecoupledSystem& sys) {
    const int n = sys.modes.size();
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = sys.modes.nu[static_cast<size_t>(j)];
    ComplexMatrix a = sys.transform * d * sys.transform.transpose();
    // A is symmetric by construction up to rounding; symmetrize exactly.
    a = 0.5 * (a + a.transpose()).eval();
    Complex tr(0.0, 0.0);
    for (int j = 0; j < n; ++j) tr += a(j, j);
    return {std::move(a), 0.5 * tr};
}

/// Denman-Beavers square-root iteration.  Valid whenever no eigenvalue
/// lies on the closed negative real axis, which holds for every valid
/// spec (the characteristic polynomial has no roots at lambda <= 0 when
/// all omega_sq > 0).
GaussianGroundState gaussian_denman_beavers(const CouplingMatrix& m) {
    const int n = m.size();
    ComplexMatrix y = m.matrix();
    ComplexMatrix z = ComplexMatrix::Identity(n, n);
    const double target = 1e-13 * std::max(1.0, m.matrix().cwiseAbs().maxCoeff());
    for (int it = 0; it < 120; ++it) {
        const ComplexMatrix yi = y.inverse();
        const ComplexMatrix zi = z.inverse();
        y = 0.5 * (y + zi).eval();
        z = 0.5 * (z + yi).eval();
        const double res = (y * y - m.matrix()).cwiseAbs().maxCoeff();
        if (res <= target) {
            ComplexMatrix a = 0.5 * (y + y.transpose()).eval();
            Complex tr(0.0, 0.0);
            for (int j = 0; j < n; ++j) tr += a(j, j);
            return {std::move(a), 0.5 * tr};
        }
    }
    throw DegenerateModes("ground_state_gaussian: square-root iteration did not converge");
}

}  // namespace

GaussianGroundState ground_state_gaussian(const ChainSpec& spec) {
    spec.validate();
    try {
        return gaussian_from_decoupling(decouple(spec));
    } catch (const DegenerateModes&) {
        return gaussian_denman_beavers(build_coupling_matrix(spec));
    }
}

Complex hermite(int k, Complex z) {
    if (k == 0) return Complex(1.0, 0.0);
    Complex hm(1.0, 0.0);
    Complex h = 2.0 * z;
    for (int j = 1; j < k; ++j) {
        const Complex next = 2.0 * z * h - 2.0 * static_cast<double>(j) * hm;
        hm = h;
        h = next;
    }
    return h;
}

EigenfunctionSample eigenfunction_evaluate(const ChainSpec& spec, const OccupationVector& occ,
                                           const std::vector<std::vector<double>>& points) {
    spec.validate();
    if (static_cast<int>(occ.size()) != spec.n)
        throw DimensionMismatch("eigenfunction_evaluate: occupation length != n");
    const DecoupledSystem sys = decouple(spec);
    std::vector<Complex> sqrt_nu(static_cast<size_t>(spec.n));
    for (int j = 0; j < spec.n; ++j)
        sqrt_nu[static_cast<size_t>(j)] = principal_sqrt(sys.modes.nu[static_cast<size_t>(j)]);

    EigenfunctionSample sample;
    sample.occ = occ;
    sample.points = points;
    sample.values.reserve(points.size());
    ComplexVector x(spec.n);
    for (const auto& pt : points) {
        if (static_cast<int>(pt.size()) != spec.n)
            throw DimensionMismatch("eigenfunction_evaluate: point dimension != n");
        for (int j = 0; j < spec.n; ++j) x(j) = Complex(pt[static_cast<size_t>(j)], 0.0);
        const ComplexVector q = sys.transform.transpose() * x;
        Complex val(1.0, 0.0);
        for (int j = 0; j < spec.n; ++j) {
            const Complex qj = q(j);
            val *= hermite(occ[static_cast<size_t>(j)], sqrt_nu[static_cast<size_t>(j)] * qj) *
                   std::exp(-0.5 * sys.modes.nu[static_cast<size_t>(j)] * qj * qj);
        }
        sample.values.push_back(val);
    }
    return sample;
}

PtResidual partial_pt_residual(const ChainSpec& spec, const OccupationVector& occ,
                               const std::vector<std::vector<double>>& points,
                               const std::vector<int>& flip_set) {
    for (int j : flip_set)
        if (j < 0 || j >= spec.n)
            throw DimensionMismatch("partial_pt_residual: flip index out of range");
    std::vector<std::vector<double>> flipped = points;
    for (auto& pt : flipped)
        for (int j : flip_set) pt[static_cast<size_t>(j)] = -pt[static_cast<size_t>(j)];

    const EigenfunctionSample base = eigenfunction_evaluate(spec, occ, points);
    const EigenfunctionSample mirror = eigenfunction_evaluate(spec, occ, flipped);

    double max_abs = 0.0;
    for (const Complex& v : base.values) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0) return {0.0, +1};

    double plus = 0.0, minus = 0.0;
    for (size_t i = 0; i < base.values.size(); ++i) {
        const Complex flipped_conj = std::conj(mirror.values[i]);
        plus = std::max(plus, std::abs(flipped_conj - base.values[i]));
        minus = std::max(minus, std::abs(flipped_conj + base.values[i]));
    }
    if (plus <= minus) return {plus / max_abs, +1};
    return {minus / max_abs, -1};
}

}  // namespace ptchain
