#include "ptchain/modes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace ptchain {

namespace {

double scale_tol(double branch_tol, Complex v) {
    return branch_tol * (1.0 + std::abs(v));
}

/// Greedy conjugate matching.  Assumes the values come from a polynomial
/// with real coefficients, so the multiset is conjugate-closed up to
/// solver error.  Symmetrizes matched pairs and flattens singletons onto
/// the real axis.
std::vector<ModePair> pair_modes(std::vector<Complex>& nu, std::vector<Complex>& nu_sq,
                                 double branch_tol) {
    const int n = static_cast<int>(nu.size());
    std::vector<ModePair> pairing;
    std::vector<bool> used(static_cast<size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        if (used[static_cast<size_t>(i)]) continue;
        used[static_cast<size_t>(i)] = true;
        const double tol = scale_tol(branch_tol, nu[static_cast<size_t>(i)]);
        if (std::abs(nu[static_cast<size_t>(i)].imag()) <= tol) {
            nu[static_cast<size_t>(i)].imag(0.0);
            nu_sq[static_cast<size_t>(i)] = nu[static_cast<size_t>(i)] * nu[static_cast<size_t>(i)];
            pairing.push_back(ModePair::singleton(i));
            continue;
        }
        int best = -1;
        double best_dist = std::numeric_limits<double>::max();
        for (int j = i + 1; j < n; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            const double d = std::abs(nu[static_cast<size_t>(j)] - std::conj(nu[static_cast<size_t>(i)]));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best < 0 || best_dist > tol)
            throw RootSolveFailure("mode pairing failed: no conjugate partner within tolerance");
        used[static_cast<size_t>(best)] = true;
        // symmetrize so the pair is conjugate exactly
        const Complex mean = 0.5 * (nu[static_cast<size_t>(i)] + std::conj(nu[static_cast<size_t>(best)]));
        const int hi = nu[static_cast<size_t>(i)].imag() > 0.0 ? i : best;
        const int lo = hi == i ? best : i;
        nu[static_cast<size_t>(hi)] = mean.imag() > 0.0 ? mean : std::conj(mean);
        nu[static_cast<size_t>(lo)] = std::conj(nu[static_cast<size_t>(hi)]);
        nu_sq[static_cast<size_t>(hi)] = nu[static_cast<size_t>(hi)] * nu[static_cast<size_t>(hi)];
        nu_sq[static_cast<size_t>(lo)] = std::conj(nu_sq[static_cast<size_t>(hi)]);
        pairing.push_back(ModePair::conjugate(hi, lo));
    }
    std::sort(pairing.begin(), pairing.end(),
              [](const ModePair& p, const ModePair& q) { return p.a < q.a; });
    return pairing;
}

}  // namespace

ModeSet uniform_mode_frequencies(int n, double gamma, double branch_tol) {
    if (n < 2) throw InvalidSpec("uniform_mode_frequencies: n must be >= 2");
    ModeSet ms;
    ms.branch_tol = branch_tol;
    ms.nu_sq.resize(static_cast<size_t>(n));
    ms.nu.resize(static_cast<size_t>(n));
    // Fill the upper half and mirror so pairs are conjugate exactly.
    for (int j = 1; 2 * j <= n + 1; ++j) {
        const double c = (2 * j == n + 1)
                             ? 0.0
                             : std::cos(j * std::numbers::pi / (n + 1));
        ms.nu_sq[static_cast<size_t>(j - 1)] = Complex(1.0, 2.0 * gamma * c);
        ms.nu_sq[static_cast<size_t>(n - j)] = std::conj(ms.nu_sq[static_cast<size_t>(j - 1)]);
    }
    for (int j = 0; j < n; ++j)
        ms.nu[static_cast<size_t>(j)] = principal_sqrt(ms.nu_sq[static_cast<size_t>(j)]);
    // Mirror the square roots too: principal_sqrt commutes with conjugation
    // off the branch cut, but enforce bit-exact conjugacy anyway.
    for (int j = 1; 2 * j < n + 1; ++j) {
        if (ms.nu[static_cast<size_t>(j - 1)].imag() == 0.0) continue;
        ms.nu[static_cast<size_t>(n - j)] = std::conj(ms.nu[static_cast<size_t>(j - 1)]);
    }
    for (int j = 1; 2 * j <= n + 1; ++j) {
        if (2 * j == n + 1 || gamma == 0.0)
            ms.pairing.push_back(ModePair::singleton(j - 1));
        else {
            const int hi = gamma > 0.0 ? j - 1 : n - j;
            ms.pairing.push_back(ModePair::conjugate(hi, hi == j - 1 ? n - j : j - 1));
        }
        if (2 * j < n + 1 && gamma == 0.0)
            ms.pairing.push_back(ModePair::singleton(n - j));
    }
    std::sort(ms.pairing.begin(), ms.pairing.end(),
              [](const ModePair& p, const ModePair& q) { return p.a < q.a; });
    return ms;
}

ModeSet general_mode_frequencies(const ChainSpec& spec, double branch_tol) {
    spec.validate();
    const CouplingMatrix m = build_coupling_matrix(spec);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m.matrix(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw RootSolveFailure("eigenvalue iteration did not converge");

    ModeSet ms;
    ms.branch_tol = branch_tol;
    ms.nu_sq.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + spec.n);
    ms.nu.resize(static_cast<size_t>(spec.n));
    for (int j = 0; j < spec.n; ++j)
        ms.nu[static_cast<size_t>(j)] = principal_sqrt(ms.nu_sq[static_cast<size_t>(j)]);

    // Order: Re nu descending, with Im nu descending inside runs of equal
    // real part.  Conjugate partners have bitwise-different real parts, so
    // the runs are detected with the branch tolerance rather than ==.
    std::vector<int> order(static_cast<size_t>(spec.n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ms.nu[static_cast<size_t>(a)].real() > ms.nu[static_cast<size_t>(b)].real();
    });
    size_t run_begin = 0;
    for (size_t k = 1; k <= order.size(); ++k) {
        const bool run_ends =
            k == order.size() ||
            ms.nu[static_cast<size_t>(order[run_begin])].real() -
                    ms.nu[static_cast<size_t>(order[k])].real() >
                scale_tol(branch_tol, ms.nu[static_cast<size_t>(order[run_begin])]);
        if (!run_ends) continue;
        std::sort(order.begin() + static_cast<long>(run_begin), order.begin() + static_cast<long>(k),
                  [&](int a, int b) {
                      return ms.nu[static_cast<size_t>(a)].imag() > ms.nu[static_cast<size_t>(b)].imag();
                  });
        run_begin = k;
    }
    std::vector<Complex> nu(static_cast<size_t>(spec.n)), nu_sq(static_cast<size_t>(spec.n));
    for (int j = 0; j < spec.n; ++j) {
        nu[static_cast<size_t>(j)] = ms.nu[static_cast<size_t>(order[static_cast<size_t>(j)])];
        nu_sq[static_cast<size_t>(j)] = ms.nu_sq[static_cast<size_t>(order[static_cast<size_t>(j)])];
    }
    ms.nu = std::move(nu);
    ms.nu_sq = std::move(nu_sq);
    ms.pairing = pair_modes(ms.nu, ms.nu_sq, branch_tol);
    return ms;
}

ModeSet mode_set(const ChainSpec& spec, double branch_tol) {
    spec.validate();
    if (spec.uniform()) return uniform_mode_frequencies(spec.n, spec.gamma, branch_tol);
    return general_mode_frequencies(spec, branch_tol);
}

namespace {

ComplexMatrix sine_transform(int n) {
    ComplexMatrix v(n, n);
    const double norm = std::sqrt(2.0 / (n + 1));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            v(j, k) = norm * std::sin((j + 1) * (k + 1) * std::numbers::pi / (n + 1));
    return v;
}

}  // namespace

DecoupledSystem decouple(const ChainSpec& spec, double branch_tol) {
    spec.validate();
    ModeSet ms = mode_set(spec, branch_tol);
    if (spec.uniform())
        return {std::move(ms), sine_transform(spec.n)};

    const int n = spec.n;
    double max_abs = 0.0;
    for (const Complex& l : ms.nu_sq) max_abs = std::max(max_abs, std::abs(l));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ms.nu_sq[static_cast<size_t>(i)] - ms.nu_sq[static_cast<size_t>(j)]) <=
                branch_tol * (1.0 + max_abs))
                throw DegenerateModes("decouple: mode frequencies coincide within tolerance");

    const CouplingMatrix m = build_coupling_matrix(spec);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m.matrix(), /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw RootSolveFailure("eigenvalue iteration did not converge");

    // Match solver eigenvalues to the mode-set order.
    std::vector<bool> used(static_cast<size_t>(n), false);
    ComplexMatrix v(n, n);
    for (int k = 0; k < n; ++k) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::max();
        for (int c = 0; c < n; ++c) {
            if (used[static_cast<size_t>(c)]) continue;
            const double d = std::abs(solver.eigenvalues()(c) - ms.nu_sq[static_cast<size_t>(k)]);
            if (d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        used[static_cast<size_t>(best)] = true;
        ComplexVector col = solver.eigenvectors().col(best);
        // normalize in the bilinear (unconjugated) inner product
        const Complex s = (col.transpose() * col)(0, 0);
        if (std::abs(s) < 1e-12)
            throw DegenerateModes("decouple: quasi-null eigenvector (defective or near-defective matrix)");
        col /= principal_sqrt(s);
        // deterministic sign: the largest entry gets a positive real part
        int imax = 0;
        for (int r = 1; r < n; ++r)
            if (std::abs(col(r)) > std::abs(col(imax))) imax = r;
        if (col(imax).real() < 0.0 || (col(imax).real() == 0.0 && col(imax).imag() < 0.0))
            col = -col;
        v.col(k) = col;
    }

    const double ortho_err = (v.transpose() * v - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-10)
        throw DegenerateModes("decouple: transform failed orthogonality check (near-exceptional point)");
    return {std::move(ms), std::move(v)};
}

ComplexMatrix decoupling_transform(const ChainSpec& spec, double branch_tol) {
    return decouple(spec, branch_tol).transform;
}

}  // namespace ptchain
