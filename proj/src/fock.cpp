#include "ptchain/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "ptchain/parallel.hpp"

namespace ptchain {

std::int64_t FockBasisSpec::dimension() const {
    std::int64_t d = 1;
    for (int j = 0; j < n_sites; ++j) {
        d *= cutoff + 1;
        if (d > (std::int64_t{1} << 40)) return d;  // clearly over any cap
    }
    return d;
}

namespace {

/// multi-index <-> flat index, last site fastest
std::vector<int> unflatten(std::int64_t flat, int n_sites, int m) {
    std::vector<int> idx(static_cast<size_t>(n_sites));
    for (int j = n_sites - 1; j >= 0; --j) {
        idx[static_cast<size_t>(j)] = static_cast<int>(flat % m);
        flat /= m;
    }
    return idx;
}

}  // namespace

ComplexMatrix fock_hamiltonian_sites(const std::vector<double>& omega_sq, double gamma,
                                     int cutoff, std::int64_t dimension_cap, int threads) {
    const int n_sites = static_cast<int>(omega_sq.size());
    if (n_sites < 1 || cutoff < 1) throw InvalidSpec("fock_hamiltonian_sites: need >=1 site, cutoff >= 1");
    const int m = cutoff + 1;
    FockBasisSpec basis{cutoff, n_sites};
    const std::int64_t dim = basis.dimension();
    if (dim > dimension_cap)
        throw DimensionCap("fock_hamiltonian_sites: dimension " + std::to_string(dim) +
                           " exceeds cap " + std::to_string(dimension_cap));

    // single-site operators in the unit-oscillator basis
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k + 1 < m; ++k) {
        x(k, k + 1) = std::sqrt((k + 1) / 2.0);
        x(k + 1, k) = x(k, k + 1);
    }
    Eigen::MatrixXd p2 = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) p2(k, k) = k + 0.5;
    for (int k = 0; k + 2 < m; ++k) {
        p2(k, k + 2) = -std::sqrt(static_cast<double>((k + 1) * (k + 2))) / 2.0;
        p2(k + 2, k) = p2(k, k + 2);
    }
    const Eigen::MatrixXd x2 = x * x;
    std::vector<Eigen::MatrixXd> site(static_cast<size_t>(n_sites));
    for (int j = 0; j < n_sites; ++j)
        site[static_cast<size_t>(j)] = 0.5 * p2 + 0.5 * omega_sq[static_cast<size_t>(j)] * x2;

    std::int64_t stride_accum = 1;
    std::vector<std::int64_t> stride(static_cast<size_t>(n_sites));
    for (int j = n_sites - 1; j >= 0; --j) {
        stride[static_cast<size_t>(j)] = stride_accum;
        stride_accum *= m;
    }

    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    const Complex ig(0.0, gamma);
    parallel_for(static_cast<size_t>(dim), threads, [&](size_t col) {
        const std::vector<int> ket = unflatten(static_cast<std::int64_t>(col), n_sites, m);
        // site terms: change one occupation by 0 or +-2
        for (int j = 0; j < n_sites; ++j) {
            const int nj = ket[static_cast<size_t>(j)];
            for (int dn : {-2, 0, 2}) {
                const int mj = nj + dn;
                if (mj < 0 || mj >= m) continue;
                const double e = site[static_cast<size_t>(j)](mj, nj);
                if (e == 0.0) continue;
                const std::int64_t row = static_cast<std::int64_t>(col) +
                                         static_cast<std::int64_t>(mj - nj) * stride[static_cast<size_t>(j)];
                h(row, static_cast<std::int64_t>(col)) += e;
            }
        }
        // coupling terms i*gamma * x_j x_{j+1}
        for (int j = 0; j + 1 < n_sites; ++j) {
            const int nj = ket[static_cast<size_t>(j)];
            const int nk = ket[static_cast<size_t>(j + 1)];
            for (int dj : {-1, 1}) {
                const int mj = nj + dj;
                if (mj < 0 || mj >= m) continue;
                for (int dk : {-1, 1}) {
                    const int mk = nk + dk;
                    if (mk < 0 || mk >= m) continue;
                    const double e = x(mj, nj) * x(mk, nk);
                    const std::int64_t row =
                        static_cast<std::int64_t>(col) +
                        static_cast<std::int64_t>(dj) * stride[static_cast<size_t>(j)] +
                        static_cast<std::int64_t>(dk) * stride[static_cast<size_t>(j + 1)];
                    h(row, static_cast<std::int64_t>(col)) += ig * e;
                }
            }
        }
    });
    return h;
}

ComplexMatrix build_fock_hamiltonian(const ChainSpec& spec, const FockBasisSpec& basis,
                                     std::int64_t dimension_cap, int threads) {
    spec.validate();
    if (basis.n_sites != spec.n)
        throw DimensionMismatch("build_fock_hamiltonian: basis.n_sites != spec.n");
    return fock_hamiltonian_sites(spec.omega_sq, spec.gamma, basis.cutoff, dimension_cap, threads);
}

Complex fock_trace_identity(const std::vector<double>& omega_sq, int cutoff) {
    // trace = sum over basis states of sum_j (n_j + 1/2)(1 + omega_j^2)/2
    const int m = cutoff + 1;
    const int n_sites = static_cast<int>(omega_sq.size());
    double per_site_quanta = 0.0;  // sum_{k=0}^{cutoff} (k + 1/2)
    for (int k = 0; k < m; ++k) per_site_quanta += k + 0.5;
    double others = 1.0;
    for (int j = 1; j < n_sites; ++j) others *= m;
    double tr = 0.0;
    for (int j = 0; j < n_sites; ++j)
        tr += 0.5 * (1.0 + omega_sq[static_cast<size_t>(j)]) * per_site_quanta * others;
    return Complex(tr, 0.0);
}

std::vector<Complex> fock_eigenvalues(const ComplexMatrix& h) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(h, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw EigensolveFailure("fock_eigenvalues: dense eigensolve did not converge");
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + h.rows()};
}

SpectralComparison fock_spectrum_check(const ChainSpec& spec, const FockBasisSpec& basis,
                                       int max_total_quanta, std::int64_t dimension_cap) {
    if (max_total_quanta < 0) max_total_quanta = basis.cutoff / 4;
    const ComplexMatrix h = build_fock_hamiltonian(spec, basis, dimension_cap);
    std::vector<Complex> numeric = fock_eigenvalues(h);
    const std::vector<EnergyLevel> levels = enumerate_levels(spec, max_total_quanta);

    if (levels.size() > numeric.size())
        throw InvalidSpec("fock_spectrum_check: more analytic levels than eigenvalues");

    // typical nondegenerate spacing of the analytic levels, for the
    // ambiguity threshold
    double spacing = std::numeric_limits<double>::max();
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
        const double gap = std::abs(levels[i + 1].energy - levels[i].energy);
        if (gap > 1e-9) spacing = std::min(spacing, gap);
    }
    if (!(spacing < std::numeric_limits<double>::max())) spacing = 1.0;

    struct Cand {
        double dist;
        size_t level;
        size_t eig;
    };
    std::vector<Cand> cands;
    cands.reserve(levels.size() * numeric.size());
    for (size_t a = 0; a < levels.size(); ++a)
        for (size_t e = 0; e < numeric.size(); ++e)
            cands.push_back({std::abs(levels[a].energy - numeric[e]), a, e});
    std::sort(cands.begin(), cands.end(), [](const Cand& p, const Cand& q) {
        if (p.dist != q.dist) return p.dist < q.dist;
        return std::tie(p.level, p.eig) < std::tie(q.level, q.eig);
    });

    std::vector<bool> level_done(levels.size(), false), eig_done(numeric.size(), false);
    std::vector<size_t> matched_eig(levels.size(), 0);
    const double ambiguity = 0.1 * spacing;
    size_t remaining = levels.size();
    for (const Cand& c : cands) {
        if (remaining == 0) break;
        if (level_done[c.level]) continue;
        if (eig_done[c.eig]) {
            if (c.dist <= ambiguity) {
                // this level wants an eigenvalue a closer level already
                // claimed; genuine competition only if no unclaimed
                // eigenvalue sits at essentially the same distance
                // (degenerate levels have equally close partners)
                bool alternative = false;
                for (size_t e = 0; e < numeric.size() && !alternative; ++e)
                    if (!eig_done[e] &&
                        std::abs(levels[c.level].energy - numeric[e]) <= c.dist + ambiguity)
                        alternative = true;
                if (!alternative)
                    throw MatchingAmbiguous(
                        "fock_spectrum_check: two analytic levels compete for one eigenvalue");
            }
            continue;
        }
        level_done[c.level] = true;
        eig_done[c.eig] = true;
        matched_eig[c.level] = c.eig;
        --remaining;
    }

    SpectralComparison cmp;
    cmp.cutoff = basis.cutoff;
    cmp.dimension = basis.dimension();
    for (size_t a = 0; a < levels.size(); ++a) {
        LevelMatch lm;
        lm.occ = levels[a].occ;
        lm.analytic = levels[a].energy;
        lm.numeric = numeric[matched_eig[a]];
        lm.distance = std::abs(lm.analytic - lm.numeric);
        cmp.max_distance = std::max(cmp.max_distance, lm.distance);
        cmp.matches.push_back(std::move(lm));
    }
    return cmp;
}

}  // namespace ptchain
