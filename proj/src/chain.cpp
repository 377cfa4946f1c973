#include "ptchain/chain.hpp"

#include <algorithm>
#include <string>

namespace ptchain {

void ChainSpec::validate() const {
    if (n < 2)
        throw InvalidSpec("ChainSpec: n must be >= 2, got " + std::to_string(n));
    if (static_cast<int>(omega_sq.size()) != n)
        throw InvalidSpec("ChainSpec: omega_sq must have exactly n entries");
    for (double w2 : omega_sq)
        if (!(w2 > 0.0))
            throw InvalidSpec("ChainSpec: every omega_sq entry must be > 0");
}

bool ChainSpec::uniform() const {
    return std::all_of(omega_sq.begin(), omega_sq.end(),
                       [](double w2) { return w2 == 1.0; });
}

ChainSpec ChainSpec::uniform_chain(int n, double gamma) {
    return ChainSpec{n, std::vector<double>(static_cast<size_t>(std::max(n, 0)), 1.0), gamma};
}

CouplingMatrix build_coupling_matrix(const ChainSpec& spec) {
    spec.validate();
    ComplexMatrix m = ComplexMatrix::Zero(spec.n, spec.n);
    const Complex ig(0.0, spec.gamma);
    for (int j = 0; j < spec.n; ++j) {
        m(j, j) = spec.omega_sq[static_cast<size_t>(j)];
        if (j + 1 < spec.n) {
            m(j, j + 1) = ig;
            m(j + 1, j) = ig;
        }
    }
    return CouplingMatrix{std::move(m)};
}

std::vector<double> characteristic_polynomial(const ChainSpec& spec) {
    spec.validate();
    const double g2 = spec.gamma * spec.gamma;
    std::vector<double> prev{};      // p_{-1} = 0
    std::vector<double> cur{1.0};    // p_0 = 1
    for (int k = 0; k < spec.n; ++k) {
        const double w2 = spec.omega_sq[static_cast<size_t>(k)];
        std::vector<double> next(cur.size() + 1, 0.0);
        for (size_t i = 0; i < cur.size(); ++i) {
            next[i + 1] += cur[i];        // lambda * p_{k-1}
            next[i] -= w2 * cur[i];       // -omega_k^2 * p_{k-1}
        }
        for (size_t i = 0; i < prev.size(); ++i)
            next[i] += g2 * prev[i];      // +gamma^2 * p_{k-2}
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

Complex evaluate_polynomial(const std::vector<double>& coeffs, Complex lambda) {
    Complex acc(0.0, 0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * lambda + *it;
    return acc;
}

}  // namespace ptchain
