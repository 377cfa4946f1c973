#include <doctest.h>

#include <cmath>
#include <map>

#include "ptchain/spectrum.hpp"
#include "test_helpers.hpp"

using namespace ptchain;
using namespace ptchain::testing;

namespace {

double eq4_ground_energy_n2(double g) { return std::sqrt(0.5 + 0.5 * std::sqrt(1.0 + g * g)); }

double eq6_ground_energy_n3(double g) {
    return 0.5 + 0.5 * std::sqrt(2.0 + 2.0 * std::sqrt(1.0 + 2.0 * g * g));
}

double eq11_ground_energy_n4(double g) {
    const double s5 = std::sqrt(5.0);
    return std::sqrt(0.5 + 0.5 * std::sqrt(1.0 + g * g * (3.0 + s5) / 2.0)) +
           std::sqrt(0.5 + 0.5 * std::sqrt(1.0 + g * g * (3.0 - s5) / 2.0));
}

}  // namespace

TEST_CASE("ground-state energy closed forms") {
    for (double g : {0.1, 1.0, 5.0}) {
        const Complex e2 = ground_state_energy(ChainSpec::uniform_chain(2, g));
        CHECK(std::abs(e2 - Complex(eq4_ground_energy_n2(g), 0.0)) <=
              1e-12 * eq4_ground_energy_n2(g));
        const Complex e3 = ground_state_energy(ChainSpec::uniform_chain(3, g));
        CHECK(std::abs(e3 - Complex(eq6_ground_energy_n3(g), 0.0)) <=
              1e-12 * eq6_ground_energy_n3(g));
        const Complex e4 = ground_state_energy(ChainSpec::uniform_chain(4, g));
        CHECK(std::abs(e4 - Complex(eq11_ground_energy_n4(g), 0.0)) <=
              1e-12 * eq11_ground_energy_n4(g));
    }
    CHECK(ground_state_energy(ChainSpec::uniform_chain(3, 0.0)).real() == doctest::Approx(1.5));
    CHECK(ground_state_energy(ChainSpec::uniform_chain(4, 1.0)).real() ==
          doctest::Approx(2.2475675).epsilon(1e-6));
}

TEST_CASE("ground-state energy is real for uniform chains") {
    std::mt19937_64 rng(41);
    for (int n : {2, 5, 17, 33, 50}) {
        for (int k = 0; k < 20; ++k) {
            const double g = uniform_in(rng, -10.0, 10.0);
            CHECK(std::abs(ground_state_energy(ChainSpec::uniform_chain(n, g)).imag()) <= 1e-10);
        }
    }
}

TEST_CASE("level energies") {
    SUBCASE("two sites, gamma 1, occ (1,0)") {
        const EnergyLevel lvl = level_energy(ChainSpec::uniform_chain(2, 1.0), {1, 0});
        const double a = eq4_ground_energy_n2(1.0);
        const double b = std::sqrt(-0.5 + 0.5 * std::sqrt(2.0));
        CHECK(std::abs(lvl.energy - Complex(2.0 * a, b)) <= 1e-12);
        CHECK_FALSE(lvl.is_real);
    }
    SUBCASE("two sites, gamma 1, occ (1,1) is real") {
        const EnergyLevel lvl = level_energy(ChainSpec::uniform_chain(2, 1.0), {1, 1});
        CHECK(lvl.energy.imag() == 0.0);
        CHECK(lvl.energy.real() == doctest::Approx(3.0 * eq4_ground_energy_n2(1.0)).epsilon(1e-12));
        CHECK(lvl.is_real);
    }
    SUBCASE("three sites: equal occupation of the conjugate pair is real") {
        // mode order puts the conjugate pair at indices 0 and 2
        std::mt19937_64 rng(43);
        for (int t = 0; t < 20; ++t) {
            const double g = uniform_in(rng, -3.0, 3.0);
            const int k = static_cast<int>(rng() % 5), m = static_cast<int>(rng() % 5);
            const EnergyLevel lvl = level_energy(ChainSpec::uniform_chain(3, g), {m, k, m});
            CHECK(lvl.is_real);
            CHECK(lvl.energy.imag() == 0.0);
        }
    }
    SUBCASE("conjugating the occupations conjugates the energy exactly") {
        std::mt19937_64 rng(47);
        for (int t = 0; t < 50; ++t) {
            const int n = 2 + static_cast<int>(rng() % 5);
            const ChainSpec spec = random_spec(rng, n);
            const ModeSet ms = mode_set(spec);
            OccupationVector occ(static_cast<size_t>(n));
            for (int& q : occ) q = static_cast<int>(rng() % 4);
            OccupationVector swapped = occ;
            for (const ModePair& p : ms.pairing)
                if (p.kind == ModePair::Kind::ConjugatePair)
                    std::swap(swapped[static_cast<size_t>(p.a)], swapped[static_cast<size_t>(p.b)]);
            const Complex e = level_energy(ms, occ).energy;
            const Complex es = level_energy(ms, swapped).energy;
            CHECK(es == std::conj(e));
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(level_energy(ChainSpec::uniform_chain(3, 1.0), {0, 0}), DimensionMismatch);
    }
}

TEST_CASE("reality flag matches the imaginary part away from boundaries") {
    std::mt19937_64 rng(53);
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + static_cast<int>(rng() % 5);  // up to 6
        const ChainSpec spec = random_spec(rng, n);
        ModeSet ms;
        try {
            ms = mode_set(spec);
        } catch (const RootSolveFailure&) {
            continue;
        }
        // margin filter: every mode clearly real or clearly complex
        bool clear = true;
        for (const Complex& l : ms.nu_sq) {
            const double im = std::abs(l.imag());
            if (im > 1e-7 * (1.0 + std::abs(l)) && im < 1e-6) clear = false;
        }
        if (!clear) continue;
        OccupationVector occ(static_cast<size_t>(n));
        for (int& q : occ) q = static_cast<int>(rng() % 3);
        const EnergyLevel lvl = level_energy(ms, occ);
        ++checked;
        CHECK(lvl.is_real == (std::abs(lvl.energy.imag()) <= kRealityTol));
    }
    CHECK(checked >= 900);
}

TEST_CASE("level enumeration") {
    SUBCASE("counts and degeneracy pattern for two sites") {
        const auto levels = enumerate_levels(ChainSpec::uniform_chain(2, 1.0), 2);
        REQUIRE(levels.size() == 6);
        const double a = eq4_ground_energy_n2(1.0);
        // Re parts take values a, 2a, 3a with multiplicities 1, 2, 3
        std::map<long long, int> re_groups;
        for (const EnergyLevel& lvl : levels)
            re_groups[std::llround(lvl.energy.real() / a)]++;
        CHECK(re_groups[1] == 1);
        CHECK(re_groups[2] == 2);
        CHECK(re_groups[3] == 3);
        for (const EnergyLevel& lvl : levels)
            CHECK(std::abs(lvl.energy.real() - a * (lvl.occ[0] + lvl.occ[1] + 1)) <= 1e-12);
    }
    SUBCASE("conjugate partners appear as conjugate energies") {
        const auto levels = enumerate_levels(ChainSpec::uniform_chain(2, 1.0), 3);
        for (const EnergyLevel& lvl : levels) {
            const EnergyLevel partner =
                level_energy(ChainSpec::uniform_chain(2, 1.0), {lvl.occ[1], lvl.occ[0]});
            CHECK(partner.energy == std::conj(lvl.energy));
        }
    }
    SUBCASE("gamma = 0 gives the real ladder") {
        const auto levels = enumerate_levels(ChainSpec{3, {1.0, 4.0, 9.0}, 0.0}, 3);
        for (const EnergyLevel& lvl : levels) {
            CHECK(lvl.is_real);
            // modes are ordered by descending frequency: 3, 2, 1
            const double expected = 3.0 * (lvl.occ[0] + 0.5) + 2.0 * (lvl.occ[1] + 0.5) +
                                    1.0 * (lvl.occ[2] + 0.5);
            CHECK(std::abs(lvl.energy - Complex(expected, 0.0)) <= 1e-12 * expected);
        }
    }
    SUBCASE("sorted by (Re, Im) and sized by the multiset count") {
        const auto levels = enumerate_levels(ChainSpec::uniform_chain(2, 1.0), 10);
        CHECK(levels.size() == 66);
        for (size_t i = 0; i + 1 < levels.size(); ++i) {
            const bool ordered =
                levels[i].energy.real() < levels[i + 1].energy.real() ||
                (levels[i].energy.real() == levels[i + 1].energy.real() &&
                 levels[i].energy.imag() <= levels[i + 1].energy.imag());
            CHECK(ordered);
        }
    }
    SUBCASE("cap") {
        CHECK_THROWS_AS(enumerate_levels(ChainSpec::uniform_chain(6, 1.0), 40),
                        CombinatorialOverflow);
        CHECK(level_count(2, 10) == 66.0);
    }
    SUBCASE("thread count does not change the result") {
        const auto serial =
            enumerate_levels(ChainSpec::uniform_chain(3, 0.8), 6, kDefaultLevelCap, 1);
        const auto parallel =
            enumerate_levels(ChainSpec::uniform_chain(3, 0.8), 6, kDefaultLevelCap, 4);
        REQUIRE(serial.size() == parallel.size());
        for (size_t i = 0; i < serial.size(); ++i) {
            CHECK(serial[i].occ == parallel[i].occ);
            CHECK(serial[i].energy == parallel[i].energy);
        }
    }
}

TEST_CASE("gaussian ground state") {
    SUBCASE("two-site ansatz conditions") {
        for (double g : {0.3, 1.0, 2.5}) {
            const GaussianGroundState gs = ground_state_gaussian(ChainSpec::uniform_chain(2, g));
            const Complex a = gs.a_matrix(0, 0);
            const Complex b = -gs.a_matrix(0, 1);  // psi = exp(-a/2 x^2 - a/2 y^2 + b xy)
            CHECK(std::abs(gs.a_matrix(1, 1) - a) <= 1e-12);
            CHECK(std::abs(a * a + b * b - Complex(1.0, 0.0)) <= 1e-12);
            CHECK(std::abs(2.0 * a * b - Complex(0.0, -g)) <= 1e-12);
            CHECK(std::abs(gs.energy - a) <= 1e-12);
        }
    }
    SUBCASE("three-site closed form") {
        const double g = 1.0;
        const GaussianGroundState gs = ground_state_gaussian(ChainSpec::uniform_chain(3, g));
        const ModeSet ms = uniform_mode_frequencies(3, g);
        const double a = ms.nu[0].real();
        const double b = ms.nu[0].imag();
        CHECK(std::abs(gs.a_matrix(0, 0) - Complex((1.0 + a) / 2.0, 0.0)) <= 1e-12);
        CHECK(std::abs(gs.a_matrix(1, 1) - Complex(a, 0.0)) <= 1e-12);
        CHECK(std::abs(gs.a_matrix(0, 2) - Complex((a - 1.0) / 2.0, 0.0)) <= 1e-12);
        CHECK(std::abs(gs.a_matrix(0, 1) - Complex(0.0, b / std::sqrt(2.0))) <= 1e-12);
        CHECK(std::abs(gs.a_matrix(1, 2) - Complex(0.0, b / std::sqrt(2.0))) <= 1e-12);
    }
    SUBCASE("four-site ansatz conditions") {
        const double g = 0.9;
        const GaussianGroundState gs = ground_state_gaussian(ChainSpec::uniform_chain(4, g));
        const Complex a = gs.a_matrix(0, 0), b = gs.a_matrix(1, 1);
        const Complex c = -gs.a_matrix(0, 1), d = -gs.a_matrix(0, 2);
        const Complex e = -gs.a_matrix(0, 3), f = -gs.a_matrix(1, 2);
        const Complex ig(0.0, g);
        // structural symmetry of the ansatz
        CHECK(std::abs(gs.a_matrix(3, 3) - a) <= 1e-10);
        CHECK(std::abs(gs.a_matrix(2, 2) - b) <= 1e-10);
        CHECK(std::abs(-gs.a_matrix(2, 3) - c) <= 1e-10);
        CHECK(std::abs(-gs.a_matrix(1, 3) - d) <= 1e-10);
        // the seven coefficient conditions
        CHECK(std::abs(gs.energy - (a + b)) <= 1e-10);
        CHECK(std::abs(f * f + d * d + c * c + b * b - Complex(1.0, 0.0)) <= 1e-10);
        CHECK(std::abs(e * e + d * d + c * c + a * a - Complex(1.0, 0.0)) <= 1e-10);
        CHECK(std::abs(2.0 * c * d - 2.0 * b * f - ig) <= 1e-10);
        CHECK(std::abs(c * f + c * e - b * d - a * d) <= 1e-10);
        CHECK(std::abs(d * f + d * e - c * b - c * a - ig) <= 1e-10);
        CHECK(std::abs(a * e - c * d) <= 1e-10);
    }
    SUBCASE("A is a square root of the coupling matrix") {
        std::mt19937_64 rng(59);
        for (int t = 0; t < 100; ++t) {
            const int n = 2 + static_cast<int>(rng() % 5);
            const ChainSpec spec = random_spec(rng, n);
            const GaussianGroundState gs = ground_state_gaussian(spec);
            const ComplexMatrix m = build_coupling_matrix(spec).matrix();
            CHECK((gs.a_matrix * gs.a_matrix - m).cwiseAbs().maxCoeff() <= 1e-9);
            CHECK((gs.a_matrix - gs.a_matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(std::abs(gs.energy - ground_state_energy(spec)) <= 1e-10);
        }
    }
    SUBCASE("square root survives the exceptional point via the iteration") {
        // defective coupling matrix at |wx2-wy2| = 2|gamma|
        const ChainSpec spec{2, {2.0, 1.0}, 0.5};
        const GaussianGroundState gs = ground_state_gaussian(spec);
        const ComplexMatrix m = build_coupling_matrix(spec).matrix();
        CHECK((gs.a_matrix * gs.a_matrix - m).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("hermite recurrence") {
    const Complex z(0.7, -0.4);
    CHECK(std::abs(hermite(2, z) - (4.0 * z * z - 2.0)) <= 1e-14);
    CHECK(std::abs(hermite(3, z) - (8.0 * z * z * z - 12.0 * z)) <= 1e-13);
}

TEST_CASE("eigenfunctions") {
    std::mt19937_64 rng(61);
    SUBCASE("ground state equals the gaussian up to one constant") {
        for (int t = 0; t < 5; ++t) {
            const int n = 2 + static_cast<int>(rng() % 3);
            const ChainSpec spec = random_spec(rng, n, 0.5, 3.0, -0.8, 0.8);
            const auto pts = random_points(rng, n, 25, 1.5);
            const auto sample = eigenfunction_evaluate(spec, OccupationVector(n, 0), pts);
            const GaussianGroundState gs = ground_state_gaussian(spec);
            Complex ratio0(0.0, 0.0);
            for (size_t i = 0; i < pts.size(); ++i) {
                ComplexVector x(n);
                for (int j = 0; j < n; ++j) x(j) = pts[i][static_cast<size_t>(j)];
                const Complex quad = (x.transpose() * gs.a_matrix * x)(0, 0);
                const Complex gauss = std::exp(-0.5 * quad);
                const Complex ratio = sample.values[i] / gauss;
                if (i == 0)
                    ratio0 = ratio;
                else
                    CHECK(std::abs(ratio - ratio0) <= 1e-9 * std::abs(ratio0));
            }
        }
    }
    SUBCASE("first excited state of the uniform pair is linear in x+y") {
        const double g = 1.0;
        const ChainSpec spec = ChainSpec::uniform_chain(2, g);
        const auto pts = random_points(rng, 2, 30, 1.5);
        const auto ground = eigenfunction_evaluate(spec, {0, 0}, pts);
        const auto excited = eigenfunction_evaluate(spec, {1, 0}, pts);
        Complex coeff(0.0, 0.0);
        for (size_t i = 0; i < pts.size(); ++i) {
            const double sum = pts[i][0] + pts[i][1];
            const Complex ratio = excited.values[i] / ground.values[i] / sum;
            if (i == 0)
                coeff = ratio;
            else
                CHECK(std::abs(ratio - coeff) <= 1e-9 * std::abs(coeff));
        }
        // sqrt(2) (1+i gamma)^(1/4) in magnitude
        CHECK(std::abs(coeff) ==
              doctest::Approx(std::sqrt(2.0) * std::pow(1.0 + g * g, 0.125)).epsilon(1e-9));
    }
    SUBCASE("doubly excited four-site state matches the closed-form quadratic") {
        const double g = 1.0;
        const ChainSpec spec = ChainSpec::uniform_chain(4, g);
        const ModeSet ms = uniform_mode_frequencies(4, g);
        // modes 0 and 3 are the conjugate pair with Re nu = A
        const double A = ms.nu[0].real(), B = ms.nu[0].imag(), C = ms.nu[1].real();
        const auto pts = random_points(rng, 4, 25, 1.0);
        const auto ground = eigenfunction_evaluate(spec, {0, 0, 0, 0}, pts);
        const auto excited = eigenfunction_evaluate(spec, {1, 0, 0, 1}, pts);
        const double s5 = std::sqrt(5.0);
        for (size_t i = 0; i < pts.size(); ++i) {
            const double x = pts[i][0], y = pts[i][1], z = pts[i][2], w = pts[i][3];
            const double quad = (5.0 - s5) * (x * x - w * w) - (5.0 + s5) * (y * y - z * z) +
                                4.0 * s5 * x * z - 4.0 * s5 * y * w;
            const Complex expected = std::sqrt(A * A + B * B) / 5.0 * quad;
            const Complex ratio = excited.values[i] / ground.values[i];
            CHECK(std::abs(ratio - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
        }
        const EnergyLevel lvl = level_energy(spec, {1, 0, 0, 1});
        CHECK(std::abs(lvl.energy - Complex(3.0 * A + C, 0.0)) <= 1e-12);
    }
}

namespace {

/// max |(H - E) psi| / max |E psi| via Richardson-extrapolated central
/// differences; independent of the evaluation path it checks.
double schroedinger_residual(const ChainSpec& spec, const OccupationVector& occ,
                             const std::vector<std::vector<double>>& pts, double h = 1e-3) {
    const EnergyLevel lvl = level_energy(spec, occ);
    const auto value_at = [&](const std::vector<double>& p) {
        return eigenfunction_evaluate(spec, occ, {p}).values[0];
    };
    double worst_num = 0.0, scale = 0.0;
    for (const auto& pt : pts) {
        const Complex val = value_at(pt);
        Complex laplacian(0.0, 0.0);
        for (int j = 0; j < spec.n; ++j) {
            const auto second_diff = [&](double hh) {
                std::vector<double> plus = pt, minus = pt;
                plus[static_cast<size_t>(j)] += hh;
                minus[static_cast<size_t>(j)] -= hh;
                return (value_at(plus) - 2.0 * val + value_at(minus)) / (hh * hh);
            };
            laplacian += (4.0 * second_diff(h) - second_diff(2.0 * h)) / 3.0;
        }
        Complex potential(0.0, 0.0);
        for (int j = 0; j < spec.n; ++j) {
            potential += 0.5 * spec.omega_sq[static_cast<size_t>(j)] * pt[static_cast<size_t>(j)] *
                         pt[static_cast<size_t>(j)];
            if (j + 1 < spec.n)
                potential += Complex(0.0, spec.gamma) * pt[static_cast<size_t>(j)] *
                             pt[static_cast<size_t>(j + 1)];
        }
        const Complex residual = -0.5 * laplacian + potential * val - lvl.energy * val;
        worst_num = std::max(worst_num, std::abs(residual));
        scale = std::max(scale, std::abs(lvl.energy * val));
    }
    return worst_num / scale;
}

}  // namespace

TEST_CASE("eigenfunctions satisfy the differential equation") {
    std::mt19937_64 rng(67);
    CHECK(schroedinger_residual(ChainSpec::uniform_chain(2, 1.0), {1, 0},
                                random_points(rng, 2, 12, 2.0)) <= 1e-5);
    CHECK(schroedinger_residual(ChainSpec{3, {1.0 / 3.0, 2.0 / 3.0, 1.0}, 1.0 / 12.0}, {0, 1, 1},
                                random_points(rng, 3, 8, 2.0)) <= 1e-5);
    CHECK(schroedinger_residual(ChainSpec{2, {3.0, 1.0}, 0.5}, {2, 1},
                                random_points(rng, 2, 12, 2.0)) <= 1e-5);
}

TEST_CASE("partial PT residuals") {
    std::mt19937_64 rng(71);
    SUBCASE("ground states are symmetric under the odd-site flip") {
        for (int n : {2, 3, 4}) {
            std::vector<int> odd_sites;
            for (int j = 0; j < n; j += 2) odd_sites.push_back(j);  // sites 1,3,... (1-based)
            const auto pts = random_points(rng, n, 30, 1.5);
            const PtResidual r = partial_pt_residual(ChainSpec::uniform_chain(n, 1.0),
                                                     OccupationVector(n, 0), pts, odd_sites);
            CHECK(r.residual <= 1e-9);
            CHECK(r.sign == +1);
        }
    }
    SUBCASE("complex-energy state of the uniform pair breaks both flips") {
        const auto pts = random_points(rng, 2, 30, 1.5);
        const ChainSpec spec = ChainSpec::uniform_chain(2, 1.0);
        CHECK(partial_pt_residual(spec, {1, 0}, pts, {0}).residual >= 0.1);
        CHECK(partial_pt_residual(spec, {1, 0}, pts, {1}).residual >= 0.1);
    }
    SUBCASE("unbroken two-site spectrum transforms with sign (-1)^n") {
        const ChainSpec spec{2, {3.0, 1.0}, 0.5};
        const auto pts = random_points(rng, 2, 30, 1.5);
        for (const OccupationVector& occ :
             {OccupationVector{0, 0}, {1, 0}, {0, 1}, {2, 1}, {1, 3}}) {
            const PtResidual rx = partial_pt_residual(spec, occ, pts, {0});
            CHECK(rx.residual <= 1e-9);
            CHECK(rx.sign == (occ[0] % 2 == 0 ? +1 : -1));
            const PtResidual ry = partial_pt_residual(spec, occ, pts, {1});
            CHECK(ry.residual <= 1e-9);
            CHECK(ry.sign == (occ[1] % 2 == 0 ? +1 : -1));
        }
    }
}
