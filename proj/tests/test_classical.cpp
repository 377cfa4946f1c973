#include <doctest.h>

#include <cmath>

#include "ptchain/classical.hpp"
#include "ptchain/phase.hpp"
#include "test_helpers.hpp"

using namespace ptchain;
using namespace ptchain::testing;

namespace {

ClassicalState state_of(std::vector<Complex> x, std::vector<Complex> v, double t = 0.0) {
    return ClassicalState{t, std::move(x), std::move(v)};
}

const ClassicalState kFig8Left = state_of({{-1, -1}, {-1, -1}}, {{1, 0.5}, {1, 0.5}});
const ClassicalState kFig9Left = state_of({{-1, 1}, {2, -2}}, {{1, 0.5}, {1.5, 1}});

double sup_error_vs_reconstruction(const TrajectoryRecord& rec, const ModeAmplitudes& amps) {
    double worst = 0.0, scale = 1.0;
    for (const ClassicalState& s : rec.states) {
        const ClassicalState exact = amps.reconstruct(s.t);
        for (int j = 0; j < rec.spec.n; ++j) {
            scale = std::max(scale, std::abs(exact.x[static_cast<size_t>(j)]));
            worst = std::max(worst, std::abs(s.x[static_cast<size_t>(j)] -
                                             exact.x[static_cast<size_t>(j)]) /
                                        scale);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("equations of motion") {
    SUBCASE("gamma = 0 decouples") {
        const ChainSpec spec{3, {1.0, 4.0, 9.0}, 0.0};
        const auto acc = equations_of_motion(
            spec, state_of({{1, 0}, {2, 0}, {3, 0}}, {{0, 0}, {0, 0}, {0, 0}}));
        CHECK(acc[0] == Complex(-1.0, 0.0));
        CHECK(acc[1] == Complex(-8.0, 0.0));
        CHECK(acc[2] == Complex(-27.0, 0.0));
    }
    SUBCASE("uniform pair couples through i gamma") {
        const double g = 0.8;
        const auto acc = equations_of_motion(ChainSpec::uniform_chain(2, g),
                                             state_of({{1, 0}, {2, 0}}, {{0, 0}, {0, 0}}));
        CHECK(std::abs(acc[0] - (-Complex(1, 0) - Complex(0, g) * Complex(2, 0))) <= 1e-15);
        CHECK(std::abs(acc[1] - (-Complex(2, 0) - Complex(0, g) * Complex(1, 0))) <= 1e-15);
    }
    SUBCASE("acceleration equals -M x on mode eigenvectors") {
        const ChainSpec spec{3, {0.5, 1.5, 2.5}, 0.4};
        const DecoupledSystem sys = decouple(spec);
        for (int k = 0; k < 3; ++k) {
            std::vector<Complex> x(3), zero(3, Complex(0, 0));
            for (int j = 0; j < 3; ++j) x[static_cast<size_t>(j)] = sys.transform(j, k);
            const auto acc = equations_of_motion(spec, state_of(x, zero));
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(acc[static_cast<size_t>(j)] +
                               sys.modes.nu_sq[static_cast<size_t>(k)] *
                                   x[static_cast<size_t>(j)]) <= 1e-12);
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(
            equations_of_motion(ChainSpec::uniform_chain(3, 0.1), state_of({{1, 0}}, {{0, 0}})),
            DimensionMismatch);
    }
}

TEST_CASE("mode decomposition") {
    SUBCASE("reconstruction reproduces the initial state") {
        std::mt19937_64 rng(89);
        for (int t = 0; t < 30; ++t) {
            const int n = 2 + static_cast<int>(rng() % 4);
            const ChainSpec spec = random_spec(rng, n);
            ClassicalState init;
            init.t = 0.0;
            for (int j = 0; j < n; ++j) {
                init.x.emplace_back(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
                init.v.emplace_back(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
            }
            ModeAmplitudes amps;
            try {
                amps = mode_decompose(spec, init);
            } catch (const DegenerateModes&) {
                continue;
            }
            const ClassicalState back = amps.reconstruct(0.0);
            for (int j = 0; j < n; ++j) {
                CHECK(std::abs(back.x[static_cast<size_t>(j)] - init.x[static_cast<size_t>(j)]) <=
                      1e-10);
                CHECK(std::abs(back.v[static_cast<size_t>(j)] - init.v[static_cast<size_t>(j)]) <=
                      1e-10);
            }
        }
    }
    SUBCASE("an eigenvector launched on one branch excites only that amplitude") {
        const ChainSpec spec{2, {3.0, 1.0}, 0.5};
        const DecoupledSystem sys = decouple(spec);
        ClassicalState init;
        init.t = 0.0;
        const Complex nu = sys.modes.nu[0];
        for (int j = 0; j < 2; ++j) {
            init.x.push_back(sys.transform(j, 0));
            init.v.push_back(Complex(0, 1) * nu * sys.transform(j, 0));
        }
        const ModeAmplitudes amps = mode_decompose(spec, init);
        CHECK(std::abs(amps.c_plus[0] - Complex(1, 0)) <= 1e-12);
        CHECK(std::abs(amps.c_minus[0]) <= 1e-12);
        CHECK(std::abs(amps.c_plus[1]) <= 1e-12);
        CHECK(std::abs(amps.c_minus[1]) <= 1e-12);
    }
    SUBCASE("exceptional point refuses") {
        CHECK_THROWS_AS(mode_decompose(ChainSpec{2, {2.0, 1.0}, 0.5}, kFig8Left), DegenerateModes);
    }
}

TEST_CASE("integration") {
    SUBCASE("plain cosine for a decoupled site") {
        const ChainSpec spec{2, {1.0, 4.0}, 0.0};
        const auto rec =
            integrate(spec, state_of({{1, 0}, {0, 0}}, {{0, 0}, {0, 0}}), 1e-3, 10.0, 0.1);
        for (const ClassicalState& s : rec.states)
            CHECK(std::abs(s.x[0] - Complex(std::cos(s.t), 0.0)) <= 1e-8);
    }
    SUBCASE("uniform coupled pair spirals outward") {
        const auto rec = integrate(ChainSpec::uniform_chain(2, 1.0), kFig8Left, 1e-3, 60.0, 0.5);
        double prev_peak = 0.0;
        bool monotone_beyond_20 = true;
        for (size_t i = 0; i + 1 < rec.states.size(); ++i) {
            const double peak =
                std::max(std::abs(rec.states[i].x[0]), std::abs(rec.states[i].x[1]));
            if (rec.states[i].t > 20.0 && peak < prev_peak * 0.8) monotone_beyond_20 = false;
            prev_peak = std::max(prev_peak, peak);
        }
        CHECK(monotone_beyond_20);
        CHECK(std::abs(rec.states.back().x[0]) > 100.0 * std::abs(rec.states.front().x[0]));
    }
    SUBCASE("bounded run stays inside the amplitude bound and conserves energy") {
        const ChainSpec spec{2, {3.0, 1.0}, 0.5};
        const auto rec = integrate(spec, kFig9Left, 1e-3, 200.0, 0.05);
        const ModeAmplitudes amps = mode_decompose(spec, kFig9Left);
        double amp_sum = 0.0;
        for (size_t j = 0; j < amps.c_plus.size(); ++j)
            amp_sum += std::abs(amps.c_plus[j]) + std::abs(amps.c_minus[j]);
        const double transform_norm = amps.transform.cwiseAbs().rowwise().sum().maxCoeff();
        const double bound = amp_sum * transform_norm;
        double h_drift = 0.0;
        for (size_t i = 0; i < rec.states.size(); ++i) {
            for (const Complex& x : rec.states[i].x) CHECK(std::abs(x) <= bound + 1e-9);
            h_drift = std::max(h_drift, std::abs(rec.energy[i] - rec.energy[0]));
        }
        CHECK(h_drift / (1.0 + std::abs(rec.energy[0])) <= 1e-8);
    }
    SUBCASE("integrator matches the analytic reconstruction") {
        std::mt19937_64 rng(97);
        int checked = 0;
        while (checked < 12) {
            const int n = 2 + static_cast<int>(rng() % 4);  // up to 5
            const ChainSpec spec = random_spec(rng, n, 0.3, 3.0, -1.0, 1.0);
            ClassicalState init;
            init.t = 0.0;
            for (int j = 0; j < n; ++j) {
                init.x.emplace_back(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
                init.v.emplace_back(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
            }
            ModeAmplitudes amps;
            try {
                amps = mode_decompose(spec, init);
            } catch (const DegenerateModes&) {
                continue;
            }
            ++checked;
            const auto rec = integrate(spec, init, 1e-3, 50.0, 0.5);
            CHECK(sup_error_vs_reconstruction(rec, amps) <= 1e-6);
        }
    }
    SUBCASE("halving the step shrinks the error sixteenfold") {
        const ChainSpec spec{2, {3.0, 1.0}, 0.5};
        const ModeAmplitudes amps = mode_decompose(spec, kFig9Left);
        const auto error_for = [&](double dt) {
            const auto rec = integrate(spec, kFig9Left, dt, 10.0, 10.0);
            const ClassicalState exact = amps.reconstruct(10.0);
            double e = 0.0;
            for (int j = 0; j < 2; ++j)
                e = std::max(e, std::abs(rec.states.back().x[static_cast<size_t>(j)] -
                                         exact.x[static_cast<size_t>(j)]));
            return e;
        };
        const double ratio = error_for(0.025) / error_for(0.0125);
        CHECK(ratio > 11.0);
        CHECK(ratio < 22.0);
    }
    SUBCASE("oversized steps abort with a diagnostic") {
        CHECK_THROWS_AS(integrate(ChainSpec{2, {3.0, 1.0}, 0.5}, kFig9Left, 2.0, 100.0, 2.0),
                        StepTooLarge);
    }
    SUBCASE("argument checks") {
        CHECK_THROWS_AS(integrate(ChainSpec::uniform_chain(2, 1.0), kFig8Left, -0.1, 10.0, 0.1),
                        InvalidSpec);
        CHECK_THROWS_AS(integrate(ChainSpec::uniform_chain(2, 1.0), kFig8Left, 0.1, 10.0, 0.01),
                        InvalidSpec);
    }
}

TEST_CASE("trajectory classification from amplitudes") {
    SUBCASE("uniform pair grows at the mode rate") {
        const TrajectoryClass cls =
            classify_trajectory(ChainSpec::uniform_chain(2, 1.0), kFig8Left);
        CHECK(cls.kind == TrajectoryKind::Growing);
        CHECK(cls.rate == doctest::Approx(std::sqrt(-0.5 + 0.5 * std::sqrt(2.0))).epsilon(1e-12));
    }
    SUBCASE("unbroken spec is bounded") {
        const TrajectoryClass cls = classify_trajectory(ChainSpec{2, {3.0, 1.0}, 0.5}, kFig9Left);
        CHECK(cls.kind == TrajectoryKind::Bounded);
    }
    SUBCASE("exceptional point is secular") {
        const TrajectoryClass cls = classify_trajectory(ChainSpec{2, {2.0, 1.0}, 0.5}, kFig8Left);
        CHECK(cls.kind == TrajectoryKind::Secular);
    }
    SUBCASE("pure decaying branch") {
        const ChainSpec spec = ChainSpec::uniform_chain(2, 1.0);
        const DecoupledSystem sys = decouple(spec);
        // the mode with Im nu > 0 decays on the e^{+i nu t} branch
        const int k = sys.modes.nu[0].imag() > 0 ? 0 : 1;
        ClassicalState init;
        init.t = 0.0;
        for (int j = 0; j < 2; ++j) {
            init.x.push_back(sys.transform(j, k));
            init.v.push_back(Complex(0, 1) * sys.modes.nu[static_cast<size_t>(k)] *
                             sys.transform(j, k));
        }
        const TrajectoryClass cls = classify_trajectory(spec, init);
        CHECK(cls.kind == TrajectoryKind::Decaying);
        CHECK(cls.rate == doctest::Approx(std::abs(sys.modes.nu[static_cast<size_t>(k)].imag()))
                              .epsilon(1e-12));
    }
}

TEST_CASE("trajectory classification from a record") {
    SUBCASE("growing record fits the analytic rate within five percent") {
        const auto rec = integrate(ChainSpec::uniform_chain(2, 1.0), kFig8Left, 1e-3, 100.0, 0.05);
        TrajectoryRecord window;  // fit over t in [20, 100]
        window.spec = rec.spec;
        window.init = rec.init;
        window.dt_out = rec.dt_out;
        for (size_t i = 0; i < rec.states.size(); ++i)
            if (rec.states[i].t >= 20.0) {
                window.states.push_back(rec.states[i]);
                window.energy.push_back(rec.energy[i]);
            }
        const TrajectoryClass cls = classify_trajectory(window);
        CHECK(cls.kind == TrajectoryKind::Growing);
        const double exact = std::sqrt(-0.5 + 0.5 * std::sqrt(2.0));
        CHECK(std::abs(cls.rate - exact) <= 0.05 * exact);
    }
    SUBCASE("bounded record") {
        const auto rec = integrate(ChainSpec{2, {3.0, 1.0}, 0.5}, kFig9Left, 1e-3, 120.0, 0.05);
        CHECK(classify_trajectory(rec).kind == TrajectoryKind::Bounded);
    }
    SUBCASE("secular record") {
        const auto rec = integrate(ChainSpec{2, {2.0, 1.0}, 0.5}, kFig8Left, 1e-3, 80.0, 0.05);
        CHECK(classify_trajectory(rec).kind == TrajectoryKind::Secular);
    }
    SUBCASE("short records refuse") {
        const auto rec = integrate(ChainSpec{2, {3.0, 1.0}, 0.5}, kFig9Left, 1e-3, 5.0, 0.05);
        CHECK_THROWS_AS(classify_trajectory(rec), InsufficientData);
    }
}

TEST_CASE("poincare sections") {
    SUBCASE("a periodic decoupled orbit pierces the section at one point") {
        const ChainSpec spec{2, {1.0, 4.0}, 0.0};
        const auto rec =
            integrate(spec, state_of({{1, 0}, {0.3, 0}}, {{0, 0}, {0, 0}}), 1e-3, 120.0, 0.02);
        SectionConfig cfg;
        cfg.coord = 0;  // Re x_1 = 0 ascending
        cfg.project = 0;
        const PoincareSection sec = poincare_section(rec, cfg);
        CHECK(sec.points.size() >= 15);
        for (const auto& p : sec.points) {
            CHECK(std::abs(p.first - sec.points.front().first) <= 1e-6);
            CHECK(std::abs(p.second - sec.points.front().second) <= 1e-6);
        }
        CHECK(std::abs(sec.points.front().second - 1.0) <= 1e-6);  // crosses at Re v = +1
    }
    SUBCASE("bounded almost-periodic run fills a non-growing box") {
        const ChainSpec spec{2, {3.0, 1.0}, 0.5};
        const ClassicalState init = state_of({{1, 0.5}, {-2, 2}}, {{1, 0.5}, {-1.5, -1.5}});
        const auto rec = integrate(spec, init, 1e-3, 500.0, 0.02);
        const PoincareSection sec = poincare_section(rec, SectionConfig{});
        CHECK(sec.points.size() >= 50);
        double first_half = 0.0, all = 0.0;
        for (size_t i = 0; i < sec.points.size(); ++i) {
            const double r = std::hypot(sec.points[i].first, sec.points[i].second);
            all = std::max(all, r);
            if (sec.times[i] < 250.0) first_half = std::max(first_half, r);
        }
        CHECK(all <= 1.1 * first_half);
    }
    SUBCASE("merging both directions doubles the crossing count") {
        const ChainSpec spec{2, {3.0, 1.0}, 0.5};
        const auto rec = integrate(spec, kFig9Left, 1e-3, 200.0, 0.02);
        SectionConfig asc;
        SectionConfig both;
        both.direction = CrossingDirection::Both;
        const size_t n_asc = poincare_section(rec, asc).points.size();
        const size_t n_both = poincare_section(rec, both).points.size();
        CHECK(n_both >= 2 * n_asc - 1);
        CHECK(n_both <= 2 * n_asc + 1);
    }
    SUBCASE("growing run escapes any box") {
        const auto rec = integrate(ChainSpec::uniform_chain(2, 1.0), kFig8Left, 1e-3, 40.0, 0.02);
        const PoincareSection sec = poincare_section(rec, SectionConfig{});
        double early = 0.0, late = 0.0;
        for (size_t i = 0; i < sec.points.size(); ++i) {
            const double r = std::hypot(sec.points[i].first, sec.points[i].second);
            if (sec.times[i] < 20.0)
                early = std::max(early, r);
            else
                late = std::max(late, r);
        }
        CHECK(late >= 2.0 * early);
    }
    SUBCASE("empty sections and undersampled records throw") {
        const ChainSpec spec{2, {3.0, 1.0}, 0.5};
        const auto rec = integrate(spec, kFig9Left, 1e-3, 50.0, 0.02);
        SectionConfig far;
        far.level = 100.0;
        CHECK_THROWS_AS(poincare_section(rec, far), NoCrossings);
        const auto coarse = integrate(spec, kFig9Left, 1e-3, 50.0, 1.0);
        CHECK_THROWS_AS(poincare_section(coarse, SectionConfig{}), UndersampledRecord);
    }
}

TEST_CASE("boundedness matches the quantum phase") {
    std::mt19937_64 rng(101);
    int checked = 0;
    while (checked < 60) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const ChainSpec spec = random_spec(rng, n, 0.2, 4.0, -1.2, 1.2);
        const PhaseClass phase = classify_phase(spec);
        if (phase.variant == PhaseVariant::Exceptional) continue;
        ClassicalState init;
        init.t = 0.0;
        for (int j = 0; j < n; ++j) {
            init.x.emplace_back(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
            init.v.emplace_back(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
        }
        TrajectoryClass cls;
        try {
            cls = classify_trajectory(spec, init);
        } catch (const DegenerateModes&) {
            continue;
        }
        // generic inits excite every mode, so bounded <=> unbroken
        ++checked;
        CHECK((cls.kind == TrajectoryKind::Bounded) == (phase.variant == PhaseVariant::Unbroken));
    }
}
