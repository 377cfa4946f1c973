#include "ptchain/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptchain/phase.hpp"

namespace ptchain {

namespace {

void check_state(const ChainSpec& spec, const ClassicalState& state, const char* where) {
    if (static_cast<int>(state.x.size()) != spec.n || static_cast<int>(state.v.size()) != spec.n)
        throw DimensionMismatch(std::string(where) + ": state dimension does not match spec");
}

}  // namespace

std::vector<Complex> equations_of_motion(const ChainSpec& spec, const ClassicalState& state) {
    spec.validate();
    check_state(spec, state, "equations_of_motion");
    const Complex ig(0.0, spec.gamma);
    std::vector<Complex> acc(static_cast<size_t>(spec.n));
    for (int j = 0; j < spec.n; ++j) {
        Complex a = -spec.omega_sq[static_cast<size_t>(j)] * state.x[static_cast<size_t>(j)];
        if (j > 0) a -= ig * state.x[static_cast<size_t>(j - 1)];
        if (j + 1 < spec.n) a -= ig * state.x[static_cast<size_t>(j + 1)];
        acc[static_cast<size_t>(j)] = a;
    }
    return acc;
}

Complex classical_energy(const ChainSpec& spec, const ClassicalState& state) {
    check_state(spec, state, "classical_energy");
    Complex h(0.0, 0.0);
    const Complex ig(0.0, spec.gamma);
    for (int j = 0; j < spec.n; ++j) {
        const Complex xj = state.x[static_cast<size_t>(j)];
        const Complex vj = state.v[static_cast<size_t>(j)];
        h += 0.5 * vj * vj + 0.5 * spec.omega_sq[static_cast<size_t>(j)] * xj * xj;
        if (j + 1 < spec.n) h += ig * xj * state.x[static_cast<size_t>(j + 1)];
    }
    return h;
}

ClassicalState ModeAmplitudes::reconstruct(double t) const {
    const int n = modes.size();
    const double dt = t - t0;
    ComplexVector q(n), qdot(n);
    for (int j = 0; j < n; ++j) {
        const Complex nu = modes.nu[static_cast<size_t>(j)];
        const Complex ep = std::exp(Complex(0.0, 1.0) * nu * dt);
        const Complex em = std::exp(Complex(0.0, -1.0) * nu * dt);
        const Complex cp = c_plus[static_cast<size_t>(j)];
        const Complex cm = c_minus[static_cast<size_t>(j)];
        q(j) = cp * ep + cm * em;
        qdot(j) = Complex(0.0, 1.0) * nu * (cp * ep - cm * em);
    }
    const ComplexVector x = transform * q;
    const ComplexVector v = transform * qdot;
    ClassicalState out;
    out.t = t;
    out.x.assign(x.data(), x.data() + n);
    out.v.assign(v.data(), v.data() + n);
    return out;
}

ModeAmplitudes mode_decompose(const ChainSpec& spec, const ClassicalState& init) {
    spec.validate();
    check_state(spec, init, "mode_decompose");
    DecoupledSystem sys = decouple(spec);
    const int n = spec.n;
    ComplexVector x0(n), v0(n);
    for (int j = 0; j < n; ++j) {
        x0(j) = init.x[static_cast<size_t>(j)];
        v0(j) = init.v[static_cast<size_t>(j)];
    }
    const ComplexVector q0 = sys.transform.transpose() * x0;
    const ComplexVector qd0 = sys.transform.transpose() * v0;

    ModeAmplitudes amps;
    amps.t0 = init.t;
    amps.c_plus.resize(static_cast<size_t>(n));
    amps.c_minus.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const Complex nu = sys.modes.nu[static_cast<size_t>(j)];
        if (std::abs(nu) < 1e-12)
            throw DegenerateModes("mode_decompose: vanishing mode frequency");
        amps.c_plus[static_cast<size_t>(j)] = 0.5 * (q0(j) - Complex(0.0, 1.0) * qd0(j) / nu);
        amps.c_minus[static_cast<size_t>(j)] = 0.5 * (q0(j) + Complex(0.0, 1.0) * qd0(j) / nu);
    }
    amps.modes = std::move(sys.modes);
    amps.transform = std::move(sys.transform);
    return amps;
}

namespace {

/// Positive magnitude-weighted energy scale; grows with the solution,
/// unlike |H| which is conserved.
double energy_scale(const ChainSpec& spec, const std::vector<Complex>& x,
                    const std::vector<Complex>& v) {
    double s = 0.0;
    for (int j = 0; j < spec.n; ++j) {
        s += 0.5 * std::norm(v[static_cast<size_t>(j)]) +
             0.5 * spec.omega_sq[static_cast<size_t>(j)] * std::norm(x[static_cast<size_t>(j)]);
        if (j + 1 < spec.n)
            s += std::abs(spec.gamma) * std::abs(x[static_cast<size_t>(j)]) *
                 std::abs(x[static_cast<size_t>(j + 1)]);
    }
    return s;
}

}  // namespace

TrajectoryRecord integrate(const ChainSpec& spec, const ClassicalState& init, double dt,
                           double t_end, double dt_out) {
    spec.validate();
    check_state(spec, init, "integrate");
    if (!(dt > 0.0) || !(t_end > 0.0) || !(dt_out >= dt))
        throw InvalidSpec("integrate: need dt > 0, t_end > 0, dt_out >= dt");

    const int steps_per_out = std::max(1, static_cast<int>(std::lround(dt_out / dt)));
    const double h = dt_out / steps_per_out;
    const int n_out = static_cast<int>(std::floor(t_end / dt_out + 1e-9));
    const int n = spec.n;

    const ComplexMatrix m = build_coupling_matrix(spec).matrix();
    ComplexVector x(n), v(n);
    for (int j = 0; j < n; ++j) {
        x(j) = init.x[static_cast<size_t>(j)];
        v(j) = init.v[static_cast<size_t>(j)];
    }

    TrajectoryRecord rec;
    rec.spec = spec;
    rec.init = init;
    rec.dt_out = dt_out;
    rec.states.reserve(static_cast<size_t>(n_out) + 1);
    rec.energy.reserve(static_cast<size_t>(n_out) + 1);

    const auto snapshot = [&](double t) {
        ClassicalState s;
        s.t = init.t + t;
        s.x.assign(x.data(), x.data() + n);
        s.v.assign(v.data(), v.data() + n);
        rec.energy.push_back(classical_energy(spec, s));
        rec.states.push_back(std::move(s));
    };
    snapshot(0.0);

    const Complex h0 = rec.energy.front();
    double scale_max = std::max(1.0 + std::abs(h0),
                                energy_scale(spec, rec.states.front().x, rec.states.front().v));
    const double dt_factor = std::max(1.0, h / 1e-3);
    const double abort_threshold =
        std::min(0.5, 1e-5 * dt_factor * dt_factor * dt_factor * dt_factor);

    ComplexVector k1x(n), k1v(n), k2x(n), k2v(n), k3x(n), k3v(n), k4x(n), k4v(n);
    for (int block = 1; block <= n_out; ++block) {
        for (int s = 0; s < steps_per_out; ++s) {
            k1x = v;
            k1v = -(m * x);
            k2x = v + 0.5 * h * k1v;
            k2v = -(m * (x + 0.5 * h * k1x));
            k3x = v + 0.5 * h * k2v;
            k3v = -(m * (x + 0.5 * h * k2x));
            k4x = v + h * k3v;
            k4v = -(m * (x + h * k3x));
            x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        snapshot(block * dt_out);
        scale_max = std::max(scale_max, energy_scale(spec, rec.states.back().x, rec.states.back().v));
        const double drift = std::abs(rec.energy.back() - h0) / scale_max;
        if (!(drift <= abort_threshold))
            throw StepTooLarge("integrate: energy drift " + std::to_string(drift) + " at t=" +
                               std::to_string(rec.states.back().t) +
                               " exceeds 10x the integrator contract; reduce dt");
    }
    return rec;
}

TrajectoryClass classify_trajectory(const ChainSpec& spec, const ClassicalState& init,
                                    double excite_tol) {
    if (classify_phase(spec).variant == PhaseVariant::Exceptional)
        return {TrajectoryKind::Secular, 0.0, 0.0};
    const ModeAmplitudes amps = mode_decompose(spec, init);

    double amp_max = 0.0;
    for (size_t j = 0; j < amps.c_plus.size(); ++j)
        amp_max = std::max({amp_max, std::abs(amps.c_plus[j]), std::abs(amps.c_minus[j])});
    const double cutoff = excite_tol * std::max(1.0, amp_max);

    bool any = false;
    double top_rate = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < amps.c_plus.size(); ++j) {
        const double im = amps.modes.nu[j].imag();
        if (std::abs(amps.c_plus[j]) > cutoff) {
            top_rate = std::max(top_rate, -im);  // e^{i nu t} ~ e^{-Im(nu) t}
            any = true;
        }
        if (std::abs(amps.c_minus[j]) > cutoff) {
            top_rate = std::max(top_rate, im);
            any = true;
        }
    }
    if (!any || top_rate == 0.0) return {TrajectoryKind::Bounded, 0.0, 0.0};
    if (top_rate > 0.0) return {TrajectoryKind::Growing, top_rate, 0.0};
    return {TrajectoryKind::Decaying, -top_rate, 0.0};
}

TrajectoryClass classify_trajectory(const TrajectoryRecord& record) {
    const size_t n_samples = record.states.size();
    if (n_samples < 32) throw InsufficientData("classify_trajectory: record too short");
    if (classify_phase(record.spec).variant == PhaseVariant::Exceptional)
        return {TrajectoryKind::Secular, 0.0, 0.0};

    const ModeSet ms = mode_set(record.spec);
    double slowest = std::numeric_limits<double>::max();
    for (const Complex& nu : ms.nu)
        if (nu.real() > 1e-9) slowest = std::min(slowest, nu.real());
    const double span = record.states.back().t - record.states.front().t;
    if (slowest < std::numeric_limits<double>::max() &&
        span < 10.0 * 2.0 * std::numbers::pi / slowest)
        throw InsufficientData("classify_trajectory: need at least ten periods of the slowest mode");

    // windowed envelope fit: slope of log(max |x|) per window
    const int windows = 16;
    std::vector<double> tc, lm;
    for (int w = 0; w < windows; ++w) {
        const size_t lo = n_samples * static_cast<size_t>(w) / windows;
        const size_t hi = n_samples * static_cast<size_t>(w + 1) / windows;
        double peak = 0.0, tmid = 0.0;
        for (size_t i = lo; i < hi; ++i) {
            for (const Complex& xj : record.states[i].x) peak = std::max(peak, std::abs(xj));
            tmid += record.states[i].t;
        }
        if (hi > lo && peak > 0.0) {
            tc.push_back(tmid / static_cast<double>(hi - lo));
            lm.push_back(std::log(peak));
        }
    }
    if (tc.size() < 4) throw InsufficientData("classify_trajectory: not enough envelope windows");

    const auto k = static_cast<double>(tc.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (size_t i = 0; i < tc.size(); ++i) {
        st += tc[i];
        sy += lm[i];
        stt += tc[i] * tc[i];
        sty += tc[i] * lm[i];
    }
    const double denom = k * stt - st * st;
    const double slope = (k * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / k;
    double ss_res = 0.0;
    for (size_t i = 0; i < tc.size(); ++i) {
        const double r = lm[i] - (intercept + slope * tc[i]);
        ss_res += r * r;
    }
    const double se = std::sqrt(ss_res / (k - 2.0) / (denom / k));
    const double hw = 1.96 * se;

    // require a few net e-foldings over the record before calling growth
    const double floor_rate = 5.0 / span;
    if (slope - hw > floor_rate) return {TrajectoryKind::Growing, slope, hw};
    if (slope + hw < -floor_rate) return {TrajectoryKind::Decaying, -slope, hw};
    return {TrajectoryKind::Bounded, slope, hw};
}

namespace {

double take_part(Complex z, ComplexPart p) {
    return p == ComplexPart::Re ? z.real() : z.imag();
}

struct HermiteCubic {
    // value/derivative endpoints over [0,1] with step h
    double g0, g1, d0, d1, h;

    double value(double s) const {
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * g0 + (s3 - 2 * s2 + s) * h * d0 +
               (-2 * s3 + 3 * s2) * g1 + (s3 - s2) * h * d1;
    }
    double slope(double s) const {
        const double s2 = s * s;
        return (6 * s2 - 6 * s) * g0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * g1 +
               (3 * s2 - 2 * s) * h * d1;
    }
    /// Root in [0,1] assuming a sign change between the endpoints.
    double root() const {
        double lo = 0.0, hi = 1.0;
        double flo = g0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = value(mid);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
    /// More than one sign alternation across a few probes means the
    /// record undersamples the section function.
    bool multiple_crossings() const {
        int changes = 0;
        double prev = g0;
        for (double s : {0.25, 0.5, 0.75, 1.0}) {
            const double val = value(s);
            if (val != 0.0 && prev != 0.0 && (val < 0.0) != (prev < 0.0)) ++changes;
            if (val != 0.0) prev = val;
        }
        return changes > 1;
    }
};

}  // namespace

PoincareSection poincare_section(const TrajectoryRecord& record, const SectionConfig& config) {
    const int n = record.spec.n;
    if (config.coord < 0 || config.coord >= n || config.project < 0 || config.project >= n)
        throw InvalidSpec("poincare_section: coordinate index out of range");
    if (record.states.size() < 2)
        throw InsufficientData("poincare_section: record too short");

    // global sampling check: at least ~4 samples per period of the fastest mode
    const ModeSet ms = mode_set(record.spec);
    double fastest = 0.0;
    for (const Complex& nu : ms.nu) fastest = std::max(fastest, nu.real());
    if (fastest > 0.0 && record.dt_out * fastest > std::numbers::pi / 2.0)
        throw UndersampledRecord("poincare_section: dt_out too coarse for the fastest mode");

    PoincareSection sec;
    sec.config = config;

    std::vector<Complex> acc_prev =
        equations_of_motion(record.spec, record.states.front());
    for (size_t i = 0; i + 1 < record.states.size(); ++i) {
        const ClassicalState& s0 = record.states[i];
        const ClassicalState& s1 = record.states[i + 1];
        std::vector<Complex> acc_next = equations_of_motion(record.spec, s1);

        const double g0 = take_part(s0.x[static_cast<size_t>(config.coord)], config.part) - config.level;
        const double g1 = take_part(s1.x[static_cast<size_t>(config.coord)], config.part) - config.level;
        const bool ascending = g0 < 0.0 && g1 >= 0.0;
        const bool descending = g0 > 0.0 && g1 <= 0.0;
        const bool wanted = (config.direction == CrossingDirection::Ascending && ascending) ||
                            (config.direction == CrossingDirection::Descending && descending) ||
                            (config.direction == CrossingDirection::Both && (ascending || descending));
        if (wanted) {
            const double h = s1.t - s0.t;
            const HermiteCubic gc{g0, g1,
                                  take_part(s0.v[static_cast<size_t>(config.coord)], config.part),
                                  take_part(s1.v[static_cast<size_t>(config.coord)], config.part), h};
            if (gc.multiple_crossings())
                throw UndersampledRecord("poincare_section: section function crosses more than once "
                                         "per sample interval; refine dt_out");
            const double s = gc.root();
            const size_t pj = static_cast<size_t>(config.project);
            const HermiteCubic xc{take_part(s0.x[pj], config.project_part),
                                  take_part(s1.x[pj], config.project_part),
                                  take_part(s0.v[pj], config.project_part),
                                  take_part(s1.v[pj], config.project_part), h};
            const HermiteCubic vc{take_part(s0.v[pj], config.project_part),
                                  take_part(s1.v[pj], config.project_part),
                                  take_part(acc_prev[pj], config.project_part),
                                  take_part(acc_next[pj], config.project_part), h};
            sec.times.push_back(s0.t + s * h);
            sec.points.emplace_back(xc.value(s), vc.value(s));
        }
        acc_prev = std::move(acc_next);
    }
    if (sec.points.empty())
        throw NoCrossings("poincare_section: the trajectory never crosses the section");
    return sec;
}

}  // namespace ptchain
