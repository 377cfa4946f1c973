#include "ptchain/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ptchain/parallel.hpp"

namespace ptchain {

std::string to_string(PhaseVariant v) {
    switch (v) {
        case PhaseVariant::Unbroken: return "unbroken";
        case PhaseVariant::Exceptional: return "exceptional";
        case PhaseVariant::Broken: return "broken";
    }
    return "?";
}

PhaseClass classify_phase_n2(double omega_x_sq, double omega_y_sq, double gamma, double tol) {
    const double detuning = std::abs(omega_x_sq - omega_y_sq);
    const double threshold = 2.0 * std::abs(gamma);
    if (std::abs(detuning - threshold) <= tol) return {PhaseVariant::Exceptional, 0, 1};
    if (detuning < threshold) return {PhaseVariant::Broken, -1, -1};
    // both real; they are positive whenever the product omega_x^2*omega_y^2
    // + gamma^2 is, i.e. always away from the degenerate origin
    const double sum = omega_x_sq + omega_y_sq;
    const double split = std::sqrt(detuning * detuning - threshold * threshold);
    const double lam_min = 0.5 * (sum - split);
    if (lam_min <= tol) return {PhaseVariant::Broken, -1, -1};
    return {PhaseVariant::Unbroken, -1, -1};
}

namespace {

double cubic_value(double lam, double s1, double s2, double s3) {
    return ((lam - s1) * lam + s2) * lam - s3;
}

}  // namespace

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
    const double b = c2 / c3;
    const double c = c1 / c3;
    const double d = c0 / c3;
    // depress: x = t - b/3
    const double shift = b / 3.0;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    std::vector<double> roots;
    if (disc > 0.0) {
        // three distinct real roots (p < 0 here)
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    } else if (p == 0.0 && q == 0.0) {
        roots.assign(3, -shift);
    } else if (disc == 0.0) {
        // double root plus simple root
        const double dbl = -1.5 * q / p;
        const double simple = 3.0 * q / p;
        roots = {dbl, dbl, simple};
        for (double& r : roots) r -= shift;
    } else {
        const double r = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double u = std::cbrt(-q / 2.0 + (q >= 0.0 ? -r : r));
        const double v = u == 0.0 ? 0.0 : -p / (3.0 * u);
        roots.push_back(u + v - shift);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

/// |f| threshold at an extremum below which two roots sit within
/// delta_tol of each other: a double root splitting by delta moves the
/// extremal value by ~|f''| (delta/2)^2 / 2.  Keeps the closed-form
/// criteria consistent with the generic root-separation tolerance.
double split_margin(double second_derivative, double delta_tol) {
    const double half = 0.5 * delta_tol;
    return 0.5 * std::abs(second_derivative) * half * half;
}

}  // namespace

PhaseClass cubic_criteria_n3(const std::array<double, 3>& omega_sq, double gamma, double tol) {
    const double wx2 = omega_sq[0], wy2 = omega_sq[1], wz2 = omega_sq[2];
    const double g2 = gamma * gamma;
    const double s1 = wx2 + wy2 + wz2;
    const double s2 = wx2 * wy2 + wx2 * wz2 + wy2 * wz2 + 2.0 * g2;
    const double s3 = wx2 * wy2 * wz2 + (wx2 + wz2) * g2;

    const double scale = std::max({1.0, std::abs(s1), std::sqrt(std::abs(s2)),
                                   std::cbrt(std::abs(s3))});
    const double loc_margin = tol * scale;
    const double val_margin = tol * scale * scale * scale;

    // extrema of f: roots of f' = 3 lam^2 - 2 s1 lam + s2
    const double disc_fp = 4.0 * (s1 * s1 - 3.0 * s2);
    if (disc_fp <= 0.0) {
        // monotone cubic: one real root, complex pair -- unless the
        // inflection point itself is a (triple) root
        const double inflection = s1 / 3.0;
        if (std::abs(disc_fp) <= tol * scale * scale &&
            std::abs(cubic_value(inflection, s1, s2, s3)) <= val_margin)
            return {PhaseVariant::Exceptional, -1, -1};
        return {PhaseVariant::Broken, -1, -1};
    }
    const double split = std::sqrt(disc_fp);
    const double lam_at_max = (2.0 * s1 - split) / 6.0;
    const double lam_at_min = (2.0 * s1 + split) / 6.0;
    const double f_at_max = cubic_value(lam_at_max, s1, s2, s3);
    const double f_at_min = cubic_value(lam_at_min, s1, s2, s3);
    const double margin_max = split_margin(6.0 * lam_at_max - 2.0 * s1, loc_margin);
    const double margin_min = split_margin(6.0 * lam_at_min - 2.0 * s1, loc_margin);

    if (std::abs(f_at_max) <= margin_max || std::abs(f_at_min) <= margin_min)
        return {PhaseVariant::Exceptional, -1, -1};
    if (-s3 < -val_margin && lam_at_max > loc_margin && lam_at_min > loc_margin &&
        f_at_max > margin_max && f_at_min < -margin_min)
        return {PhaseVariant::Unbroken, -1, -1};
    return {PhaseVariant::Broken, -1, -1};
}

PhaseClass quartic_criteria_n4(const std::array<double, 4>& omega_sq, double gamma, double tol) {
    const double wx2 = omega_sq[0], wy2 = omega_sq[1], wz2 = omega_sq[2], ww2 = omega_sq[3];
    const double g2 = gamma * gamma;
    const double a = wx2 + wy2 + wz2 + ww2;
    const double b = wx2 * wy2 + wx2 * wz2 + wx2 * ww2 + wy2 * wz2 + wy2 * ww2 + wz2 * ww2 +
                     3.0 * g2;
    const double c = wx2 * wy2 * wz2 + wx2 * wy2 * ww2 + wx2 * wz2 * ww2 + wy2 * wz2 * ww2 +
                     2.0 * g2 * wx2 + 2.0 * g2 * ww2 + g2 * wy2 + g2 * wz2;
    const double d = wx2 * wy2 * wz2 * ww2 + g2 * wx2 * wy2 + g2 * wx2 * ww2 + g2 * wz2 * ww2 +
                     g2 * g2;

    const auto f = [&](double lam) { return (((lam - a) * lam + b) * lam - c) * lam + d; };
    const auto fpp = [&](double lam) { return (12.0 * lam - 6.0 * a) * lam + 2.0 * b; };
    const double scale = std::max({1.0, std::abs(a), std::sqrt(std::abs(b)),
                                   std::cbrt(std::abs(c)), std::pow(std::abs(d), 0.25)});
    const double loc_margin = tol * scale;
    const double val_margin = tol * scale * scale * scale * scale;

    const std::vector<double> ext = real_cubic_roots(4.0, -3.0 * a, 2.0 * b, -c);
    if (ext.size() < 3) {
        // single minimum: at most two real roots, so the spectrum cannot be
        // fully real; a touching minimum still leaves a complex pair
        return {PhaseVariant::Broken, -1, -1};
    }
    const double f1 = f(ext[0]);  // local minimum
    const double f2 = f(ext[1]);  // local maximum
    const double f3 = f(ext[2]);  // local minimum
    const double m1 = split_margin(fpp(ext[0]), loc_margin);
    const double m2 = split_margin(fpp(ext[1]), loc_margin);
    const double m3 = split_margin(fpp(ext[2]), loc_margin);
    const bool real_pattern = f1 <= m1 && f3 <= m3 && f2 >= -m2;
    if (real_pattern &&
        (std::abs(f1) <= m1 || std::abs(f2) <= m2 || std::abs(f3) <= m3))
        return {PhaseVariant::Exceptional, -1, -1};
    if (d > val_margin && ext[0] > loc_margin && f1 < -m1 && f2 > m2 && f3 < -m3)
        return {PhaseVariant::Unbroken, -1, -1};
    return {PhaseVariant::Broken, -1, -1};
}

PhaseClass classify_phase(const ChainSpec& spec, double tol) {
    const ModeSet ms = general_mode_frequencies(spec);
    const auto& lam = ms.nu_sq;
    double max_abs = 0.0;
    for (const Complex& l : lam) max_abs = std::max(max_abs, std::abs(l));
    const double margin = tol * (1.0 + max_abs);

    int complex_witness = -1;
    double worst_im = 0.0;
    for (size_t j = 0; j < lam.size(); ++j)
        if (std::abs(lam[j].imag()) > margin && std::abs(lam[j].imag()) > worst_im) {
            worst_im = std::abs(lam[j].imag());
            complex_witness = static_cast<int>(j);
        }
    if (complex_witness >= 0) return {PhaseVariant::Broken, complex_witness, -1};

    // real spectrum: look for degeneracies and nonpositive roots
    std::vector<std::pair<double, int>> re(lam.size());
    for (size_t j = 0; j < lam.size(); ++j) re[j] = {lam[j].real(), static_cast<int>(j)};
    std::sort(re.begin(), re.end());
    for (size_t j = 0; j + 1 < re.size(); ++j)
        if (re[j + 1].first - re[j].first <= margin)
            return {PhaseVariant::Exceptional, re[j].second, re[j + 1].second};
    if (re.front().first <= margin) return {PhaseVariant::Broken, re.front().second, -1};
    return {PhaseVariant::Unbroken, -1, -1};
}

double ScanAxis::value(int i) const {
    if (count <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / (count - 1);
}

namespace {

PhaseClass classify_cell(const ChainSpec& spec, double tol) {
    switch (spec.n) {
        case 2:
            return classify_phase_n2(spec.omega_sq[0], spec.omega_sq[1], spec.gamma, tol);
        case 3:
            return cubic_criteria_n3({spec.omega_sq[0], spec.omega_sq[1], spec.omega_sq[2]},
                                     spec.gamma, tol);
        case 4:
            return quartic_criteria_n4(
                {spec.omega_sq[0], spec.omega_sq[1], spec.omega_sq[2], spec.omega_sq[3]},
                spec.gamma, tol);
        default:
            return classify_phase(spec, tol);
    }
}

}  // namespace

PhaseGrid scan_phase_diagram(const ScanRequest& request, int threads) {
    if (request.axes.empty() || request.axes.size() > 3)
        throw InvalidSpec("scan_phase_diagram: need 1 to 3 axes");
    if (request.base.n < 2 ||
        static_cast<int>(request.base.omega_sq.size()) != request.base.n)
        throw InvalidSpec("scan_phase_diagram: malformed base spec");
    std::int64_t cells = 1;
    for (const ScanAxis& ax : request.axes) {
        if (ax.count < 1) throw InvalidSpec("scan_phase_diagram: axis count must be >= 1");
        if (ax.count > 1 && !(ax.max > ax.min))
            throw InvalidSpec("scan_phase_diagram: axis range must be increasing");
        if (ax.param != AxisParam::Gamma && (ax.site < 0 || ax.site >= request.base.n))
            throw InvalidSpec("scan_phase_diagram: axis site out of range");
        cells *= ax.count;
        if (cells > kMaxGridCells)
            throw GridTooLarge("scan_phase_diagram: grid exceeds cell cap");
    }

    PhaseGrid grid;
    grid.base = request.base;
    grid.axes = request.axes;
    grid.cells.resize(static_cast<size_t>(cells));

    const auto& axes = request.axes;
    parallel_for(static_cast<size_t>(cells), threads, [&](size_t flat) {
        ChainSpec spec = request.base;
        std::int64_t rem = static_cast<std::int64_t>(flat);
        for (size_t k = axes.size(); k-- > 0;) {
            const int i = static_cast<int>(rem % axes[k].count);
            rem /= axes[k].count;
            const double v = axes[k].value(i);
            switch (axes[k].param) {
                case AxisParam::Omega:
                    spec.omega_sq[static_cast<size_t>(axes[k].site)] = v * v;
                    break;
                case AxisParam::OmegaSq:
                    spec.omega_sq[static_cast<size_t>(axes[k].site)] = v;
                    break;
                case AxisParam::Gamma:
                    spec.gamma = v;
                    break;
            }
        }
        grid.cells[flat] = static_cast<std::uint8_t>(classify_cell(spec, request.tol).variant);
    });
    return grid;
}

}  // namespace ptchain
