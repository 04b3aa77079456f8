#include "cqom/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqom {

const Peak& PeakReport::dominant() const {
    if (peaks.empty()) throw std::out_of_range("no peaks");
    return *std::max_element(peaks.begin(), peaks.end(),
                             [](const Peak& a, const Peak& b) { return a.height < b.height; });
}

namespace {

struct Vertex {
    double x;
    double y;
};

// Vertex of the parabola through (-h, a), (0, b), (h, c).
std::optional<Vertex> parabola_vertex(double a, double b, double c, double h) {
    const double curv = a - 2.0 * b + c;
    if (!(curv != 0.0)) return std::nullopt;
    const double s = 0.5 * (a - c) / curv;
    if (!(std::abs(s) <= 1.0)) return std::nullopt;
    return Vertex{s * h, b - 0.25 * (a - c) * s};
}

Vertex locate_center(std::span<const double> y, std::size_t i, double h) {
    const double a = y[i - 1], b = y[i], c = y[i + 1];
    if (a > 0.0 && c > 0.0) {
        // 1/y of a Lorentzian is an exact parabola; its minimum is the peak.
        if (auto v = parabola_vertex(1.0 / a, 1.0 / b, 1.0 / c, h); v && v->y > 0.0) return {v->x, 1.0 / v->y};
    }
    if (auto v = parabola_vertex(a, b, c, h)) return *v;
    return {0.0, b};
}

// Position (in sample units from index j) where y crosses `level` between
// samples j and j + 1, with y[j] and y[j+1] on opposite sides.
double crossing(std::span<const double> y, std::size_t j, double level) {
    const double y0 = y[j], y1 = y[j + 1];
    const double linear = (level - y0) / (y1 - y0);
    // Reciprocal quadratic through three points around the bracket.
    std::size_t base = j == 0 ? 0 : j - 1;
    if (base + 2 >= y.size()) base = y.size() - 3;
    const double r0 = y[base], r1 = y[base + 1], r2 = y[base + 2];
    if (!(r0 > 0.0 && r1 > 0.0 && r2 > 0.0 && level > 0.0)) return linear;
    const double u0 = 1.0 / r0, u1 = 1.0 / r1, u2 = 1.0 / r2, target = 1.0 / level;
    // u(s) = u1 + B s + A s^2 with s measured from base + 1.
    const double A = 0.5 * (u0 - 2.0 * u1 + u2);
    const double B = 0.5 * (u2 - u0);
    const double C = u1 - target;
    const double lo = static_cast<double>(j) - static_cast<double>(base + 1);
    const double hi = lo + 1.0;
    auto inside = [&](double s) { return s >= lo - 1e-12 && s <= hi + 1e-12; };
    if (A == 0.0) {
        if (B == 0.0) return linear;
        const double s = -C / B;
        return inside(s) ? s - lo : linear;
    }
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return linear;
    const double root = std::sqrt(disc);
    // Numerically stable pair of roots.
    const double qv = -0.5 * (B + std::copysign(root, B));
    const double s1 = qv / A;
    const double s2 = qv != 0.0 ? C / qv : s1;
    if (inside(s1)) return s1 - lo;
    if (inside(s2)) return s2 - lo;
    return linear;
}

} // namespace

PeakReport find_peaks(std::span<const double> y, const FrequencyGrid& grid, double bare_line,
                      std::span<const PredictedResonance> predicted, PeakOptions options) {
    PeakReport report;
    const std::size_t n = y.size();
    if (n != grid.size()) throw std::invalid_argument("find_peaks: samples do not match the grid");
    if (n < 3) return report;
    const double h = grid.spacing();
    const double global_max = *std::max_element(y.begin(), y.end());
    const double shift0 = grid.center - bare_line;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 0.0)) continue;
        if (y[i] < options.min_relative_height * global_max) continue;
        const Vertex v = locate_center(y, i, h);
        const double half = 0.5 * v.y;

        Peak p;
        p.height = v.y;
        p.shift_vs_bare = grid.offset(i) + shift0 + v.x;
        p.center = bare_line + p.shift_vs_bare;

        std::size_t above = 1;
        std::size_t l = i;
        while (l > 0 && y[l - 1] >= half) {
            --l;
            ++above;
        }
        std::size_t r = i;
        while (r + 1 < n && y[r + 1] >= half) {
            ++r;
            ++above;
        }
        double left_pos, right_pos;
        if (l == 0) {
            left_pos = 0.0;
            p.low_confidence = true;
        } else {
            left_pos = static_cast<double>(l - 1) + crossing(y, l - 1, half);
        }
        if (r + 1 == n) {
            right_pos = static_cast<double>(n - 1);
            p.low_confidence = true;
        } else {
            right_pos = static_cast<double>(r) + crossing(y, r, half);
        }
        p.fwhm = (right_pos - left_pos) * h;
        if (above < 3) p.low_confidence = true;

        if (!predicted.empty()) {
            const PredictedResonance* best = nullptr;
            for (const auto& pr : predicted)
                if (!best || std::abs(pr.detuning - p.shift_vs_bare) < std::abs(best->detuning - p.shift_vs_bare))
                    best = &pr;
            p.channel = *best;
        }
        report.peaks.push_back(std::move(p));
    }
    std::sort(report.peaks.begin(), report.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.shift_vs_bare < b.shift_vs_bare; });
    return report;
}

PeakReport find_peaks(const SpectralCurve& curve, std::span<const PredictedResonance> predicted,
                      PeakOptions options) {
    return find_peaks(curve.samples, curve.grid, curve.bare_line, predicted, options);
}

PeakReport find_peaks(const SelfEnergyCurve& curve, std::span<const PredictedResonance> predicted,
                      PeakOptions options) {
    return find_peaks(curve.lambda, curve.grid, curve.bare_line, predicted, options);
}

std::vector<PredictedResonance> predictions_from(std::span<const PoleTerm> terms, const WaveguideModel& model) {
    std::vector<PredictedResonance> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back({t.center, t.id.branch, t.id.process, t.id.label(model)});
    return out;
}

} // namespace cqom
