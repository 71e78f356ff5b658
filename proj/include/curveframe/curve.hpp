#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "curveframe/cubic_spline.hpp"
#include "curveframe/errors.hpp"
#include "curveframe/finite_diff.hpp"
#include "curveframe/vec3.hpp"

namespace curveframe {

// A curve sampled uniformly in arc length: sample i sits at s0 + i*h.
// Produced by resample_arclength or by synthesis; downstream code relies on
// the uniform spacing and never re-checks it.
struct CurveSamples {
    std::vector<Vec3> points;
    double s0 = 0.0;
    double h = 0.0;

    std::size_t size() const { return points.size(); }
    double s(std::size_t i) const { return s0 + static_cast<double>(i) * h; }
    double s_end() const { return points.empty() ? s0 : s(points.size() - 1); }
    double length() const { return points.empty() ? 0.0 : h * static_cast<double>(points.size() - 1); }
};

struct ResampleOptions {
    CubicSpline::End end_condition = CubicSpline::End::not_a_knot;
};

namespace curve_detail {

struct Gauss7 {
    static constexpr std::array<double, 7> node = {
        -0.94910791234275852452, -0.74153118559939443986, -0.40584515137739716691,
        0.0,
        0.40584515137739716691, 0.74153118559939443986, 0.94910791234275852452};
    static constexpr std::array<double, 7> weight = {
        0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
        0.41795918367346938776,
        0.38183005050511894495, 0.27970539148927666790, 0.12948496616886969327};
};

struct SplineCurve {
    CubicSpline x, y, z;

    Vec3 value(double t) const { return {x.value(t), y.value(t), z.value(t)}; }

    double speed(double t) const {
        const Vec3 d{x.deriv(t), y.deriv(t), z.deriv(t)};
        return d.norm();
    }

    // Arc length of the spline over [a, b] by 7-point Gauss-Legendre.
    double arc(double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t k = 0; k < 7; ++k)
            sum += Gauss7::weight[k] * speed(mid + half * Gauss7::node[k]);
        return half * sum;
    }
};

inline SplineCurve fit_chord_spline(std::span<const Vec3> points, CubicSpline::End end,
                                    std::vector<double>& chord_t) {
    const std::size_t n = points.size();
    chord_t.assign(n, 0.0);
    std::vector<double> xs(n), ys(n), zs(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!points[i].finite()) throw DegenerateInput("non-finite input point");
        xs[i] = points[i].x;
        ys[i] = points[i].y;
        zs[i] = points[i].z;
        if (i > 0) {
            const double d = distance(points[i], points[i - 1]);
            if (!(d > 0.0)) throw DegenerateInput("coincident consecutive points");
            chord_t[i] = chord_t[i - 1] + d;
        }
    }
    return {CubicSpline(chord_t, std::move(xs), end), CubicSpline(chord_t, std::move(ys), end),
            CubicSpline(chord_t, std::move(zs), end)};
}

// Solve arc(t0, t) = target for t within the bracket [lo, hi]; Newton with a
// bisection fallback, monotone because speed > 0 on sane data.
inline double invert_arc(const SplineCurve& c, double t0, double base, double target, double lo,
                         double hi, double abs_tol) {
    double t = lo + (hi - lo) * 0.5;
    // Linear seed from the bracket's endpoint arc values.
    const double arc_hi = base + c.arc(t0, hi);
    const double arc_lo = base + c.arc(t0, lo);
    if (arc_hi > arc_lo)
        t = lo + (target - arc_lo) / (arc_hi - arc_lo) * (hi - lo);

    double blo = lo, bhi = hi;
    for (int iter = 0; iter < 80; ++iter) {
        const double g = base + c.arc(t0, t) - target;
        if (std::abs(g) <= abs_tol) return t;
        if (g > 0.0)
            bhi = t;
        else
            blo = t;
        const double sp = c.speed(t);
        double next = sp > 0.0 ? t - g / sp : 0.5 * (blo + bhi);
        if (!(next > blo) || !(next < bhi)) next = 0.5 * (blo + bhi);
        if (bhi - blo <= 1e-16 * std::max(1.0, std::abs(t))) return 0.5 * (blo + bhi);
        t = next;
    }
    return t;
}

}  // namespace curve_detail

// Fit a chord-parameterized cubic spline through the input polyline and
// return n samples equally spaced in the spline's arc length. Endpoints are
// reproduced exactly; h is the common arc step.
inline CurveSamples resample_arclength(std::span<const Vec3> points, std::size_t n,
                                       const ResampleOptions& options = {}) {
    if (points.size() < 2) throw DegenerateInput("fewer than 2 distinct points");
    if (n < 2) throw DegenerateInput("resample target must have at least 2 samples");

    std::vector<double> chord_t;
    const auto spline = curve_detail::fit_chord_spline(points, options.end_condition, chord_t);
    const std::size_t segments = chord_t.size() - 1;

    // Cumulative spline arc length at the knots.
    std::vector<double> knot_arc(chord_t.size(), 0.0);
    for (std::size_t i = 0; i < segments; ++i)
        knot_arc[i + 1] = knot_arc[i] + spline.arc(chord_t[i], chord_t[i + 1]);
    const double total = knot_arc.back();
    if (!(total > 0.0) || !std::isfinite(total))
        throw DegenerateInput("curve has no measurable length");

    CurveSamples out;
    out.s0 = 0.0;
    out.h = total / static_cast<double>(n - 1);
    out.points.resize(n);
    out.points.front() = points.front();
    out.points.back() = points.back();

    const double tol = 1e-14 * std::max(1.0, total);
    std::size_t seg = 0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double target = out.h * static_cast<double>(j);
        while (seg + 1 < segments && knot_arc[seg + 1] < target) ++seg;
        const double t = curve_detail::invert_arc(spline, chord_t[seg], knot_arc[seg], target,
                                                  chord_t[seg], chord_t[seg + 1], tol);
        out.points[j] = spline.value(t);
    }
    return out;
}

inline CurveSamples resample_arclength(const std::vector<Vec3>& points, std::size_t n,
                                       const ResampleOptions& options = {}) {
    return resample_arclength(std::span<const Vec3>(points), n, options);
}

// Derivative fields d^m(gamma)/ds^m for m = 1..order, each sampled on the
// curve's grid. 4th-order stencils; order must be 1..4 and the curve must
// carry at least 2*order + 1 samples.
inline std::vector<std::vector<Vec3>> derivatives(const CurveSamples& curve, int order) {
    if (order < 1 || order > 4) throw InvalidOrder("derivative order must be 1..4");
    if (curve.size() < 2 * static_cast<std::size_t>(order) + 1)
        throw InsufficientSamples("need at least 2*order + 1 samples");
    std::vector<std::vector<Vec3>> out;
    out.reserve(static_cast<std::size_t>(order));
    for (int m = 1; m <= order; ++m)
        out.push_back(differentiate<Vec3>(curve.points, curve.h, m));
    return out;
}

}  // namespace curveframe
