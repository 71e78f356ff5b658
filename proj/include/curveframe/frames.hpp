#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "curveframe/curve.hpp"
#include "curveframe/errors.hpp"
#include "curveframe/expression.hpp"
#include "curveframe/finite_diff.hpp"
#include "curveframe/profile.hpp"
#include "curveframe/vec3.hpp"

namespace curveframe {

struct FrameOptions {
    double kappa_min = 1e-8;
};

// Frenet apparatus per sample. N, B and tau are meaningful only where
// defined[i] != 0 (curvature above kappa_min); elsewhere N = B = 0 and
// tau = NaN.
struct FrenetField {
    std::vector<Vec3> T, N, B;
    std::vector<double> kappa, tau;
    std::vector<char> defined;

    std::size_t size() const { return T.size(); }
};

// Parallel-transport apparatus per sample; defined along any regular curve,
// straight segments included. theta is the unwrapped angle atan2(k2, k1).
struct BishopField {
    std::vector<Vec3> T, M1, M2;
    std::vector<double> k1, k2, theta;

    std::size_t size() const { return T.size(); }
};

namespace frame_detail {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Shift angle by whole turns to land nearest prev.
inline double unwrap_near(double angle, double prev) {
    return angle + two_pi * std::round((prev - angle) / two_pi);
}

// Cumulative integral of uniform samples g, O(h^4): composite Simpson on
// even indices, half-panel quadratic rules on odd ones.
inline std::vector<double> cumulative_simpson(std::span<const double> g, double h) {
    const std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (g[0] + g[1]);
        return out;
    }
    for (std::size_t i = 2; i < n; i += 2)
        out[i] = out[i - 2] + h / 3.0 * (g[i - 2] + 4.0 * g[i - 1] + g[i]);
    for (std::size_t i = 1; i < n; i += 2) {
        if (i + 1 < n)
            out[i] = out[i - 1] + h / 12.0 * (5.0 * g[i - 1] + 8.0 * g[i] - g[i + 1]);
        else
            out[i] = out[i - 1] + h / 12.0 * (-g[i - 2] + 8.0 * g[i - 1] + 5.0 * g[i]);
    }
    return out;
}

inline Vec3 reject_normalized(const Vec3& v, const Vec3& unit) {
    return (v - v.dot(unit) * unit).normalized();
}

}  // namespace frame_detail

// Frenet frame of a uniformly sampled curve via 4th-order stencils.
// kappa = |gamma''|, tau = <gamma' x gamma'', gamma'''> / kappa^2.
inline FrenetField frenet_frame(const CurveSamples& curve, const FrameOptions& options = {}) {
    if (curve.size() < 9) throw InsufficientSamples("frenet frame needs at least 9 samples");
    const auto d = derivatives(curve, 3);
    const std::size_t n = curve.size();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    FrenetField f;
    f.T.resize(n);
    f.N.assign(n, Vec3{});
    f.B.assign(n, Vec3{});
    f.kappa.resize(n);
    f.tau.assign(n, nan);
    f.defined.assign(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& g1 = d[0][i];
        const Vec3& g2 = d[1][i];
        const Vec3& g3 = d[2][i];
        const double speed = g1.norm();
        if (!(speed > 0.0)) throw DegenerateInput("zero tangent in sampled curve");
        f.T[i] = g1 / speed;
        const double kappa = g2.norm();
        f.kappa[i] = kappa;
        if (kappa > options.kappa_min) {
            f.N[i] = frame_detail::reject_normalized(g2 / kappa, f.T[i]);
            f.B[i] = f.T[i].cross(f.N[i]);
            f.tau[i] = g1.cross(g2).dot(g3) / (kappa * kappa);
            f.defined[i] = 1;
        }
    }
    return f;
}

// Parallel-transport frame by the double-reflection method: per step, reflect
// (M1, T) through the bisector plane of the chord, then through the bisector
// of the reflected and the next tangent. The initial M1 comes from
// initial_normal projected off T[0], or from the coordinate axis least
// aligned with T[0].
inline BishopField bishop_frame(const CurveSamples& curve,
                                std::optional<Vec3> initial_normal = std::nullopt) {
    const std::size_t n = curve.size();
    if (n < 5) throw InsufficientSamples("parallel transport needs at least 5 samples");
    const auto d1 = differentiate<Vec3>(curve.points, curve.h, 1);
    const auto d2 = differentiate<Vec3>(curve.points, curve.h, 2);

    BishopField f;
    f.T.resize(n);
    f.M1.resize(n);
    f.M2.resize(n);
    f.k1.resize(n);
    f.k2.resize(n);
    f.theta.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double speed = d1[i].norm();
        if (!(speed > 0.0)) throw DegenerateInput("zero tangent in sampled curve");
        f.T[i] = d1[i] / speed;
    }

    if (initial_normal) {
        const Vec3 w = *initial_normal;
        if (!w.finite() || !(w.norm() > 0.0))
            throw DegenerateInitialNormal("initial normal must be a nonzero finite vector");
        const Vec3 unit = w.normalized();
        const Vec3 perp = unit - unit.dot(f.T[0]) * f.T[0];
        // |perp| = sin(angle to T); reject anything within a microradian.
        if (!(perp.norm() > 1e-6))
            throw DegenerateInitialNormal("initial normal is parallel to the initial tangent");
        f.M1[0] = perp.normalized();
    } else {
        const double ax = std::abs(f.T[0].x), ay = std::abs(f.T[0].y), az = std::abs(f.T[0].z);
        Vec3 axis{1.0, 0.0, 0.0};
        if (ay < ax || az < ax) axis = (ay <= az) ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0};
        f.M1[0] = frame_detail::reject_normalized(axis, f.T[0]);
    }
    f.M2[0] = f.T[0].cross(f.M1[0]);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Vec3 v1 = curve.points[i + 1] - curve.points[i];
        const double c1 = v1.norm2();
        if (!(c1 > 0.0)) throw DegenerateInput("coincident consecutive samples");
        const Vec3 rl = f.M1[i] - (2.0 / c1) * v1.dot(f.M1[i]) * v1;
        const Vec3 tl = f.T[i] - (2.0 / c1) * v1.dot(f.T[i]) * v1;
        const Vec3 v2 = f.T[i + 1] - tl;
        const double c2 = v2.norm2();
        Vec3 m1 = c2 > 0.0 ? rl - (2.0 / c2) * v2.dot(rl) * v2 : rl;
        m1 = frame_detail::reject_normalized(m1, f.T[i + 1]);
        f.M1[i + 1] = m1;
        f.M2[i + 1] = f.T[i + 1].cross(m1);
    }

    for (std::size_t i = 0; i < n; ++i) {
        f.k1[i] = d2[i].dot(f.M1[i]);
        f.k2[i] = d2[i].dot(f.M2[i]);
        const double raw = std::atan2(f.k2[i], f.k1[i]);
        f.theta[i] = i == 0 ? raw : frame_detail::unwrap_near(raw, f.theta[i - 1]);
    }
    return f;
}

// Prescribed Frenet data (kappa, tau) to parallel-transport curvatures on a
// grid: theta = theta0 + integral of tau, k1 = kappa cos(theta),
// k2 = kappa sin(theta). All derivative channels are filled by finite
// differences.
inline CurvatureProfile frenet_to_bishop(const ScalarFunction& kappa, const ScalarFunction& tau,
                                         double theta0, const Grid& grid) {
    if (grid.n < 5) throw InsufficientSamples("profile grid needs at least 5 samples");
    CurvatureProfile p;
    p.grid = grid;
    p.provenance = Provenance::prescribed;
    p.kappa.resize(grid.n);
    p.tau.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        p.kappa[i] = kappa(grid.s(i));
        p.tau[i] = tau(grid.s(i));
    }
    p.theta = frame_detail::cumulative_simpson(p.tau, grid.h);
    p.k1.resize(grid.n);
    p.k2.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        p.theta[i] += theta0;
        p.k1[i] = p.kappa[i] * std::cos(p.theta[i]);
        p.k2[i] = p.kappa[i] * std::sin(p.theta[i]);
    }
    p.frenet_defined.assign(grid.n, 1);
    fill_bishop_derivatives(p);
    fill_frenet_derivatives(p);
    return p;
}

// Recover Frenet data from parallel-transport curvatures:
// kappa = hypot(k1, k2), theta = unwrapped atan2(k2, k1), tau = dtheta/ds.
// Samples with kappa <= kappa_min get NaN theta/tau and frenet_defined = 0.
// stride widens the derivative stencils (see derivative_stride).
inline CurvatureProfile bishop_to_frenet(CurvatureProfile p, double kappa_min = 1e-8,
                                         int stride = 1) {
    if (!p.has_bishop()) throw IncompleteProfile("bishop channels k1, k2 are required");
    const std::size_t n = p.grid.n;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    p.kappa.resize(n);
    p.theta.assign(n, nan);
    p.frenet_defined.assign(n, 0);
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < n; ++i) {
        p.kappa[i] = std::hypot(p.k1[i], p.k2[i]);
        if (p.kappa[i] > kappa_min) {
            const double raw = std::atan2(p.k2[i], p.k1[i]);
            p.theta[i] = have_prev ? frame_detail::unwrap_near(raw, prev) : raw;
            prev = p.theta[i];
            have_prev = true;
            p.frenet_defined[i] = 1;
        }
    }

    p.tau = differentiate_where(p.theta, p.frenet_defined, p.grid.h, 1, stride);
    p.kappap = differentiate_strided<double>(p.kappa, p.grid.h, 1, stride);
    p.kappapp = differentiate_strided<double>(p.kappa, p.grid.h, 2, stride);
    std::vector<char> tau_ok(n);
    for (std::size_t i = 0; i < n; ++i) tau_ok[i] = std::isfinite(p.tau[i]) ? 1 : 0;
    p.taup = differentiate_where(p.tau, tau_ok, p.grid.h, 1, stride);
    return p;
}

// Measure both frame systems along a sampled curve and assemble the full
// profile: k1/k2/theta from the parallel-transport frame, kappa/tau from the
// Frenet frame, derivative channels by finite differences.
inline CurvatureProfile measure_profile(const CurveSamples& curve,
                                        std::optional<Vec3> initial_normal = std::nullopt,
                                        const FrameOptions& options = {}) {
    const auto bishop = bishop_frame(curve, initial_normal);
    const auto frenet = frenet_frame(curve, options);

    CurvatureProfile p;
    p.grid = {curve.s0, curve.h, curve.size()};
    p.provenance = Provenance::measured;
    p.k1 = bishop.k1;
    p.k2 = bishop.k2;
    p.theta = bishop.theta;
    p.kappa = frenet.kappa;
    p.tau = frenet.tau;
    p.frenet_defined = frenet.defined;
    const int stride = derivative_stride(p.grid, p.provenance);
    fill_bishop_derivatives(p, stride);
    fill_frenet_derivatives(p, stride);
    return p;
}

}  // namespace curveframe
