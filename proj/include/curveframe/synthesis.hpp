#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "curveframe/curve.hpp"
#include "curveframe/errors.hpp"
#include "curveframe/expression.hpp"
#include "curveframe/frames.hpp"
#include "curveframe/profile.hpp"
#include "curveframe/vec3.hpp"

namespace curveframe {

enum class CanonicalFamily { aw1, weak_aw2 };

struct SynthesisSpec {
    ScalarFunction k1, k2;
    double s_start = 0.0;
    double s_end = 2.0;
    std::size_t n = 2001;
    Vec3 initial_position{0.0, 0.0, 0.0};
    Vec3 initial_T{1.0, 0.0, 0.0};
    Vec3 initial_M1{0.0, 1.0, 0.0};
};

struct SynthesizedCurve {
    CurveSamples curve;
    BishopField frame;
    double max_renorm_correction = 0.0;  // largest per-step renormalization nudge
};

namespace synth_detail {

struct State {
    Vec3 p, t, m1, m2;
};

inline State derivative(const State& y, double k1, double k2) {
    return {y.t, k1 * y.m1 + k2 * y.m2, -k1 * y.t, -k2 * y.t};
}

inline State axpy(const State& y, double c, const State& d) {
    return {y.p + c * d.p, y.t + c * d.t, y.m1 + c * d.m1, y.m2 + c * d.m2};
}

inline void check_unit(const Vec3& v, const char* what) {
    if (!v.finite() || std::abs(v.norm() - 1.0) > 1e-10)
        throw DomainError(std::string(what) + " must be a unit vector");
}

}  // namespace synth_detail

// Integrate the parallel-transport frame equations
//   gamma' = T,  T' = k1 M1 + k2 M2,  M1' = -k1 T,  M2' = -k2 T
// by classic RK4 on the sample grid, re-orthonormalizing the triad after
// every step (T, then M1 against T, then M2 = T x M1).
inline SynthesizedCurve synthesize_from_bishop(const SynthesisSpec& spec) {
    if (spec.n < 9) throw InsufficientSamples("synthesis needs at least 9 samples");
    if (!(spec.s_end > spec.s_start)) throw DomainError("s_end must exceed s_start");
    synth_detail::check_unit(spec.initial_T, "initial_T");
    synth_detail::check_unit(spec.initial_M1, "initial_M1");
    if (std::abs(spec.initial_T.dot(spec.initial_M1)) > 1e-10)
        throw DomainError("initial_T and initial_M1 must be orthogonal");
    if (!spec.initial_position.finite()) throw DomainError("initial_position must be finite");

    const std::size_t n = spec.n;
    const double h = (spec.s_end - spec.s_start) / static_cast<double>(n - 1);

    SynthesizedCurve out;
    out.curve.s0 = spec.s_start;
    out.curve.h = h;
    out.curve.points.resize(n);
    out.frame.T.resize(n);
    out.frame.M1.resize(n);
    out.frame.M2.resize(n);
    out.frame.k1.resize(n);
    out.frame.k2.resize(n);
    out.frame.theta.resize(n);

    synth_detail::State y{spec.initial_position, spec.initial_T, spec.initial_M1,
                          spec.initial_T.cross(spec.initial_M1)};

    double k1_here = spec.k1(spec.s_start);
    double k2_here = spec.k2(spec.s_start);

    for (std::size_t i = 0; i < n; ++i) {
        out.curve.points[i] = y.p;
        out.frame.T[i] = y.t;
        out.frame.M1[i] = y.m1;
        out.frame.M2[i] = y.m2;
        out.frame.k1[i] = k1_here;
        out.frame.k2[i] = k2_here;
        const double raw = std::atan2(k2_here, k1_here);
        out.frame.theta[i] =
            i == 0 ? raw : frame_detail::unwrap_near(raw, out.frame.theta[i - 1]);

        if (i + 1 == n) break;

        const double s = spec.s_start + static_cast<double>(i) * h;
        const double k1_mid = spec.k1(s + 0.5 * h);
        const double k2_mid = spec.k2(s + 0.5 * h);
        const double k1_next = spec.k1(s + h);
        const double k2_next = spec.k2(s + h);

        const auto f1 = synth_detail::derivative(y, k1_here, k2_here);
        const auto f2 = synth_detail::derivative(synth_detail::axpy(y, 0.5 * h, f1), k1_mid, k2_mid);
        const auto f3 = synth_detail::derivative(synth_detail::axpy(y, 0.5 * h, f2), k1_mid, k2_mid);
        const auto f4 = synth_detail::derivative(synth_detail::axpy(y, h, f3), k1_next, k2_next);

        y.p += h / 6.0 * (f1.p + 2.0 * f2.p + 2.0 * f3.p + f4.p);
        y.t += h / 6.0 * (f1.t + 2.0 * f2.t + 2.0 * f3.t + f4.t);
        y.m1 += h / 6.0 * (f1.m1 + 2.0 * f2.m1 + 2.0 * f3.m1 + f4.m1);
        y.m2 += h / 6.0 * (f1.m2 + 2.0 * f2.m2 + 2.0 * f3.m2 + f4.m2);

        const Vec3 t_new = y.t.normalized();
        const Vec3 m1_new = (y.m1 - y.m1.dot(t_new) * t_new).normalized();
        const Vec3 m2_new = t_new.cross(m1_new);
        const double correction = std::max({(t_new - y.t).norm(), (m1_new - y.m1).norm(),
                                            (m2_new - y.m2).norm()});
        out.max_renorm_correction = std::max(out.max_renorm_correction, correction);
        y.t = t_new;
        y.m1 = m1_new;
        y.m2 = m2_new;

        k1_here = k1_next;
        k2_here = k2_next;
    }
    return out;
}

namespace synth_detail {

inline void check_pole(double s_start, double s_end, double c) {
    // 1/(s+c) must stay finite on [s_start, s_end]: requires s + c > 0 there.
    if (!(s_start + c > 0.0) || !(s_end + c > 0.0))
        throw DomainError("pole of 1/(s+c) inside the requested range");
}

inline std::string reciprocal_text(double c, bool negative) {
    std::string denom;
    if (c >= 0.0)
        denom = "(s+" + expr_detail::format_double(c) + ")";
    else
        denom = "(s-" + expr_detail::format_double(-c) + ")";
    return (negative ? "-1/" : "1/") + denom;
}

}  // namespace synth_detail

// Exact curvature channels for the closed-form families
//   aw1:      k1 = k2 = sign/(s+c)
//   weak_aw2: k1 = -k2 = sign/(s+c)
// including analytic first and second derivatives, so residual checks on the
// prescribed profile carry no differentiation error.
inline CurvatureProfile canonical_profile(CanonicalFamily family, double c, int sign,
                                          const Grid& grid) {
    if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
    if (grid.n < 2 || !(grid.h > 0.0)) throw DegenerateInput("canonical profile needs a real grid");
    synth_detail::check_pole(grid.s0, grid.s_end(), c);

    const double sg = static_cast<double>(sign);
    const double k2_factor = family == CanonicalFamily::aw1 ? 1.0 : -1.0;
    const std::size_t n = grid.n;

    CurvatureProfile p;
    p.grid = grid;
    p.provenance = Provenance::prescribed;
    p.k1.resize(n);
    p.k2.resize(n);
    p.k1p.resize(n);
    p.k2p.resize(n);
    p.k1pp.resize(n);
    p.k2pp.resize(n);
    p.kappa.resize(n);
    p.kappap.resize(n);
    p.kappapp.resize(n);
    p.tau.assign(n, 0.0);
    p.taup.assign(n, 0.0);
    p.theta.resize(n);
    p.frenet_defined.assign(n, 1);

    const double root2 = std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 1.0 / (grid.s(i) + c);
        p.k1[i] = sg * u;
        p.k2[i] = k2_factor * sg * u;
        p.k1p[i] = -sg * u * u;
        p.k2p[i] = -k2_factor * sg * u * u;
        p.k1pp[i] = 2.0 * sg * u * u * u;
        p.k2pp[i] = 2.0 * k2_factor * sg * u * u * u;
        p.kappa[i] = root2 * u;
        p.kappap[i] = -root2 * u * u;
        p.kappapp[i] = 2.0 * root2 * u * u * u;
        p.theta[i] = std::atan2(p.k2[i], p.k1[i]);
    }
    return p;
}

// SynthesisSpec for a canonical family with the matching parsed expressions.
inline SynthesisSpec canonical_spec(CanonicalFamily family, double c, int sign, double s_start,
                                    double s_end, std::size_t n) {
    if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
    if (!(s_end > s_start)) throw DomainError("s_end must exceed s_start");
    synth_detail::check_pole(s_start, s_end, c);
    SynthesisSpec spec;
    const bool neg = sign < 0;
    spec.k1 = ScalarFunction::parse(synth_detail::reciprocal_text(c, neg));
    const bool k2_neg = family == CanonicalFamily::aw1 ? neg : !neg;
    spec.k2 = ScalarFunction::parse(synth_detail::reciprocal_text(c, k2_neg));
    spec.s_start = s_start;
    spec.s_end = s_end;
    spec.n = n;
    return spec;
}

// Frenet-described synthesis: convert (kappa, tau, theta0) to parallel
// transport curvatures on a twice-refined grid (so RK4 half steps land on
// tabulated knots exactly), then integrate.
inline SynthesizedCurve synthesize_from_frenet(const ScalarFunction& kappa,
                                               const ScalarFunction& tau, double theta0,
                                               double s_start, double s_end, std::size_t n,
                                               Vec3 initial_position = {0.0, 0.0, 0.0},
                                               Vec3 initial_T = {1.0, 0.0, 0.0},
                                               Vec3 initial_M1 = {0.0, 1.0, 0.0}) {
    if (n < 9) throw InsufficientSamples("synthesis needs at least 9 samples");
    if (!(s_end > s_start)) throw DomainError("s_end must exceed s_start");

    const std::size_t fine_n = 2 * n - 1;
    const Grid fine = Grid::over(s_start, s_end, fine_n);
    const CurvatureProfile converted = frenet_to_bishop(kappa, tau, theta0, fine);
    for (std::size_t i = 0; i < fine_n; ++i)
        if (converted.kappa[i] < 0.0)
            throw DomainError("kappa must be non-negative over the range");

    std::vector<double> knots(fine_n);
    for (std::size_t i = 0; i < fine_n; ++i) knots[i] = fine.s(i);

    SynthesisSpec spec;
    spec.k1 = ScalarFunction::tabulated(knots, converted.k1);
    spec.k2 = ScalarFunction::tabulated(std::move(knots), converted.k2);
    spec.s_start = s_start;
    spec.s_end = s_end;
    spec.n = n;
    spec.initial_position = initial_position;
    spec.initial_T = initial_T;
    spec.initial_M1 = initial_M1;
    return synthesize_from_bishop(spec);
}

}  // namespace curveframe
