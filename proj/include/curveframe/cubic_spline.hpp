#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "curveframe/errors.hpp"

namespace curveframe {

// Interpolating cubic spline over strictly increasing knots. The not-a-knot
// end condition reproduces cubics exactly and avoids the flattened boundary
// layer the natural condition imposes; natural is kept for comparison.
class CubicSpline {
public:
    enum class End { natural, not_a_knot };

    CubicSpline() = default;

    CubicSpline(std::vector<double> t, std::vector<double> y, End end = End::not_a_knot)
        : t_(std::move(t)), y_(std::move(y)) {
        const std::size_t n = t_.size();
        if (n != y_.size()) throw DegenerateInput("spline knot/value length mismatch");
        if (n < 2) throw DegenerateInput("spline needs at least two knots");
        for (std::size_t i = 1; i < n; ++i)
            if (!(t_[i] > t_[i - 1])) throw DegenerateInput("spline knots must increase strictly");
        m_ = solve_second_derivatives(end);
    }

    double value(double t) const {
        const std::size_t i = segment(t);
        const double h = t_[i + 1] - t_[i];
        const double a = t_[i + 1] - t;
        const double b = t - t_[i];
        return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
               (y_[i] / h - m_[i] * h / 6.0) * a + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
    }

    double deriv(double t) const {
        const std::size_t i = segment(t);
        const double h = t_[i + 1] - t_[i];
        const double a = t_[i + 1] - t;
        const double b = t - t_[i];
        return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) +
               (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
    }

    double deriv2(double t) const {
        const std::size_t i = segment(t);
        const double h = t_[i + 1] - t_[i];
        return (m_[i] * (t_[i + 1] - t) + m_[i + 1] * (t - t_[i])) / h;
    }

    const std::vector<double>& knots() const { return t_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::vector<double> t_, y_, m_;

    // Index of the segment containing t; clamps outside the knot range, so
    // evaluation beyond the ends extends the boundary cubics.
    std::size_t segment(double t) const {
        if (t <= t_[1]) return 0;
        const std::size_t last = t_.size() - 2;
        if (t >= t_[last]) return last;
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        return static_cast<std::size_t>(it - t_.begin()) - 1;
    }

    std::vector<double> solve_second_derivatives(End end) const {
        const std::size_t n = t_.size();
        if (n == 2) return {0.0, 0.0};

        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t_[i + 1] - t_[i];

        if (n == 3 && end == End::not_a_knot) {
            // Three knots with both not-a-knot conditions: the interpolant is
            // the single parabola through them, with constant 2nd derivative.
            const double d0 = (y_[1] - y_[0]) / h[0];
            const double d1 = (y_[2] - y_[1]) / h[1];
            const double m = 2.0 * (d1 - d0) / (h[0] + h[1]);
            return {m, m, m};
        }

        // Tridiagonal system for interior second derivatives; boundary rows
        // depend on the end condition.
        std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            lower[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            upper[i] = h[i];
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
        }

        if (end == End::natural) {
            diag[0] = 1.0;
            diag[n - 1] = 1.0;
        } else {
            // Not-a-knot: continuous third derivative across the first and
            // last interior knots. Expressing m0 (resp. m_{n-1}) through its
            // neighbours keeps the system tridiagonal.
            const double r0 = h[0] / h[1];
            diag[1] += h[0] * (1.0 + r0);
            upper[1] -= h[0] * r0;
            lower[1] = 0.0;

            const double r1 = h[n - 2] / h[n - 3];
            diag[n - 2] += h[n - 2] * (1.0 + r1);
            lower[n - 2] -= h[n - 2] * r1;
            upper[n - 2] = 0.0;

            diag[0] = 1.0;      // placeholder rows, overwritten below
            diag[n - 1] = 1.0;
        }

        // Thomas solve over rows 1..n-2 (rows 0 and n-1 are decoupled).
        std::vector<double> m(n, 0.0);
        std::vector<double> cp(n, 0.0), dp(n, 0.0);
        cp[1] = upper[1] / diag[1];
        dp[1] = rhs[1] / diag[1];
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double denom = diag[i] - lower[i] * cp[i - 1];
            cp[i] = upper[i] / denom;
            dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / denom;
        }
        m[n - 2] = dp[n - 2];
        for (std::size_t i = n - 2; i-- > 1;) m[i] = dp[i] - cp[i] * m[i + 1];

        if (end == End::natural) {
            m[0] = 0.0;
            m[n - 1] = 0.0;
        } else {
            m[0] = m[1] * (1.0 + h[0] / h[1]) - m[2] * (h[0] / h[1]);
            m[n - 1] = m[n - 2] * (1.0 + h[n - 2] / h[n - 3]) - m[n - 3] * (h[n - 2] / h[n - 3]);
        }
        return m;
    }
};

}  // namespace curveframe
