#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "curveframe/errors.hpp"
#include "curveframe/vec3.hpp"

namespace curveframe {

// Weights w such that f^(m)(z) ~ sum_j w[j] f(x[j]), for arbitrary nodes x.
// Fornberg's recurrence; exact for polynomials of degree < x.size().
inline std::vector<double> fd_weights(double z, std::span<const double> x, int m) {
    const int n = static_cast<int>(x.size());
    if (m < 0) throw InvalidOrder("derivative order must be non-negative");
    if (n < m + 1) throw InsufficientSamples("stencil shorter than order + 1");

    std::vector<std::vector<double>> c(static_cast<std::size_t>(m) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[static_cast<std::size_t>(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                        c1 * (k * c[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)] -
                              c5 * c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i - 1)]) /
                        c2;
                c[0][static_cast<std::size_t>(i)] =
                    -c1 * c5 * c[0][static_cast<std::size_t>(i - 1)] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
                    (c4 * c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] -
                     k * c[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]) /
                    c3;
            c[0][static_cast<std::size_t>(j)] = c4 * c[0][static_cast<std::size_t>(j)] / c3;
        }
        c1 = c2;
    }
    return c[static_cast<std::size_t>(m)];
}

namespace fd_detail {

// Stencil widths giving 4th-order truncation on uniform grids.
inline int central_width(int m) { return m <= 2 ? 5 : 7; }
inline int boundary_width(int m) { return m + 4; }

// Weights in index units for derivative order m at offset z within a window
// of `width` consecutive nodes. Scale by h^-m for a grid of spacing h.
inline std::vector<double> window_weights(int width, int z, int m) {
    std::vector<double> nodes(static_cast<std::size_t>(width));
    for (int j = 0; j < width; ++j) nodes[static_cast<std::size_t>(j)] = static_cast<double>(j);
    return fd_weights(static_cast<double>(z), nodes, m);
}

struct WindowPlan {
    int start = 0;  // first node of the window
    int width = 0;
    int z = 0;  // evaluation offset inside the window
};

// Centered window where possible, shifted copies of the wider boundary
// stencil near the ends.
inline WindowPlan plan_window(int i, int n, int m) {
    const int cw = central_width(m);
    const int half = cw / 2;
    if (i >= half && i + half < n) return {i - half, cw, half};
    const int bw = std::min(boundary_width(m), n);
    int start = std::clamp(i - bw / 2, 0, n - bw);
    return {start, bw, i - start};
}

}  // namespace fd_detail

// Order-m derivative of uniformly spaced samples, 4th-order accurate in the
// interior. T is double or Vec3 (anything with +, -, double*T and T{} zero).
// Sums w_j (f_j - f_i) rather than w_j f_j: the weights of a derivative
// stencil sum to zero, so subtracting the center value removes the dominant
// cancellation term.
template <typename T>
std::vector<T> differentiate(std::span<const T> f, double h, int m) {
    if (m < 1 || m > 4) throw InvalidOrder("derivative order must be 1..4");
    const std::size_t n = f.size();
    if (n < 2 * static_cast<std::size_t>(m) + 1)
        throw InsufficientSamples("need at least 2*order + 1 samples");
    if (!(h > 0.0)) throw DegenerateInput("sample spacing must be positive");

    const double scale = 1.0 / std::pow(h, m);
    const int ni = static_cast<int>(n);

    // Weight cache keyed by (width, z); the handful of distinct windows is
    // tiny compared with n.
    std::vector<std::vector<double>> cache;
    std::vector<std::pair<int, int>> keys;
    auto weights_for = [&](int width, int z) -> const std::vector<double>& {
        for (std::size_t k = 0; k < keys.size(); ++k)
            if (keys[k].first == width && keys[k].second == z) return cache[k];
        keys.emplace_back(width, z);
        cache.push_back(fd_detail::window_weights(width, z, m));
        return cache.back();
    };

    std::vector<T> out(n);
    for (int i = 0; i < ni; ++i) {
        const auto w = fd_detail::plan_window(i, ni, m);
        const auto& coeff = weights_for(w.width, w.z);
        T acc{};
        for (int j = 0; j < w.width; ++j)
            acc += coeff[static_cast<std::size_t>(j)] *
                   (f[static_cast<std::size_t>(w.start + j)] - f[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(i)] = scale * acc;
    }
    return out;
}

template <typename T>
std::vector<T> differentiate(const std::vector<T>& f, double h, int m) {
    return differentiate(std::span<const T>(f), h, m);
}

// Derivative on a widened stencil: window nodes are `stride` samples apart,
// evaluated at every sample (fractional offsets near the ends). Values that
// already carry rounding-level noise a lose a * O(1)/(stride*h)^m to it
// instead of a * O(1)/h^m, which is what makes second derivatives of measured
// channels usable; truncation grows only as (stride*h)^4.
template <typename T>
std::vector<T> differentiate_strided(std::span<const T> f, double h, int m, int stride) {
    if (stride <= 1) return differentiate(f, h, m);
    if (m < 1 || m > 4) throw InvalidOrder("derivative order must be 1..4");
    if (!(h > 0.0)) throw DegenerateInput("sample spacing must be positive");
    const int ni = static_cast<int>(f.size());
    const int width = fd_detail::central_width(m);
    const int reach = (width - 1) * stride;
    if (ni < reach + 1) throw InsufficientSamples("stride too wide for sample count");

    const double hw = static_cast<double>(stride) * h;
    const double scale = 1.0 / std::pow(hw, m);
    std::vector<double> nodes(static_cast<std::size_t>(width));
    for (int j = 0; j < width; ++j) nodes[static_cast<std::size_t>(j)] = static_cast<double>(j);

    // Cache weights by the sample's offset from the window start; interior
    // samples share one entry, boundary ones add at most reach per side.
    std::vector<std::vector<double>> cache;
    std::vector<int> keys;
    auto weights_for = [&](int off) -> const std::vector<double>& {
        for (std::size_t k = 0; k < keys.size(); ++k)
            if (keys[k] == off) return cache[k];
        keys.push_back(off);
        cache.push_back(fd_weights(static_cast<double>(off) / static_cast<double>(stride), nodes, m));
        return cache.back();
    };

    std::vector<T> out(f.size());
    for (int i = 0; i < ni; ++i) {
        const int start = std::clamp(i - (width / 2) * stride, 0, ni - 1 - reach);
        const auto& coeff = weights_for(i - start);
        T acc{};
        for (int j = 0; j < width; ++j)
            acc += coeff[static_cast<std::size_t>(j)] *
                   (f[static_cast<std::size_t>(start + j * stride)] - f[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(i)] = scale * acc;
    }
    return out;
}

template <typename T>
std::vector<T> differentiate_strided(const std::vector<T>& f, double h, int m, int stride) {
    return differentiate_strided(std::span<const T>(f), h, m, stride);
}

// Same as differentiate, but samples flagged invalid (ok[j] == 0) poison only
// the windows that touch them: those outputs become NaN instead of spreading.
// stride widens the window the same way differentiate_strided does.
inline std::vector<double> differentiate_where(std::span<const double> f,
                                               std::span<const char> ok, double h, int m,
                                               int stride = 1) {
    if (m < 1 || m > 4) throw InvalidOrder("derivative order must be 1..4");
    const std::size_t n = f.size();
    if (ok.size() != n) throw DegenerateInput("mask length mismatch");
    if (n < 2 * static_cast<std::size_t>(m) + 1)
        throw InsufficientSamples("need at least 2*order + 1 samples");
    if (!(h > 0.0)) throw DegenerateInput("sample spacing must be positive");
    if (stride < 1) throw DegenerateInput("stride must be positive");
    const int ni = static_cast<int>(n);
    if (stride > 1 && ni < (fd_detail::central_width(m) - 1) * stride + 1)
        throw InsufficientSamples("stride too wide for sample count");

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const double scale = 1.0 / std::pow(static_cast<double>(stride) * h, m);

    std::vector<std::vector<double>> cache;
    std::vector<std::pair<int, int>> keys;
    auto weights_for = [&](int width, int off) -> const std::vector<double>& {
        for (std::size_t k = 0; k < keys.size(); ++k)
            if (keys[k].first == width && keys[k].second == off) return cache[k];
        keys.emplace_back(width, off);
        if (stride == 1) {
            cache.push_back(fd_detail::window_weights(width, off, m));
        } else {
            std::vector<double> nodes(static_cast<std::size_t>(width));
            for (int j = 0; j < width; ++j)
                nodes[static_cast<std::size_t>(j)] = static_cast<double>(j);
            cache.push_back(
                fd_weights(static_cast<double>(off) / static_cast<double>(stride), nodes, m));
        }
        return cache.back();
    };

    std::vector<double> out(n, nan);
    for (int i = 0; i < ni; ++i) {
        if (!ok[static_cast<std::size_t>(i)]) continue;
        int start, width;
        if (stride == 1) {
            const auto w = fd_detail::plan_window(i, ni, m);
            start = w.start;
            width = w.width;
        } else {
            width = fd_detail::central_width(m);
            start = std::clamp(i - (width / 2) * stride, 0, ni - 1 - (width - 1) * stride);
        }
        bool usable = true;
        for (int j = 0; j < width && usable; ++j)
            usable = ok[static_cast<std::size_t>(start + j * stride)] != 0;
        if (!usable) continue;
        const auto& coeff = weights_for(width, i - start);
        double acc = 0.0;
        for (int j = 0; j < width; ++j)
            acc += coeff[static_cast<std::size_t>(j)] *
                   (f[static_cast<std::size_t>(start + j * stride)] - f[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(i)] = scale * acc;
    }
    return out;
}

}  // namespace curveframe
