#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "curveframe/errors.hpp"
#include "curveframe/finite_diff.hpp"

namespace curveframe {

enum class Provenance { prescribed, measured };

inline const char* provenance_name(Provenance p) {
    return p == Provenance::prescribed ? "prescribed" : "measured";
}

// Uniform arc-length grid: sample i sits at s0 + i*h.
struct Grid {
    double s0 = 0.0;
    double h = 0.0;
    std::size_t n = 0;

    static Grid over(double s_start, double s_end, std::size_t n) {
        if (n < 2) throw DegenerateInput("grid needs at least 2 samples");
        if (!(s_end > s_start)) throw DegenerateInput("grid interval must have positive length");
        return {s_start, (s_end - s_start) / static_cast<double>(n - 1), n};
    }

    double s(std::size_t i) const { return s0 + static_cast<double>(i) * h; }
    double s_end() const { return s(n - 1); }
};

// Curvature data on a grid. Channels are parallel arrays of length grid.n;
// an empty vector means "not filled". Samples where the Frenet frame is
// undefined carry NaN in theta, tau and their derivatives, with
// frenet_defined[i] == 0.
struct CurvatureProfile {
    Grid grid;
    Provenance provenance = Provenance::prescribed;

    std::vector<double> k1, k2;          // parallel-transport curvatures
    std::vector<double> k1p, k1pp;       // d/ds, d2/ds2 of k1
    std::vector<double> k2p, k2pp;

    std::vector<double> kappa, tau, theta;
    std::vector<double> kappap, kappapp, taup;
    std::vector<char> frenet_defined;

    bool has_bishop() const { return k1.size() == grid.n && k2.size() == grid.n; }
    bool has_bishop_derivatives() const {
        return k1p.size() == grid.n && k1pp.size() == grid.n && k2p.size() == grid.n &&
               k2pp.size() == grid.n;
    }
    bool has_frenet() const { return kappa.size() == grid.n && tau.size() == grid.n; }
    bool has_frenet_derivatives() const {
        return kappap.size() == grid.n && kappapp.size() == grid.n && taup.size() == grid.n;
    }
};

// Stencil spacing for differentiating a profile's value channels. Channels
// measured from a sampled curve carry rounding-scale noise a ~ eps/h^2 from
// the point-derivative step; differentiating them again on the raw grid
// amplifies that by 1/h^m, so measured profiles widen the stencil to an
// effective spacing near kStrideTarget (truncation there is (stride*h)^4,
// still far below classification tolerances). Exact prescribed values have
// no such noise and keep the raw grid.
inline constexpr double kStrideTarget = 0.02;

inline int derivative_stride(const Grid& grid, Provenance provenance) {
    if (provenance != Provenance::measured) return 1;
    if (!(grid.h > 0.0) || grid.n < 2) return 1;
    const double ideal = kStrideTarget / grid.h;
    const double cap = static_cast<double>(grid.n - 1) / 8.0;
    return std::max(1, static_cast<int>(std::lround(std::min(ideal, cap))));
}

// Fill k1', k1'', k2', k2'' by finite differences where missing.
inline void fill_bishop_derivatives(CurvatureProfile& p, int stride = 1) {
    if (!p.has_bishop()) throw IncompleteProfile("bishop channels k1, k2 are required");
    if (p.has_bishop_derivatives()) return;
    p.k1p = differentiate_strided<double>(p.k1, p.grid.h, 1, stride);
    p.k1pp = differentiate_strided<double>(p.k1, p.grid.h, 2, stride);
    p.k2p = differentiate_strided<double>(p.k2, p.grid.h, 1, stride);
    p.k2pp = differentiate_strided<double>(p.k2, p.grid.h, 2, stride);
}

// Fill kappa', kappa'' and tau' by finite differences where missing. tau may
// contain NaN at undefined samples; tau' stays NaN wherever its stencil
// touches one.
inline void fill_frenet_derivatives(CurvatureProfile& p, int stride = 1) {
    if (!p.has_frenet()) throw IncompleteProfile("frenet channels kappa, tau are required");
    if (p.has_frenet_derivatives()) return;
    p.kappap = differentiate_strided<double>(p.kappa, p.grid.h, 1, stride);
    p.kappapp = differentiate_strided<double>(p.kappa, p.grid.h, 2, stride);
    std::vector<char> ok(p.grid.n);
    for (std::size_t i = 0; i < p.grid.n; ++i) ok[i] = std::isfinite(p.tau[i]) ? 1 : 0;
    p.taup = differentiate_where(p.tau, ok, p.grid.h, 1, stride);
}

}  // namespace curveframe
