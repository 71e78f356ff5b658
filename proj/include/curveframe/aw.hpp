#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curveframe/errors.hpp"
#include "curveframe/frames.hpp"
#include "curveframe/profile.hpp"

namespace curveframe {

// A vector in the normal plane: a*M1 + b*M2 (parallel-transport basis) or
// a*N + b*B (Frenet basis).
struct PlaneVec {
    double a = 0.0;
    double b = 0.0;
};

inline double dot(const PlaneVec& u, const PlaneVec& v) { return u.a * v.a + u.b * v.b; }
inline double norm(const PlaneVec& v) { return std::hypot(v.a, v.b); }
// Scalar cross product; zero iff u and v are parallel.
inline double cross(const PlaneVec& u, const PlaneVec& v) { return u.a * v.b - u.b * v.a; }

// Normal-plane projections of T', T'', T''' built from the curvature pair.
struct NChain {
    std::vector<PlaneVec> n1, n2, n3;

    std::size_t size() const { return n1.size(); }
};

// The third-chain cross term k1^2*k2 follows from expanding the third
// derivative; "k1_cubed" reproduces a printed variant that uses k1^3 instead
// and is kept only for comparison.
enum class CrossTermConvention { consistent, k1_cubed };

inline NChain bishop_n_chain(const CurvatureProfile& p,
                             CrossTermConvention convention = CrossTermConvention::consistent) {
    if (!p.has_bishop()) throw IncompleteProfile("bishop channels k1, k2 are required");
    if (!p.has_bishop_derivatives())
        throw IncompleteProfile("bishop derivative channels are required");
    const std::size_t n = p.grid.n;
    NChain c;
    c.n1.resize(n);
    c.n2.resize(n);
    c.n3.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = p.k1[i], k2 = p.k2[i];
        c.n1[i] = {k1, k2};
        c.n2[i] = {p.k1p[i], p.k2p[i]};
        const double cross_term =
            convention == CrossTermConvention::consistent ? k1 * k1 * k2 : k1 * k1 * k1;
        c.n3[i] = {p.k1pp[i] - k1 * k1 * k1 - k1 * k2 * k2, p.k2pp[i] - k2 * k2 * k2 - cross_term};
    }
    return c;
}

// Frenet-side chain in the (N, B) basis. Samples where the Frenet frame is
// undefined (kappa <= kappa_min, or NaN torsion data) are zero-filled and
// reported through `valid`.
struct FrenetChain {
    NChain chain;
    std::vector<char> valid;
    std::size_t valid_count = 0;
};

inline FrenetChain frenet_n_chain(const CurvatureProfile& p, double kappa_min = 1e-8) {
    if (!p.has_frenet()) throw IncompleteProfile("frenet channels kappa, tau are required");
    if (!p.has_frenet_derivatives())
        throw IncompleteProfile("frenet derivative channels are required");
    const std::size_t n = p.grid.n;
    FrenetChain f;
    f.chain.n1.assign(n, {});
    f.chain.n2.assign(n, {});
    f.chain.n3.assign(n, {});
    f.valid.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double kappa = p.kappa[i], tau = p.tau[i], taup = p.taup[i];
        if (!(kappa > kappa_min) || !std::isfinite(tau) || !std::isfinite(taup)) continue;
        const double kp = p.kappap[i], kpp = p.kappapp[i];
        f.chain.n1[i] = {kappa, 0.0};
        f.chain.n2[i] = {kp, kappa * tau};
        f.chain.n3[i] = {kpp - kappa * kappa * kappa - kappa * tau * tau,
                         2.0 * kp * tau + kappa * taup};
        f.valid[i] = 1;
        ++f.valid_count;
    }
    return f;
}

// Gram-Schmidt pair in the normal plane. n1s is the normalized first chain
// vector; n2s the normalized rejection of the second from it. Either may be
// unavailable (norm below eps), signalled by the has_* flags.
struct StarField {
    std::vector<PlaneVec> n1s, n2s;
    std::vector<char> has_n1s, has_n2s;
};

inline StarField gram_schmidt_star(std::span<const PlaneVec> n1, std::span<const PlaneVec> n2,
                                   double eps = 1e-10) {
    const std::size_t n = n1.size();
    if (n2.size() != n) throw DegenerateInput("chain length mismatch");
    StarField s;
    s.n1s.assign(n, {});
    s.n2s.assign(n, {});
    s.has_n1s.assign(n, 0);
    s.has_n2s.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        PlaneVec rejection = n2[i];
        const double m1 = norm(n1[i]);
        if (m1 > eps) {
            s.n1s[i] = {n1[i].a / m1, n1[i].b / m1};
            s.has_n1s[i] = 1;
            const double along = dot(n2[i], s.n1s[i]);
            rejection = {n2[i].a - along * s.n1s[i].a, n2[i].b - along * s.n1s[i].b};
        }
        const double m2 = norm(rejection);
        if (m2 > eps) {
            s.n2s[i] = {rejection.a / m2, rejection.b / m2};
            s.has_n2s[i] = 1;
        }
    }
    return s;
}

// Per-sample residual data for one condition. `normalized` divides the raw
// defect by (|N3| + |N1|^3 + eps_norm) at the sample; `evaluated` marks
// samples that entered the battery at all, `degenerate` those where a
// fallback policy decided the value (unset star treated as zero projection,
// or a vanishing chain vector making the condition vacuous).
struct ConditionField {
    std::vector<double> raw, normalized;
    std::vector<char> evaluated, degenerate;
};

struct ResidualBattery {
    ConditionField weak_aw2, weak_aw3, aw1, aw2, aw3;
};

struct ResidualOptions {
    double eps_gs = 1e-10;
    double eps_norm = 1e-12;
    double kappa_min = 1e-8;
    CrossTermConvention cross_term = CrossTermConvention::consistent;
};

namespace aw_detail {

inline void init(ConditionField& f, std::size_t n) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    f.raw.assign(n, nan);
    f.normalized.assign(n, nan);
    f.evaluated.assign(n, 0);
    f.degenerate.assign(n, 0);
}

// Norm of v minus its projection on the unit vector u; with u unavailable
// the projection is taken as zero, leaving |v| (caller flags degeneracy).
inline double rejection_norm(const PlaneVec& v, const PlaneVec& u, bool has_u) {
    if (!has_u) return norm(v);
    const double along = dot(v, u);
    return norm({v.a - along * u.a, v.b - along * u.b});
}

}  // namespace aw_detail

inline ResidualBattery bishop_aw_residuals(const CurvatureProfile& p,
                                           const ResidualOptions& options = {}) {
    const NChain chain = bishop_n_chain(p, options.cross_term);
    const StarField stars = gram_schmidt_star(chain.n1, chain.n2, options.eps_gs);
    const std::size_t n = chain.size();

    ResidualBattery battery;
    aw_detail::init(battery.weak_aw2, n);
    aw_detail::init(battery.weak_aw3, n);
    aw_detail::init(battery.aw1, n);
    aw_detail::init(battery.aw2, n);
    aw_detail::init(battery.aw3, n);

    for (std::size_t i = 0; i < n; ++i) {
        const PlaneVec& n1 = chain.n1[i];
        const PlaneVec& n2 = chain.n2[i];
        const PlaneVec& n3 = chain.n3[i];
        const double scale = norm(n3) + std::pow(norm(n1), 3) + options.eps_norm;

        auto set = [&](ConditionField& f, double raw, bool degenerate) {
            f.raw[i] = raw;
            f.normalized[i] = raw / scale;
            f.evaluated[i] = 1;
            f.degenerate[i] = degenerate ? 1 : 0;
        };

        set(battery.aw1, std::max(std::abs(n3.a), std::abs(n3.b)), false);
        set(battery.aw2, std::abs(cross(n2, n3)), norm(n2) <= options.eps_gs);
        set(battery.aw3, std::abs(cross(n1, n3)), norm(n1) <= options.eps_gs);
        set(battery.weak_aw2, aw_detail::rejection_norm(n3, stars.n2s[i], stars.has_n2s[i] != 0),
            stars.has_n2s[i] == 0);
        set(battery.weak_aw3, aw_detail::rejection_norm(n3, stars.n1s[i], stars.has_n1s[i] != 0),
            stars.has_n1s[i] == 0);
    }
    return battery;
}

inline ResidualBattery frenet_aw_residuals(const CurvatureProfile& p,
                                           const ResidualOptions& options = {}) {
    const FrenetChain fc = frenet_n_chain(p, options.kappa_min);
    if (fc.valid_count == 0)
        throw NoValidSamples("frenet frame undefined at every sample");
    const StarField stars = gram_schmidt_star(fc.chain.n1, fc.chain.n2, options.eps_gs);
    const std::size_t n = fc.chain.size();

    ResidualBattery battery;
    aw_detail::init(battery.weak_aw2, n);
    aw_detail::init(battery.weak_aw3, n);
    aw_detail::init(battery.aw1, n);
    aw_detail::init(battery.aw2, n);
    aw_detail::init(battery.aw3, n);

    for (std::size_t i = 0; i < n; ++i) {
        if (!fc.valid[i]) continue;
        const double kappa = p.kappa[i], kp = p.kappap[i], kpp = p.kappapp[i];
        const double tau = p.tau[i], taup = p.taup[i];
        const PlaneVec& n1 = fc.chain.n1[i];
        const PlaneVec& n2 = fc.chain.n2[i];
        const PlaneVec& n3 = fc.chain.n3[i];
        const double scale = norm(n3) + std::pow(norm(n1), 3) + options.eps_norm;

        auto set = [&](ConditionField& f, double raw, bool degenerate) {
            f.raw[i] = raw;
            f.normalized[i] = raw / scale;
            f.evaluated[i] = 1;
            f.degenerate[i] = degenerate ? 1 : 0;
        };

        const double weak2 = std::abs(kpp - kappa * kappa * kappa - kappa * tau * tau);
        const double aw3 = std::abs(2.0 * kp * tau + kappa * taup);
        set(battery.weak_aw2, weak2, stars.has_n2s[i] == 0);
        set(battery.aw3, aw3, norm(n1) <= options.eps_gs);
        set(battery.aw1, std::max(weak2, aw3), false);
        set(battery.aw2,
            std::abs(2.0 * kp * kp * tau + kappa * kp * taup - kappa * kpp * tau +
                     kappa * kappa * kappa * kappa * tau + kappa * kappa * tau * tau * tau),
            norm(n2) <= options.eps_gs);
        set(battery.weak_aw3, aw_detail::rejection_norm(n3, stars.n1s[i], stars.has_n1s[i] != 0),
            stars.has_n1s[i] == 0);
    }
    return battery;
}

// Three normal-plane vectors can never span 3 dimensions; kept as an honest
// rank computation (singular values of the stacked 3x2 matrix) so the claim
// is checked rather than assumed.
inline std::vector<char> dependence_check(const NChain& chain, double sv_threshold = 1e-10) {
    const std::size_t n = chain.size();
    std::vector<char> dependent(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const PlaneVec r[3] = {chain.n1[i], chain.n2[i], chain.n3[i]};
        // Gram matrix of the two columns.
        double p = 0.0, q = 0.0, r22 = 0.0;
        for (const auto& v : r) {
            p += v.a * v.a;
            q += v.a * v.b;
            r22 += v.b * v.b;
        }
        const double mean = 0.5 * (p + r22);
        const double disc = std::sqrt(std::max(0.0, 0.25 * (p - r22) * (p - r22) + q * q));
        const double sv1 = std::sqrt(std::max(0.0, mean + disc));
        const double sv2 = std::sqrt(std::max(0.0, mean - disc));
        int rank = 0;
        if (sv1 > sv_threshold) ++rank;
        if (sv2 > sv_threshold) ++rank;
        dependent[i] = rank < 3 ? 1 : 0;
    }
    return dependent;
}

inline constexpr std::string_view kConditionNames[10] = {
    "frenet-weak-aw2", "frenet-weak-aw3", "frenet-aw1", "frenet-aw2", "frenet-aw3",
    "bishop-weak-aw2", "bishop-weak-aw3", "bishop-aw1", "bishop-aw2", "bishop-aw3"};

struct AwReport {
    struct Condition {
        std::string name;
        double residual = std::numeric_limits<double>::quiet_NaN();  // sup of normalized
        bool verdict = false;
        bool degenerate = false;
        std::size_t evaluated_samples = 0;
    };

    std::vector<Condition> conditions;  // fixed order of kConditionNames
    double tol = 0.0;
    double kappa_min = 0.0;
    std::size_t trim_first = 0, trim_last = 0;  // inclusive sample range
    double s_first = 0.0, s_last = 0.0;
    Provenance provenance = Provenance::prescribed;

    const Condition* find(std::string_view name) const {
        for (const auto& c : conditions)
            if (c.name == name) return &c;
        return nullptr;
    }
};

struct ClassifyOptions {
    std::optional<double> tol;  // default 1e-6 for prescribed, 1e-3 for measured
    double kappa_min = 1e-8;
    std::size_t trim = 4;
    double eps_gs = 1e-10;
    double eps_norm = 1e-12;
    CrossTermConvention cross_term = CrossTermConvention::consistent;
};

namespace aw_detail {

inline AwReport::Condition summarize(std::string_view name, const ConditionField& f,
                                     std::size_t lo, std::size_t hi, double tol) {
    AwReport::Condition c;
    c.name = std::string(name);
    double sup = -1.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (!f.evaluated[i]) continue;
        ++c.evaluated_samples;
        if (f.degenerate[i]) c.degenerate = true;
        sup = std::max(sup, f.normalized[i]);
    }
    if (c.evaluated_samples == 0) {
        c.degenerate = true;
        return c;  // residual NaN, verdict false
    }
    c.residual = sup;
    c.verdict = sup < tol;
    return c;
}

}  // namespace aw_detail

// Fill whatever a profile is missing: bishop derivative channels by finite
// differences, Frenet channels recovered from the parallel-transport pair.
inline CurvatureProfile complete_profile(CurvatureProfile p, double kappa_min = 1e-8) {
    if (!p.has_bishop()) throw IncompleteProfile("bishop channels k1, k2 are required");
    const int stride = derivative_stride(p.grid, p.provenance);
    fill_bishop_derivatives(p, stride);
    if (!p.has_frenet()) p = bishop_to_frenet(std::move(p), kappa_min, stride);
    fill_frenet_derivatives(p, stride);
    return p;
}

// Run both residual batteries over the trimmed interior and summarize.
inline AwReport classify(const CurvatureProfile& profile, const ClassifyOptions& options = {}) {
    CurvatureProfile p = complete_profile(profile, options.kappa_min);

    const std::size_t n = p.grid.n;
    if (n < 2 * options.trim + 1)
        throw InsufficientSamples("profile shorter than twice the trim margin");
    const std::size_t lo = options.trim;
    const std::size_t hi = n - 1 - options.trim;

    AwReport report;
    report.tol = options.tol.value_or(p.provenance == Provenance::prescribed ? 1e-6 : 1e-3);
    report.kappa_min = options.kappa_min;
    report.trim_first = lo;
    report.trim_last = hi;
    report.s_first = p.grid.s(lo);
    report.s_last = p.grid.s(hi);
    report.provenance = p.provenance;

    ResidualOptions ropt;
    ropt.eps_gs = options.eps_gs;
    ropt.eps_norm = options.eps_norm;
    ropt.kappa_min = options.kappa_min;
    ropt.cross_term = options.cross_term;

    ResidualBattery frenet;
    bool have_frenet = true;
    try {
        frenet = frenet_aw_residuals(p, ropt);
    } catch (const NoValidSamples&) {
        have_frenet = false;
    }
    const ResidualBattery bishop = bishop_aw_residuals(p, ropt);

    const double tol = report.tol;
    auto add = [&](std::string_view name, const ConditionField* f) {
        if (f == nullptr) {
            AwReport::Condition c;
            c.name = std::string(name);
            c.degenerate = true;
            report.conditions.push_back(std::move(c));
        } else {
            report.conditions.push_back(aw_detail::summarize(name, *f, lo, hi, tol));
        }
    };

    add(kConditionNames[0], have_frenet ? &frenet.weak_aw2 : nullptr);
    add(kConditionNames[1], have_frenet ? &frenet.weak_aw3 : nullptr);
    add(kConditionNames[2], have_frenet ? &frenet.aw1 : nullptr);
    add(kConditionNames[3], have_frenet ? &frenet.aw2 : nullptr);
    add(kConditionNames[4], have_frenet ? &frenet.aw3 : nullptr);
    add(kConditionNames[5], &bishop.weak_aw2);
    add(kConditionNames[6], &bishop.weak_aw3);
    add(kConditionNames[7], &bishop.aw1);
    add(kConditionNames[8], &bishop.aw2);
    add(kConditionNames[9], &bishop.aw3);

    // Hierarchy: a true aw1 verdict (third chain vector vanishing) satisfies
    // every other condition on the same side identically.
    auto propagate = [&](std::size_t aw1_index, std::initializer_list<std::size_t> others) {
        if (!report.conditions[aw1_index].verdict) return;
        for (std::size_t j : others) report.conditions[j].verdict = true;
    };
    propagate(2, {0, 1, 3, 4});
    propagate(7, {5, 6, 8, 9});
    return report;
}

inline AwReport classify(const CurveSamples& curve, const ClassifyOptions& options = {},
                         std::optional<Vec3> initial_normal = std::nullopt) {
    FrameOptions fopt;
    fopt.kappa_min = options.kappa_min;
    return classify(measure_profile(curve, initial_normal, fopt), options);
}

}  // namespace curveframe
