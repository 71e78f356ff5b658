#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <curveframe/curve.hpp>
#include <curveframe/errors.hpp>

#include "test_util.hpp"

using namespace curveframe;

namespace {

// Quarter unit circle at 100 nonuniform angles, endpoints included.
std::vector<Vec3> quarter_circle_cloud() {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> t{0.0, 1.0};
    for (int i = 0; i < 98; ++i) t.push_back(u(rng));
    std::sort(t.begin(), t.end());
    std::vector<Vec3> pts;
    for (double x : t) {
        const double ang = x * std::numbers::pi / 2.0;
        pts.push_back({std::cos(ang), std::sin(ang), 0.0});
    }
    return pts;
}

}  // namespace

TEST_CASE("straight segment resamples to the equal subdivision", "[curve]") {
    std::vector<Vec3> pts = {{0, 0, 0}, {2, 0, 0}};
    auto c = resample_arclength(pts, 3);
    REQUIRE(c.size() == 3);
    CHECK(c.h == Catch::Approx(1.0).margin(1e-12));
    CHECK(distance(c.points[0], {0, 0, 0}) < 1e-12);
    CHECK(distance(c.points[1], {1, 0, 0}) < 1e-12);
    CHECK(distance(c.points[2], {2, 0, 0}) < 1e-12);
}

TEST_CASE("quarter circle resamples to equal chords and correct length", "[curve]") {
    auto c = resample_arclength(quarter_circle_cloud(), 50);
    double dmin = 1e300, dmax = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double d = distance(c.points[i], c.points[i + 1]);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    CHECK((dmax - dmin) / dmax < 1e-6);
    CHECK(c.length() == Catch::Approx(std::numbers::pi / 2.0).epsilon(1e-6));
    // Resampled points should still sit on the unit circle.
    for (const auto& p : c.points) CHECK(p.norm() == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("declared length matches an independent fine chord sum", "[curve]") {
    auto pts = quarter_circle_cloud();
    auto c = resample_arclength(pts, 513);
    // Independent oracle: arc length of the same interpolation model measured
    // by a very fine resample's chord sum.
    auto fine = resample_arclength(pts, 200001);
    double chord = 0.0;
    for (std::size_t i = 0; i + 1 < fine.size(); ++i)
        chord += distance(fine.points[i], fine.points[i + 1]);
    CHECK(c.length() == Catch::Approx(chord).epsilon(1e-9));
}

TEST_CASE("resampling its own output is idempotent", "[curve]") {
    auto c = resample_arclength(quarter_circle_cloud(), 200);
    auto c2 = resample_arclength(c.points, 200);
    double move = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        move = std::max(move, distance(c.points[i], c2.points[i]));
    CHECK(move < 1e-9);
}

TEST_CASE("resample rejects degenerate inputs", "[curve]") {
    std::vector<Vec3> one = {{0, 0, 0}};
    CHECK_THROWS_AS(resample_arclength(one, 5), DegenerateInput);
    std::vector<Vec3> dup = {{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    CHECK_THROWS_AS(resample_arclength(dup, 5), DegenerateInput);
    std::vector<Vec3> two = {{0, 0, 0}, {1, 1, 0}};
    CHECK_THROWS_AS(resample_arclength(two, 1), DegenerateInput);
}

TEST_CASE("derivatives of a line are exact", "[curve]") {
    auto c = testutil::line_samples({1, 2, 3}, {0.6, 0.8, 0.0}, 0.0, 5.0, 101);
    auto d = derivatives(c, 2);
    REQUIRE(d.size() == 2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(distance(d[0][i], {0.6, 0.8, 0.0}) < 1e-12);
        CHECK(d[1][i].norm() < 1e-11);
    }
}

TEST_CASE("derivatives match analytic ones on a polynomial curve", "[curve]") {
    // Componentwise polynomials of degree <= 4, h = 1e-2: stencils are exact,
    // only rounding remains.
    const double h = 1e-2;
    const std::size_t n = 301;
    CurveSamples c;
    c.s0 = -1.5;
    c.h = h;
    auto f = [](double s) {
        return Vec3{((0.2 * s - 0.5) * s + 1.0) * s * s - 2.0 * s,
                    (s - 1.0) * (s + 2.0) * s,
                    0.1 * s * s * s * s - s};
    };
    for (std::size_t i = 0; i < n; ++i) c.points.push_back(f(c.s(i)));
    auto d = derivatives(c, 4);
    REQUIRE(d.size() == 4);
    auto d1 = [](double s) {
        return Vec3{((0.8 * s - 1.5) * s + 2.0) * s - 2.0, (3.0 * s + 2.0) * s - 2.0,
                    0.4 * s * s * s - 1.0};
    };
    auto d2 = [](double s) {
        return Vec3{(2.4 * s - 3.0) * s + 2.0, 6.0 * s + 2.0, 1.2 * s * s};
    };
    auto d3 = [](double s) { return Vec3{4.8 * s - 3.0, 6.0, 2.4 * s}; };
    auto d4 = [](double) { return Vec3{4.8, 0.0, 2.4}; };
    double worst[4] = {0, 0, 0, 0};
    for (std::size_t i = 4; i + 4 < n; ++i) {
        const double s = c.s(i);
        worst[0] = std::max(worst[0], distance(d[0][i], d1(s)));
        worst[1] = std::max(worst[1], distance(d[1][i], d2(s)));
        worst[2] = std::max(worst[2], distance(d[2][i], d3(s)));
        worst[3] = std::max(worst[3], distance(d[3][i], d4(s)));
    }
    for (int m = 0; m < 4; ++m) {
        INFO("order " << m + 1);
        // rounding amplified by 1/h^m dominates; loosen for the top order
        CHECK(worst[m] < (m < 3 ? 1e-7 : 1e-5));
    }
}

TEST_CASE("unit-speed property survives resampling", "[curve]") {
    auto c = resample_arclength(quarter_circle_cloud(), 80);
    auto d = derivatives(c, 1);
    for (std::size_t i = 4; i + 4 < c.size(); ++i)
        CHECK(d[0][i].norm() == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("derivatives validates order and sample count", "[curve]") {
    auto c = testutil::line_samples({0, 0, 0}, {1, 0, 0}, 0.0, 1.0, 21);
    CHECK_THROWS_AS(derivatives(c, 5), InvalidOrder);
    CHECK_THROWS_AS(derivatives(c, 0), InvalidOrder);
    auto tiny = testutil::line_samples({0, 0, 0}, {1, 0, 0}, 0.0, 1.0, 5);
    CHECK_THROWS_AS(derivatives(tiny, 3), InsufficientSamples);
}
