#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <curveframe/cubic_spline.hpp>
#include <curveframe/errors.hpp>
#include <curveframe/expression.hpp>

using namespace curveframe;

TEST_CASE("basic evaluation", "[expression]") {
    CHECK(ScalarFunction::parse("1/(s+1)")(1.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(ScalarFunction::parse("sin(s)^2 + cos(s)^2")(0.37) ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK(ScalarFunction::parse("1 + 2*3")(0.0) == Catch::Approx(7.0));
    CHECK(ScalarFunction::parse("(1 + 2)*3")(0.0) == Catch::Approx(9.0));
    CHECK(ScalarFunction::parse("2e-1 + .5")(0.0) == Catch::Approx(0.7));
}

TEST_CASE("power binds tighter than unary minus and associates right", "[expression]") {
    CHECK(ScalarFunction::parse("-2^2")(0.0) == Catch::Approx(-4.0));
    CHECK(ScalarFunction::parse("2^-3")(0.0) == Catch::Approx(0.125));
    CHECK(ScalarFunction::parse("2^3^2")(0.0) == Catch::Approx(512.0));
    CHECK(ScalarFunction::parse("-s")(3.0) == Catch::Approx(-3.0));
}

TEST_CASE("all builtin functions evaluate", "[expression]") {
    const double s = 0.83;
    CHECK(ScalarFunction::parse("sin(s)")(s) == Catch::Approx(std::sin(s)));
    CHECK(ScalarFunction::parse("cos(s)")(s) == Catch::Approx(std::cos(s)));
    CHECK(ScalarFunction::parse("tan(s)")(s) == Catch::Approx(std::tan(s)));
    CHECK(ScalarFunction::parse("atan(s)")(s) == Catch::Approx(std::atan(s)));
    CHECK(ScalarFunction::parse("sqrt(s)")(s) == Catch::Approx(std::sqrt(s)));
    CHECK(ScalarFunction::parse("exp(s)")(s) == Catch::Approx(std::exp(s)));
    CHECK(ScalarFunction::parse("log(s)")(s) == Catch::Approx(std::log(s)));
    CHECK(ScalarFunction::parse("abs(0-s)")(s) == Catch::Approx(s));
}

TEST_CASE("syntax errors carry byte offsets", "[expression]") {
    try {
        ScalarFunction::parse("1/(s+");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 5);
    }
    CHECK_THROWS_AS(ScalarFunction::parse("bogus(s)"), ParseError);
    CHECK_THROWS_AS(ScalarFunction::parse("1 + "), ParseError);
    CHECK_THROWS_AS(ScalarFunction::parse("sin s"), ParseError);
    CHECK_THROWS_AS(ScalarFunction::parse("2 2"), ParseError);
    CHECK_THROWS_AS(ScalarFunction::parse(""), ParseError);
}

TEST_CASE("domain failures surface at evaluation time", "[expression]") {
    auto inv = ScalarFunction::parse("1/s");
    CHECK(inv(2.0) == Catch::Approx(0.5));
    CHECK_THROWS_AS(inv(0.0), EvaluationError);
    CHECK_THROWS_AS(ScalarFunction::parse("log(s)")(-1.0), EvaluationError);
    CHECK_THROWS_AS(ScalarFunction::parse("log(s)")(0.0), EvaluationError);
    CHECK_THROWS_AS(ScalarFunction::parse("sqrt(0-s)")(4.0), EvaluationError);
    try {
        inv(0.0);
    } catch (const EvaluationError& e) {
        CHECK(e.where() == 0.0);
    }
}

TEST_CASE("print/parse round-trip is evaluation-identical", "[expression]") {
    const std::vector<std::string> exprs = {
        "1/(s+1)",
        "sin(s)^2 + cos(s)^2 - exp(-s/3)",
        "-2^2 + s*atan(s) - sqrt(s+11)/(s^2+1)",
        "abs(s-5) * log(s+12) + tan(s/20)",
    };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (const auto& text : exprs) {
        auto f = ScalarFunction::parse(text);
        auto g = ScalarFunction::parse(f.text());
        for (int i = 0; i < 100; ++i) {
            const double s = u(rng);
            CHECK(f(s) == g(s));  // bit-identical by construction
        }
    }
}

TEST_CASE("constant functions", "[expression]") {
    auto c = ScalarFunction::constant(2.5);
    CHECK(c(0.0) == 2.5);
    CHECK(c(100.0) == 2.5);
    CHECK(!c.is_tabulated());
    CHECK(!c.interpolant_derivative(1.0, 1).has_value());
    // text() must re-parse to the same value
    CHECK(ScalarFunction::parse(c.text())(3.0) == 2.5);
}

TEST_CASE("tabulated functions interpolate and differentiate analytically", "[expression]") {
    std::vector<double> s, v;
    for (int i = 0; i <= 40; ++i) {
        s.push_back(0.1 * i);
        v.push_back(std::sin(s.back()));
    }
    auto f = ScalarFunction::tabulated(s, v);
    CHECK(f.is_tabulated());
    CHECK(f(1.23) == Catch::Approx(std::sin(1.23)).margin(1e-5));
    auto d1 = f.interpolant_derivative(1.23, 1);
    auto d2 = f.interpolant_derivative(1.23, 2);
    REQUIRE(d1.has_value());
    REQUIRE(d2.has_value());
    CHECK(*d1 == Catch::Approx(std::cos(1.23)).margin(1e-4));
    CHECK(*d2 == Catch::Approx(-std::sin(1.23)).margin(1e-2));
    CHECK_THROWS_AS(f.interpolant_derivative(1.0, 3), InvalidOrder);

    // The interpolant's own derivative must match the spline it is built on.
    CubicSpline sp(s, v);
    CHECK(*d1 == Catch::Approx(sp.deriv(1.23)).margin(1e-14));
}

TEST_CASE("evaluation is deterministic", "[expression]") {
    auto f = ScalarFunction::parse("sin(s)*exp(-s/7) + s^3/90");
    for (double s : {0.1, 2.7, 9.9}) CHECK(f(s) == f(s));
}
