#include <doctest.h>

#include <cmath>
#include <random>

#include "qsp/exceptions.hpp"
#include "qsp/timefn.hpp"

using namespace qsp;

TEST_CASE("parsing and arithmetic") {
    CHECK(TimeFunction::parse("0.5")(3.7) == 0.5);
    CHECK(TimeFunction::parse("1/(1+t)")(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(TimeFunction::parse("0.5*(1+exp(-t))")(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(TimeFunction::parse("2*t-3")(2.0) == doctest::Approx(1.0));
    CHECK(TimeFunction::parse("-t")(2.0) == -2.0);
    CHECK(TimeFunction::parse("min(t, 2)")(5.0) == 2.0);
    CHECK(TimeFunction::parse("max(sin(t), cos(t))")(0.0) == 1.0);
    CHECK(TimeFunction::parse(" 1 + 2 * 3 ")(0.0) == 7.0);
    CHECK(TimeFunction::parse("2*3+1")(0.0) == 7.0);
    CHECK(TimeFunction::parse("1-2-3")(0.0) == -4.0);  // left associative
    CHECK(TimeFunction::parse("12/4/3")(0.0) == 1.0);
}

TEST_CASE("analytic constructors") {
    CHECK(TimeFunction::constant(0.4)(100.0) == 0.4);
    CHECK(TimeFunction::affine(1.0, 2.0)(3.0) == 7.0);
    CHECK(TimeFunction::exponential(0.0, 1.0, -1.0)(std::log(2.0)) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(TimeFunction::reciprocal(1.0, 1.0)(3.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(TimeFunction::periodic(1.0, 2.0, 1.0, 0.0)(std::asin(1.0)) ==
          doctest::Approx(3.0).epsilon(1e-12));

    const TimeFunction pw = TimeFunction::piecewise_constant({1.0, 2.0}, {5.0, 6.0, 7.0});
    CHECK(pw(0.5) == 5.0);
    CHECK(pw(1.0) == 6.0);
    CHECK(pw(1.5) == 6.0);
    CHECK(pw(2.0) == 7.0);
    CHECK(pw(10.0) == 7.0);
    CHECK_THROWS_AS(TimeFunction::piecewise_constant({2.0, 1.0}, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::piecewise_constant({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("evaluation errors carry the time and the subexpression") {
    const TimeFunction f = TimeFunction::parse("1/(t-1)");
    try {
        f(1.0);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.t() == 1.0);
        CHECK(e.subexpression().find("/") != std::string::npos);
    }
    CHECK_THROWS_AS(TimeFunction::parse("exp(1000)")(0.0), EvalError);
    CHECK(TimeFunction::parse("1/(t-1)")(3.0) == 0.5);
}

TEST_CASE("parser failure corpus") {
    for (const char* bad : {"", "0.5*(", "1+", "x", "foo(1)", "min(1)", "sin(1,2)", "1 2", "(1))", "t t",
                            ")", "( )", "1..2", "min(1 2)"}) {
        CHECK_THROWS_AS(TimeFunction::parse(bad), ParseError);
    }
    try {
        TimeFunction::parse("0.5*(");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() >= 4);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
    try {
        TimeFunction::parse("1 + psi");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("psi") != std::string::npos);
    }
}

TEST_CASE("pretty-print reparses to an equivalent function") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    for (const char* expr : {"0.4+0.2*sin(t)", "1/(1+t)", "0.5*(1+exp(-t))", "min(t,max(1-t,cos(2*t)))",
                             "-(t-3)/(t+4)", "exp(-0.5*t)*sin(3*t+1)+2"}) {
        const TimeFunction f = TimeFunction::parse(expr);
        const TimeFunction g = TimeFunction::parse(f.to_string());
        for (int trial = 0; trial < 100; ++trial) {
            const double t = dist(gen);
            CHECK(std::abs(f(t) - g(t)) <= 1e-15);
        }
    }
}

TEST_CASE("evaluation is pure") {
    const TimeFunction f = TimeFunction::parse("exp(-0.3*t)*sin(t)+1/(2+t)");
    const double a = f(1.234567);
    for (int i = 0; i < 10; ++i) CHECK(f(1.234567) == a);
}

TEST_CASE("sampled claims") {
    const TimeFunction decay = TimeFunction::parse("exp(-t)");
    CHECK(validate_claim(decay, {ClaimKind::Decreasing, 10.0, 1000}).ok);
    CHECK(validate_claim(decay, {ClaimKind::Positive, 10.0, 1000}).ok);

    const TimeFunction wave = TimeFunction::parse("0.5+0.4*sin(t)");
    const ClaimResult r = validate_claim(wave, {ClaimKind::Decreasing, 10.0, 1000});
    CHECK_FALSE(r.ok);
    CHECK(r.counterexample_t > 0.0);
    CHECK(wave(r.counterexample_t) == r.value);

    const TimeFunction recip = TimeFunction::parse("1/(1+t)");
    CHECK(validate_claim(recip, {ClaimKind::Positive, 10.0, 1000}).ok);
    CHECK(validate_claim(recip, {ClaimKind::InUnitInterval, 10.0, 1000}).ok);
    CHECK(validate_claim(TimeFunction::parse("t"), {ClaimKind::Increasing, 10.0, 64}).ok);
    CHECK_FALSE(validate_claim(TimeFunction::parse("1+t"), {ClaimKind::InUnitInterval, 10.0, 64}).ok);

    CHECK_THROWS_AS(validate_claim(decay, {ClaimKind::Positive, 10.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(validate_claim(decay, {ClaimKind::Positive, 0.0, 10}), std::invalid_argument);
}
