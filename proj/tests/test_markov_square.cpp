#include <doctest.h>

#include <cmath>

#include "qsp/exceptions.hpp"
#include "qsp/markov_square.hpp"

using namespace qsp;

namespace {
const TimeFunction kDecay = TimeFunction::parse("exp(-t)");
const TimeFunction kWave = TimeFunction::parse("0.4+0.2*sin(t)");
}  // namespace

TEST_CASE("q2 matches its closed form") {
    const SquareProcessFamily f = q2(kDecay);
    const SquareMatrix u = f(0.0, std::log(2.0));
    CHECK(u(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(u(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u(1, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("q3 is the identity before its cutoff") {
    const SquareProcessFamily f = q3(1.0);
    CHECK(max_abs_diff(f(0.0, 0.5), SquareMatrix::identity(2)) == 0.0);
    const SquareMatrix after = f(0.0, 1.0);  // branch closed at the cutoff
    CHECK(after(0, 0) == 0.5);
}

TEST_CASE("q6 tends to the identity as t -> s") {
    const SquareProcessFamily f = q6(2.0, 0.5, kDecay);
    CHECK(max_abs_diff(f(0.0, 1e-10), SquareMatrix::identity(2)) < 1e-9);
}

TEST_CASE("q1 does not depend on t") {
    const SquareProcessFamily f = q1(kWave);
    CHECK(max_abs_diff(f(0.7, 1.0), f(0.7, 9.0)) == 0.0);
}

TEST_CASE("all seven families satisfy the square Kolmogorov-Chapman equation") {
    const std::vector<SquareProcessFamily> families = {
        q1(kWave), q2(kDecay),          q3(2.5), q4(kDecay),
        q5(kWave), q6(2.0, 0.5, kDecay), q7(2.5, kWave),
    };
    const TimeGrid grid = TimeGrid::uniform_with(5.0, 12, {2.25, 2.5, 2.75});
    for (const SquareProcessFamily& f : families) {
        const VerificationReport r = kce_residual_square(f, grid, 1e-9);
        INFO(f.descriptor().name, " max residual ", r.max_residual);
        CHECK(r.pass());
        CHECK(r.residuals.size() >= 120);
    }
}

TEST_CASE("declared stochasticity kinds hold on the grid") {
    struct Row {
        SquareProcessFamily family;
        StochKind kind;
    };
    const std::vector<Row> rows = {
        {q1(kWave), StochKind::Left},           {q2(kDecay), StochKind::Doubly},
        {q3(2.5), StochKind::Doubly},           {q4(kDecay), StochKind::Right},
        {q5(kWave), StochKind::Right},          {q6(2.0, 0.5, kDecay), StochKind::Right},
        {q7(2.5, kWave), StochKind::Right},
    };
    const TimeGrid grid = TimeGrid::uniform_with(5.0, 10, {2.5});
    for (const Row& row : rows) {
        CHECK(row.family.declares(row.kind));
        for (const auto& [s, t] : grid.pairs()) {
            CHECK(is_square_stochastic(row.family(s, t), row.kind, 1e-12).ok);
        }
    }
    CHECK(q2(kDecay).declares(StochKind::Right));  // doubly implies right
    CHECK_FALSE(q1(kWave).declares(StochKind::Right));
}

TEST_CASE("a corrupted family is caught with its worst triple") {
    FamilyDescriptor desc{"q2_corrupt", 2, {}, {}, {}};
    const SquareProcessFamily broken(std::move(desc), {StochKind::Doubly}, 10.0, [](double s, double t) {
        const double r = std::exp(-t) / std::exp(-s);
        // sign flipped on the off-diagonal
        return SquareMatrix(2, {0.5 * (1 + r), -0.5 * (1 - r), 0.5 * (1 - r), 0.5 * (1 + r)});
    });
    const VerificationReport r = kce_residual_square(broken, TimeGrid::uniform(5.0, 8), 1e-9);
    CHECK(r.max_residual > 0.1);
    CHECK(r.failures > 0);
    CHECK(r.worst.residual == r.max_residual);
    CHECK(r.worst.s < r.worst.tau);
    CHECK(r.worst.tau < r.worst.t);
}

TEST_CASE("construction rejects broken parameter functions") {
    CHECK_THROWS_WITH_AS(q2(TimeFunction::parse("1+t")), doctest::Contains("decreasing"),
                         ConstructionError);
    CHECK_THROWS_WITH_AS(q2(TimeFunction::parse("1-t")), doctest::Contains("positive"), ConstructionError);
    CHECK_THROWS_WITH_AS(q5(TimeFunction::constant(1.5)), doctest::Contains("[0,1]"), ConstructionError);
    CHECK_THROWS_AS(q6(2.0, 1.0, kDecay), ConstructionError);  // 2*mu == lambda
    CHECK_THROWS_AS(q6(-1.0, -2.0, kDecay), ConstructionError);
    CHECK_THROWS_AS(q3(-1.0), ConstructionError);
    CHECK_THROWS_AS(q7(0.0, kWave), ConstructionError);
}

TEST_CASE("family evaluation guards its domain") {
    const SquareProcessFamily f = q2(kDecay);
    CHECK_THROWS_AS(f(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(f(2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(f(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(f(0.0, 11.0), std::domain_error);  // beyond the default horizon
    CHECK_THROWS_AS(kce_residual_square(f, TimeGrid::uniform(20.0, 5), 1e-9), std::domain_error);
}

TEST_CASE("time grids") {
    const TimeGrid g = TimeGrid::uniform(5.0, 12);
    CHECK(g.points().size() == 12);
    CHECK(g.triples().size() == 220);
    CHECK(g.pairs().size() == 66);
    CHECK(g.t_max() == 5.0);

    const TimeGrid with_extra = TimeGrid::uniform_with(5.0, 12, {2.5, 2.5, -1.0, 99.0});
    CHECK(with_extra.points().size() == 13);  // duplicate and out-of-range extras dropped

    CHECK_THROWS_AS(TimeGrid({1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({1.0, 1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({-1.0, 1.0, 2.0}), std::invalid_argument);
}
