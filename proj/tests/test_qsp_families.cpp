#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qsp/evolution.hpp"
#include "qsp/exceptions.hpp"
#include "qsp/qsp_families.hpp"

using namespace qsp;

namespace {

const TimeFunction kDecay = TimeFunction::parse("exp(-t)");
const TimeFunction kHalf = TimeFunction::constant(0.5);
const TimeFunction kQuarter = TimeFunction::constant(0.25);

M2Params example_m2() {
    return {TimeFunction::parse("0.5*(1+exp(-t))"),
            kHalf,
            kHalf,
            TimeFunction::parse("1/(1+exp(-t))"),
            TimeFunction::parse("-1/(1+exp(-t))"),
            0.5};
}

NParams example_n() {
    return {TimeFunction::parse("0.6+0.3*(1-exp(-t))"), TimeFunction::parse("0.6+0.3*(1-exp(-t))"),
            TimeFunction::parse("0.3+0.15*(1-exp(-t))"), TimeFunction::parse("0.05+0.15*exp(-t)"),
            TimeFunction::parse("0.05+0.15*exp(-t)"),    TimeFunction::parse("0.3+0.15*(1-exp(-t))")};
}

std::vector<std::array<double, 2>> random_pairs(double t_max, int count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(0.0, t_max);
    std::vector<std::array<double, 2>> out;
    while (static_cast<int>(out.size()) < count) {
        double s = dist(gen), t = dist(gen);
        if (s > t) std::swap(s, t);
        if (t - s > 1e-6) out.push_back({s, t});
    }
    return out;
}

}  // namespace

TEST_CASE("direct sum stacks right-stochastic layers") {
    const CubicProcessFamily f = direct_sum_30({q2(kDecay), q3(1.0)});
    CHECK(f.declared_kind() == StochKind::Three);
    CHECK(f.product() == ProductKind::Maksimov0);

    const CubicMatrix q = f(0.3, 2.0);
    CHECK(max_abs_diff(slice_second(q, 0), q2(kDecay)(0.3, 2.0)) == 0.0);
    CHECK(max_abs_diff(slice_second(q, 1), q3(1.0)(0.3, 2.0)) == 0.0);

    const TimeGrid grid = TimeGrid::uniform_with(5.0, 12, {0.75, 1.0, 1.25});
    const VerificationReport r = kce_residual_cubic(f, grid, 1e-9);
    CHECK(r.pass());
    CHECK(r.residuals.size() >= 120);
}

TEST_CASE("direct sum of s-independent layers is s-independent") {
    const TimeFunction wave = TimeFunction::parse("0.4+0.2*sin(t)");
    const CubicProcessFamily f = direct_sum_30({q5(wave), q5(wave)});
    CHECK(max_abs_diff(f(0.2, 3.0), f(1.7, 3.0)) == 0.0);
}

TEST_CASE("direct sum rejects a left-only layer") {
    CHECK_THROWS_WITH_AS(direct_sum_30({q1(kHalf), q3(1.0)}), doctest::Contains("right stochastic"),
                         ConstructionError);
    CHECK_THROWS_AS(direct_sum_30({q2(kDecay)}), ConstructionError);  // needs m layers
}

TEST_CASE("direct sum residual equals the worst layer residual") {
    const CubicProcessFamily f = direct_sum_30({q2(kDecay), q4(kDecay)});
    const TimeGrid grid = TimeGrid::uniform(5.0, 8);
    const VerificationReport cubic = kce_residual_cubic(f, grid, 1e-9);
    const VerificationReport layer0 = kce_residual_square(q2(kDecay), grid, 1e-9);
    const VerificationReport layer1 = kce_residual_square(q4(kDecay), grid, 1e-9);
    REQUIRE(cubic.residuals.size() == layer0.residuals.size());
    for (std::size_t i = 0; i < cubic.residuals.size(); ++i) {
        const double want = std::max(layer0.residuals[i].residual, layer1.residuals[i].residual);
        CHECK(cubic.residuals[i].residual == want);
    }
}

TEST_CASE("m1: uniform instance and bound checks") {
    const CubicProcessFamily f = m1_family({kHalf, kQuarter, kQuarter});
    const CubicMatrix q = f(0.0, 1.0);
    for (double v : q.entries()) CHECK(v == 0.25);

    CHECK(max_abs_diff(f(0.7, 1.0), f(0.7, 8.0)) == 0.0);  // no t dependence

    const VerificationReport r = kce_residual_cubic(f, TimeGrid::uniform(5.0, 10), 1e-12);
    CHECK(r.max_residual == 0.0);

    CHECK_THROWS_WITH_AS(m1_family({TimeFunction::constant(1.0), kQuarter, TimeFunction::constant(0.2)}),
                         doctest::Contains("u21"), ConstructionError);
    CHECK_THROWS_WITH_AS(m1_family({kHalf, TimeFunction::constant(0.6), kQuarter}),
                         doctest::Contains("u11"), ConstructionError);
}

TEST_CASE("m2: validity bands and contraction") {
    const M2Params params = example_m2();
    const CubicProcessFamily f = m2_family(params);

    // Feasibility bands for the gammas, checked independently here.
    for (const auto& [s, t] : random_pairs(10.0, 100, 31)) {
        const double inv_s = 1.0 / params.psi(s), inv_t = 1.0 / params.psi(t);
        const double g11 = params.gamma11(s), g21 = params.gamma21(s);
        CHECK(g11 >= 0.5 * (inv_s - inv_t) - 1e-12);
        CHECK(g11 <= 0.5 * (inv_s + inv_t) + 1e-12);
        CHECK(g21 >= -0.5 * (inv_s + inv_t) - 1e-12);
        CHECK(g21 <= 0.5 * (inv_s - inv_t) + 1e-12);
    }

    const SquareProcessFamily reference = q2(params.psi);
    for (const auto& [s, t] : random_pairs(10.0, 50, 32)) {
        CHECK(max_abs_diff(contract_second(f(s, t)), reference(s, t)) < 1e-12);
    }

    CHECK(kce_residual_cubic(f, TimeGrid::uniform(5.0, 12), 1e-9).pass());
}

TEST_CASE("m2: rejects a flat gamma21 under a strictly decreasing psi") {
    M2Params bad = example_m2();
    bad.gamma21 = TimeFunction::constant(0.0);
    CHECK_THROWS_WITH_AS(m2_family(bad), doctest::Contains("gamma21"), ConstructionError);
}

TEST_CASE("m3: branch displays and bounds") {
    const M3Params display{TimeFunction::constant(1.0), TimeFunction::constant(1.0), kQuarter, kQuarter,
                           2.5};
    const CubicProcessFamily f = m3_family(display);
    const CubicMatrix before = f(0.5, 2.0);
    CHECK(before(0, 0, 0) == 1.0);
    CHECK(before(1, 0, 1) == 1.0);
    CHECK(before(0, 1, 0) == 0.0);
    CHECK(before(1, 1, 1) == 0.0);
    for (int k = 0; k < 2; ++k) {
        double sum = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) sum += before(i, j, k);
        CHECK(sum == 1.0);
    }
    const CubicMatrix after = f(0.5, 3.0);
    for (double v : after.entries()) CHECK(v == 0.25);

    CHECK_THROWS_WITH_AS(
        m3_family({TimeFunction::constant(1.0), TimeFunction::constant(1.0), TimeFunction::constant(0.6),
                   kQuarter, 2.5}),
        doctest::Contains("kappa11"), ConstructionError);
}

TEST_CASE("m3: coupled branches satisfy the cubic equation across the cutoff") {
    const M3Params coupled{TimeFunction::constant(0.7), TimeFunction::constant(0.4),
                           TimeFunction::constant(0.35), TimeFunction::constant(0.2), 2.5};
    const CubicProcessFamily f = m3_family(coupled);
    CHECK(f.descriptor().warnings.empty());
    const TimeGrid grid = TimeGrid::uniform_with(5.0, 12, {2.25, 2.5, 2.75});
    const VerificationReport r = kce_residual_cubic(f, grid, 1e-9);
    CHECK(r.pass());
    CHECK(r.residuals.size() >= 120);
}

TEST_CASE("m3: uncoupled branches are flagged and fail across the cutoff") {
    const M3Params uncoupled{TimeFunction::constant(1.0), TimeFunction::constant(1.0), kQuarter, kQuarter,
                             2.5};
    const CubicProcessFamily f = m3_family(uncoupled);
    REQUIRE(f.descriptor().warnings.size() == 1);
    CHECK(f.descriptor().warnings[0].find("coupled") != std::string::npos);
    const VerificationReport r = kce_residual_cubic(f, TimeGrid::uniform_with(5.0, 12, {2.5}), 1e-9);
    CHECK(r.max_residual > 0.1);  // straddling triples expose the gap
}

TEST_CASE("p3 flow: closed form, left-stochastic product, and rejections") {
    const TimeFunction ab = TimeFunction::parse("0.6+0.3*(1-exp(-t))");
    const MatrixFlow flow = p3_flow(ab, ab);
    const SquareMatrix a0 = flow.at(0.0);
    CHECK(a0(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(a0(0, 1) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(a0(1, 0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(a0(1, 1) == doctest::Approx(0.6).epsilon(1e-15));

    const SquareMatrix prod = multiply(flow.at(0.0), flow.inverse_at(1.0));
    CHECK(is_square_stochastic(prod, StochKind::Left, 1e-12).ok);

    CHECK_THROWS_AS(p3_flow(kHalf, kHalf), ConstructionError);  // a+b == 1, singular
    // Decreasing pair with a+b < 1 is the other valid branch.
    const TimeFunction dec = TimeFunction::parse("0.4-0.2*(1-exp(-t))");
    CHECK_NOTHROW(p3_flow(dec, dec));
    // Mixed monotonicity is rejected.
    CHECK_THROWS_AS(p3_flow(ab, dec), ConstructionError);
}

TEST_CASE("matrix flow rejects near-singular samples") {
    FamilyDescriptor desc{"flow_test", 2, {}, {}, {}};
    CHECK_THROWS_WITH_AS(
        MatrixFlow(std::move(desc), 10.0,
                   [](double t) { return SquareMatrix(2, {1.0, 1.0, 1.0, 1.0 + t}); }),
        doctest::Contains("singular"), ConstructionError);
}

TEST_CASE("theorem-style family: contraction telescopes to the flow product") {
    const TimeFunction ab = TimeFunction::parse("0.6+0.3*(1-exp(-t))");
    const MatrixFlow flow = p3_flow(ab, ab);
    const CubicProcessFamily f = theorem_a_family(flow);

    for (const auto& [s, t] : random_pairs(10.0, 50, 33)) {
        const SquareMatrix want = multiply(flow.at(s), flow.inverse_at(t));
        CHECK(max_abs_diff(contract_second(f(s, t)), want) < 1e-12);
    }
    CHECK(kce_residual_cubic(f, TimeGrid::uniform(5.0, 12), 1e-9).pass());
}

TEST_CASE("theorem-style family rejects a flow violating left stochasticity") {
    FamilyDescriptor desc{"drift", 2, {}, {}, {}};
    const MatrixFlow flow(std::move(desc), 10.0,
                          [](double t) { return SquareMatrix(2, {1.0 + t, 0.0, 0.0, 1.0}); });
    CHECK_THROWS_WITH_AS(theorem_a_family(flow), doctest::Contains("condition (i)"), ConstructionError);
}

TEST_CASE("theorem-style family rejects a beta split with wrong sums") {
    const TimeFunction ab = TimeFunction::parse("0.6+0.3*(1-exp(-t))");
    const MatrixFlow flow = p3_flow(ab, ab);
    const BetaProvider bad = [](double) { return CubicMatrix(2, std::vector<double>(8, 0.125)); };
    CHECK_THROWS_WITH_AS(theorem_a_family(flow, bad), doctest::Contains("condition (ii)"),
                         ConstructionError);
}

TEST_CASE("closed-form family over the flow agrees with the assembled split") {
    const NParams params = example_n();
    const CubicProcessFamily closed = n_family(params);
    const MatrixFlow flow = p3_flow(params.a, params.b);
    const CubicProcessFamily assembled = theorem_a_family(flow, beta_from_n_params(params));

    for (const auto& [s, t] : random_pairs(10.0, 60, 34)) {
        CHECK(max_abs_diff(closed(s, t), assembled(s, t)) < 1e-10);
        const SquareMatrix want = multiply(flow.at(s), flow.inverse_at(t));
        CHECK(max_abs_diff(contract_second(closed(s, t)), want) < 1e-12);
    }
    CHECK(kce_residual_cubic(closed, TimeGrid::uniform(5.0, 12), 1e-9).pass());

    NParams bad = params;
    bad.alpha = TimeFunction::parse("0.7+0.3*(1-exp(-t))");  // alpha = a + 0.1
    CHECK_THROWS_WITH_AS(n_family(bad), doctest::Contains("alpha"), ConstructionError);
}

TEST_CASE("every constructed family keeps its declared kind at random pairs") {
    const std::vector<CubicProcessFamily> families = {
        direct_sum_30({q2(kDecay), q3(1.0)}),
        m1_family({kHalf, kQuarter, kQuarter}),
        m2_family(example_m2()),
        m3_family({TimeFunction::constant(0.7), TimeFunction::constant(0.4), TimeFunction::constant(0.35),
                   TimeFunction::constant(0.2), 2.5}),
        n_family(example_n()),
    };
    for (const CubicProcessFamily& f : families) {
        for (const auto& [s, t] : random_pairs(10.0, 200, 35)) {
            const StochResult r = is_stochastic(f(s, t), f.declared_kind(), 1e-12);
            INFO(f.descriptor().name, " at (", s, ",", t, ")");
            CHECK(r.ok);
        }
    }
}

TEST_CASE("the verifier product matches the double-sum oracle on family evaluations") {
    const CubicProcessFamily f = m2_family(example_m2());
    std::mt19937_64 gen(36);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    for (int trial = 0; trial < 25; ++trial) {
        double s = dist(gen), tau = dist(gen), t = dist(gen);
        if (s > tau) std::swap(s, tau);
        if (tau > t) std::swap(tau, t);
        if (s > tau) std::swap(s, tau);
        if (!(s < tau && tau < t)) continue;
        const CubicMatrix left = f(s, tau), right = f(tau, t);
        CHECK(max_abs_diff(f.apply_product(left, right), test::oracle_mul_projection(left, right)) < 1e-12);
    }
}

TEST_CASE("nonnegative cubic matrices: (1,2)-stochastic iff contraction left stochastic") {
    auto gen = test::rng(37);
    int positives = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 3;
        const CubicMatrix q =
            (trial % 2 == 0) ? test::rand_12_stochastic(m, gen) : test::rand_cubic(m, gen, 0.0, 0.4);
        const bool lhs = is_stochastic(q, StochKind::OneTwo, 1e-12).ok;
        const bool rhs = is_square_stochastic(contract_second(q), StochKind::Left, 1e-12).ok;
        CHECK(lhs == rhs);
        positives += lhs ? 1 : 0;
    }
    CHECK(positives >= 50);  // both directions actually exercised
}

TEST_CASE("time-dependence classification") {
    // Constant family: homogeneous.
    const CubicProcessFamily constant = m1_family({kHalf, kQuarter, kQuarter});
    const TimeGrid grid = TimeGrid::uniform(8.0, 9);
    CHECK(classify_time_dependence(constant, grid).kind == TimeDependenceKind::Homogeneous);

    // Depends only on t through a 2*pi-periodic wave: periodic in t.
    const double two_pi = 8.0 * std::atan(1.0);
    ValidationOptions wide;
    wide.t_max = 30.0;
    const CubicProcessFamily wave_t =
        direct_sum_30({q5(TimeFunction::parse("0.5+0.4*sin(t)"), wide),
                       q5(TimeFunction::parse("0.5+0.4*sin(t)"), wide)},
                      wide);
    const TimeDependence td = classify_time_dependence(wave_t, TimeGrid::uniform(8.0, 9), {two_pi});
    CHECK(td.kind == TimeDependenceKind::PeriodicInT);
    CHECK(td.period == two_pi);

    // Periodic s-dependence with aperiodic t-decay: periodic in s.
    FamilyDescriptor desc{"s_wave", 2, {}, {}, {}};
    const CubicProcessFamily wave_s(
        std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA, BinaryOpTable::left_projection(2), 30.0,
        [](double s, double t) {
            const double v = 0.1 * std::sin(s) * std::exp(-t);
            return CubicMatrix(2, {0.25 + v, 0.25 - v, 0.25 - v, 0.25 + v, 0.25, 0.25, 0.25, 0.25});
        });
    const TimeDependence sd = classify_time_dependence(wave_s, TimeGrid::uniform(8.0, 9), {two_pi});
    CHECK(sd.kind == TimeDependenceKind::PeriodicInS);

    // Genuinely inhomogeneous, aperiodic family.
    const CubicProcessFamily general = m2_family(example_m2());
    CHECK(classify_time_dependence(general, grid).kind == TimeDependenceKind::General);
    CHECK(classify_time_dependence(general, grid, {two_pi}).kind == TimeDependenceKind::General);
}

TEST_CASE("period candidates scanned from the grid spacing set") {
    const double period = 0.7;
    const double two_pi = 8.0 * std::atan(1.0);
    const TimeFunction f = TimeFunction::periodic(0.5, 0.4, two_pi / period, 0.0);
    const CubicProcessFamily fam = direct_sum_30({q5(f), q5(f)});
    // Spacings are {0.3, 0.7, 1.4, 1.8}; only multiples of the true period survive.
    const TimeGrid grid({0.0, 0.7, 1.4, 2.8, 3.1, 4.9});
    const TimeDependence td = classify_time_dependence(fam, grid);
    CHECK(td.kind == TimeDependenceKind::PeriodicInT);
    CHECK(td.period == doctest::Approx(period).epsilon(1e-12));
}

TEST_CASE("three-type direct sum from custom right-stochastic layers") {
    auto layer = [](int seed) {
        FamilyDescriptor desc{"layer" + std::to_string(seed), 3, {}, {}, {}};
        return SquareProcessFamily(
            std::move(desc), {StochKind::Right}, 10.0, [seed](double s, double t) {
                // Rows (r, 1-r, 0), (0, r, 1-r), (1-r, 0, r): right stochastic.
                const double r = std::exp(-(t - s)) * (0.5 + 0.1 * seed);
                return SquareMatrix(3, {r, 1 - r, 0, 0, r, 1 - r, 1 - r, 0, r});
            });
    };
    // These layers are right stochastic but do not satisfy the square
    // equation, so stack by hand to exercise the m=3 assembly math.
    const SquareProcessFamily l0 = layer(0), l1 = layer(1), l2 = layer(2);
    const CubicMatrix stacked = stack_second({l0(0.5, 2.0), l1(0.5, 2.0), l2(0.5, 2.0)});
    CHECK(is_stochastic(stacked, StochKind::Three, 1e-12).ok);
    for (int j = 0; j < 3; ++j) {
        const SquareProcessFamily& l = j == 0 ? l0 : (j == 1 ? l1 : l2);
        CHECK(max_abs_diff(slice_second(stacked, j), l(0.5, 2.0)) == 0.0);
    }
    // The constructor itself wants layers that satisfy the square equation.
    CHECK_THROWS_AS(direct_sum_30({l0, l1, l2}), ConstructionError);
}

TEST_CASE("three-type flow family runs through the elimination-based inverse") {
    FamilyDescriptor desc{"mixing3", 3, {}, {}, {}};
    const SquareMatrix a0(3, {0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5});
    const MatrixFlow flow(std::move(desc), 10.0, [a0](double) { return a0; });
    CHECK(max_abs_diff(multiply(flow.at(1.0), flow.inverse_at(2.0)), SquareMatrix::identity(3)) < 1e-12);

    const CubicProcessFamily f = theorem_a_family(flow);
    CHECK(f.dim() == 3);
    for (const auto& [s, t] : random_pairs(10.0, 30, 38)) {
        CHECK(is_stochastic(f(s, t), StochKind::OneTwo, 1e-12).ok);
    }
    CHECK(kce_residual_cubic(f, TimeGrid::uniform(5.0, 8), 1e-9).pass());
}

TEST_CASE("operations hold at the largest supported dimension") {
    auto gen = test::rng(39);
    const int m = 8;
    const CubicMatrix a = test::rand_3_stochastic(m, gen);
    const CubicMatrix b = test::rand_3_stochastic(m, gen);
    CHECK(is_stochastic(mul_maksimov0(a, b), StochKind::Three, 1e-12).ok);

    const CubicMatrix c = test::rand_12_stochastic(m, gen);
    CHECK(is_square_stochastic(contract_second(c), StochKind::Left, 1e-12).ok);

    const BinaryOpTable a0 = BinaryOpTable::left_projection(m);
    const CubicMatrix d = test::rand_cubic(m, gen, 0.0, 0.2);
    CHECK(max_abs_diff(mul_maksimov_a(c, d, a0), test::oracle_mul_projection(c, d)) < 1e-12);
}

TEST_CASE("family evaluation guards and product table access") {
    const CubicProcessFamily f = m1_family({kHalf, kQuarter, kQuarter});
    CHECK_THROWS_AS(f(3.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(f(0.0, 100.0), std::domain_error);
    CHECK(f.op_table()(1, 0) == 1);  // left projection

    const CubicProcessFamily ds = direct_sum_30({q2(kDecay), q3(1.0)});
    CHECK_THROWS_AS(ds.op_table(), std::logic_error);
}
