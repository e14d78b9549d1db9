#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fplab/bounds.hpp"
#include "fplab/draws.hpp"
#include "fplab/error.hpp"
#include "fplab/hypotheses.hpp"
#include "fplab/population.hpp"
#include "fplab/synthetic.hpp"

using namespace fplab;

TEST_CASE("bound evaluation matches the closed form at a pinned point") {
    BoundParams params{64, 64, 1, 0.45};
    // front factor 9 * 2l = 1152; whole-set exponent eps^2 l (1/2 + 1)^2
    double expected_u = 1152.0 * std::exp(-0.45 * 0.45 * 64.0 * 2.25);
    double expected_uprime = 1152.0 * std::exp(-0.45 * 0.45 * 64.0 * 0.25);
    CHECK(theorem_bound(params, BoundVariant::WholeSet) ==
          doctest::Approx(expected_u).epsilon(1e-12));
    CHECK(theorem_bound(params, BoundVariant::Remainder) ==
          doctest::Approx(expected_uprime).epsilon(1e-12));
    CHECK(theorem_bound(params, BoundVariant::WholeSet) ==
          doctest::Approx(2.497039352777e-10).epsilon(1e-9));
    CHECK(theorem_bound(params, BoundVariant::Remainder) ==
          doctest::Approx(45.116807154).epsilon(1e-9));
}

TEST_CASE("log-space evaluation survives large h without overflow") {
    BoundParams params{128, 1000, 40, 0.6};
    double value = theorem_bound(params, BoundVariant::WholeSet);
    CHECK(std::isfinite(value));
    CHECK(value > 0.0);
    // direct evaluation for comparison: ln 9 + h ln(2l) - lgamma(h+1) - exponent
    double log_direct = std::log(9.0) + 40.0 * std::log(256.0) - std::lgamma(41.0) -
                        0.36 * 128.0 * std::pow(0.5 + 128.0 / 1000.0, 2);
    CHECK(std::log(value) == doctest::Approx(log_direct).epsilon(1e-12));
}

TEST_CASE("whole-set bound never exceeds the remainder bound") {
    for (std::uint64_t l : {8, 32, 128}) {
        for (std::uint64_t k : {l, 4 * l, 1000000 * l}) {
            for (int h : {1, 2, 5}) {
                for (double eps : {0.3, 0.5, 0.9}) {
                    BoundParams params{l, k, h, eps};
                    CHECK(theorem_bound(params, BoundVariant::WholeSet) <=
                          theorem_bound(params, BoundVariant::Remainder));
                }
            }
        }
    }
}

TEST_CASE("the remainder bound equals the limit form for every k") {
    BoundParams params{64, 77, 2, 0.5};
    CHECK(theorem_bound(params, BoundVariant::Remainder) == vapnik_limit_bound(64, 2, 0.5));
    params.k = 1000000000000ull;
    CHECK(theorem_bound(params, BoundVariant::Remainder) == vapnik_limit_bound(64, 2, 0.5));
}

TEST_CASE("whole-set bound converges to the limit form as k grows") {
    double limit = vapnik_limit_bound(64, 1, 0.45);
    double prev_gap = 1e300;
    for (std::uint64_t k : {64ull, 640ull, 6400ull, 64000000ull, 1000000000000ull}) {
        BoundParams params{64, k, 1, 0.45};
        double gap = std::abs(theorem_bound(params, BoundVariant::WholeSet) - limit);
        CHECK(gap <= prev_gap);
        prev_gap = gap;
    }
    BoundParams far{64, 1000000000000ull, 1, 0.45};
    CHECK(std::abs(theorem_bound(far, BoundVariant::WholeSet) - limit) / limit < 1e-6);
}

TEST_CASE("bound parameters are validated") {
    CHECK_THROWS_AS(theorem_bound({0, 4, 1, 0.5}, BoundVariant::WholeSet), Error);
    CHECK_THROWS_AS(theorem_bound({8, 4, 1, 0.5}, BoundVariant::WholeSet), Error); // k < l
    CHECK_THROWS_AS(theorem_bound({8, 8, 0, 0.5}, BoundVariant::WholeSet), Error); // h < 1
    CHECK_THROWS_AS(theorem_bound({8, 8, 1, 0.0}, BoundVariant::WholeSet), Error);
    CHECK_THROWS_AS(theorem_bound({8, 8, 1, -0.5}, BoundVariant::WholeSet), Error);
    // regime needs l * eps > 2 strictly: 4 * 0.5 = 2 is out
    CHECK_THROWS_AS(theorem_bound({4, 8, 1, 0.5}, BoundVariant::WholeSet), Error);
    CHECK_NOTHROW(theorem_bound({5, 8, 1, 0.5}, BoundVariant::WholeSet));
    CHECK_THROWS_AS(vapnik_limit_bound(4, 1, 0.5), Error);
}

TEST_CASE("remainder error identity holds on every dichotomy") {
    SyntheticSpec spec;
    spec.n = 10;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.3;
    spec.seed = 13;
    FinitePopulation pop = make_synthetic_population(spec);
    std::vector<std::size_t> train{0, 2, 5, 7};
    UPrimeIdentityReport report =
        uprime_identity_check(pop, HypothesisClass::interval_1d(), train);
    CHECK(report.exact_equal);
    CHECK(report.train_size == 4);
    CHECK(report.remainder_size == 6);
    CHECK(report.rows.size() ==
          effective_dichotomies(HypothesisClass::interval_1d(), pop).size());
    for (const UPrimeIdentityRow& row : report.rows) {
        CHECK(row.equal);
        CHECK(row.uprime_direct == row.uprime_formula);
        // u is the l/N : k/N mixture of train and remainder errors
        Rational mixture = (Rational(4) * row.v_tr + Rational(6) * row.uprime_direct) / 10;
        CHECK(mixture == row.u);
    }
}

TEST_CASE("identity check validates the train index set") {
    FinitePopulation pop = make_grid_population({1, 0, 1, 0});
    HypothesisClass cls = HypothesisClass::threshold_1d();
    CHECK_THROWS_AS(uprime_identity_check(pop, cls, std::vector<std::size_t>{}), Error);
    CHECK_THROWS_AS(uprime_identity_check(pop, cls, std::vector<std::size_t>{0, 1, 2, 3}),
                    Error);
    CHECK_THROWS_AS(uprime_identity_check(pop, cls, std::vector<std::size_t>{0, 0}), Error);
    CHECK_THROWS_AS(uprime_identity_check(pop, cls, std::vector<std::size_t>{0, 9}), Error);
}

TEST_CASE("symmetrisation lemma holds on a small exhaustive instance") {
    SyntheticSpec spec;
    spec.n = 10;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.2;
    spec.seed = 7;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass cls = HypothesisClass::threshold_1d();

    LemmaReport v1 = lemma_check(pop, cls, Rational(41, 100), 5, LemmaVersion::V1,
                                 DrawMode::Exhaustive);
    CHECK(v1.holds);
    CHECK(v1.l == 5);
    CHECK(v1.k == 5);
    CHECK_FALSE(v1.out_of_regime);
    // v1 threshold: (1/2 + l/k) eps = (3/2)(41/100)
    CHECK(v1.rhs_threshold == Rational(3, 2) * Rational(41, 100));
    CHECK(v1.rhs == Rational(2) * v1.rhs_result.proportion);
    CHECK((v1.lhs < v1.rhs || (v1.lhs == 0 && v1.rhs == 0)));

    LemmaReport v2 = lemma_check(pop, cls, Rational(41, 100), 5, LemmaVersion::V2,
                                 DrawMode::Exhaustive);
    CHECK(v2.holds);
    CHECK(v2.rhs_threshold == Rational(41, 200));
}

TEST_CASE("lemma regime is enforced unless overridden") {
    FinitePopulation pop = make_grid_population({1, 0, 1, 0, 1, 0, 1, 0});
    HypothesisClass cls = HypothesisClass::threshold_1d();
    // l * eps = 4 * 0.25 = 1 <= 2: out of regime
    CHECK_THROWS_AS(
        lemma_check(pop, cls, Rational(1, 4), 4, LemmaVersion::V1, DrawMode::Exhaustive),
        Error);
    LemmaReport forced = lemma_check(pop, cls, Rational(1, 4), 4, LemmaVersion::V1,
                                     DrawMode::Exhaustive, {}, 0, 0, true);
    CHECK(forced.out_of_regime);
    // structural limits are not overridable: 2l <= N
    CHECK_THROWS_AS(lemma_check(pop, cls, Rational(3, 5), 5, LemmaVersion::V1,
                                DrawMode::Exhaustive, {}, 0, 0, true),
                    Error);
}

TEST_CASE("a single-hypothesis class violates the lemma outside the regime") {
    // all-zeros hypothesis against labels (1,0,0,0), l = 1, eps = 1/5:
    // every train draw deviates, so lhs = 1, while the paired rhs is exactly 1.
    FinitePopulation pop = make_grid_population({1, 0, 0, 0});
    HypothesisClass cls = HypothesisClass::explicit_finite({BitVec::from_string("0000")});
    LemmaReport report = lemma_check(pop, cls, Rational(1, 5), 1, LemmaVersion::V1,
                                     DrawMode::Exhaustive, {}, 0, 0, true);
    CHECK(report.out_of_regime);
    CHECK(report.lhs == Rational(1));
    CHECK(report.rhs == Rational(1));
    CHECK_FALSE(report.holds);
    CHECK_FALSE(report.vacuous);
}

TEST_CASE("vacuous lemma instances are flagged and hold") {
    // a perfect-fit class never deviates: both sides are exactly zero
    FinitePopulation pop = make_grid_population({1, 1, 0, 0, 1, 1, 0, 0});
    std::vector<BitVec> perfect{pop.labels()};
    HypothesisClass cls = HypothesisClass::explicit_finite(perfect);
    LemmaReport report = lemma_check(pop, cls, Rational(3, 4), 4, LemmaVersion::V1,
                                     DrawMode::Exhaustive);
    CHECK(report.lhs == Rational(0));
    CHECK(report.rhs == Rational(0));
    CHECK(report.vacuous);
    CHECK(report.holds);
}

TEST_CASE("monte-carlo lemma runs are deterministic per seed") {
    SyntheticSpec spec;
    spec.n = 12;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.25;
    spec.seed = 19;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass cls = HypothesisClass::threshold_1d();
    RunOptions one;
    RunOptions four;
    four.workers = 4;
    LemmaReport a = lemma_check(pop, cls, Rational(1, 2), 5, LemmaVersion::V2,
                                DrawMode::MonteCarlo, one, 20000, 5);
    LemmaReport b = lemma_check(pop, cls, Rational(1, 2), 5, LemmaVersion::V2,
                                DrawMode::MonteCarlo, four, 20000, 5);
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
    CHECK(a.lhs_result.bad == b.lhs_result.bad);
    CHECK(a.rhs_result.bad == b.rhs_result.bad);
}

TEST_CASE("conditional half-probability matches the pinned oracle") {
    ConditionalHalfResult result = conditional_half_check(10, 5, 6, Rational(2, 5));
    // threshold (red/k - eps/2) l = (1/2 - 1/5) * 6 = 9/5, so at least 2 reds
    CHECK(result.min_red == 2);
    CHECK(result.probability == Rational(41, 42));
    CHECK(result.exceeds_half);
}

TEST_CASE("conditional half-probability regime and edges") {
    // eps * l = 2 exactly is out of regime
    CHECK_THROWS_AS(conditional_half_check(10, 5, 4, Rational(1, 2)), Error);
    CHECK_THROWS_AS(conditional_half_check(4, 2, 6, Rational(1, 2)), Error); // l > k
    CHECK_THROWS_AS(conditional_half_check(4, 9, 4, Rational(3, 5)), Error); // red > k
    // red = 0: the threshold is negative, every draw qualifies
    ConditionalHalfResult zero = conditional_half_check(8, 0, 6, Rational(1, 2));
    CHECK(zero.probability == Rational(1));
    // red = k: every ball drawn is red
    ConditionalHalfResult all = conditional_half_check(8, 8, 6, Rational(1, 2));
    CHECK(all.probability == Rational(1));
}

TEST_CASE("string conversions for variants and versions") {
    CHECK(std::string(to_string(BoundVariant::WholeSet)) == "u");
    CHECK(std::string(to_string(BoundVariant::Remainder)) == "uprime");
    CHECK(bound_variant_from_string("u") == BoundVariant::WholeSet);
    CHECK(bound_variant_from_string("uprime") == BoundVariant::Remainder);
    CHECK_THROWS_AS(bound_variant_from_string("w"), Error);
    CHECK(std::string(to_string(LemmaVersion::V1)) == "v1");
    CHECK(lemma_version_from_string("v2") == LemmaVersion::V2);
    CHECK_THROWS_AS(lemma_version_from_string("v3"), Error);
    CHECK(std::string(to_string(DeviationStatistic::WholeVsTrain)) == "u_minus_vtr");
    CHECK(deviation_statistic_from_string("uprime_minus_vtr") ==
          DeviationStatistic::RemainderVsTrain);
    CHECK_THROWS_AS(deviation_statistic_from_string("bogus"), Error);
}
