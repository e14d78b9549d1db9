#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fplab/draws.hpp"
#include "fplab/error.hpp"
#include "fplab/hypotheses.hpp"
#include "fplab/population.hpp"
#include "fplab/synthetic.hpp"

using namespace fplab;

namespace {

// Labels (1,1,0,0) against the all-zeros hypothesis: u = 1/2, and the train
// error depends only on how many of points {0,1} are drawn.
FinitePopulation oracle_population() { return make_grid_population({1, 1, 0, 0}); }

HypothesisClass all_zeros_class() {
    return HypothesisClass::explicit_finite({BitVec::from_string("0000")});
}

} // namespace

TEST_CASE("whole-vs-train proportion matches the hand enumeration") {
    // l = 2, eps = 2/5: |u - v_tr| = |1/2 - b/2| > 2/5 only when b = 0 or 2,
    // i.e. draws {2,3} and {0,1}: 2 of the 6 draws.
    CountingMeasureResult result =
        counting_measure(oracle_population(), all_zeros_class(), Rational(2, 5),
                         DeviationStatistic::WholeVsTrain, DrawSpec::exhaustive(4, 2));
    CHECK(result.total == 6);
    CHECK(result.bad == 2);
    CHECK(result.proportion == Rational(1, 3));
    CHECK(result.mode == DrawMode::Exhaustive);
    CHECK(result.ci_half_width == 0.0);
}

TEST_CASE("remainder-vs-train proportion matches the hand enumeration") {
    // u' = (a - b)/k with a = 2, k = 2: draws {0,1} give u' = 0, v_tr = 1;
    // draws {2,3} give u' = 1, v_tr = 0; mixed draws give u' = v_tr = 1/2.
    // |u' - v_tr| > 9/10 on exactly the 2 pure draws.
    CountingMeasureResult result =
        counting_measure(oracle_population(), all_zeros_class(), Rational(9, 10),
                         DeviationStatistic::RemainderVsTrain, DrawSpec::exhaustive(4, 2));
    CHECK(result.total == 6);
    CHECK(result.bad == 2);
    CHECK(result.proportion == Rational(1, 3));
}

TEST_CASE("paired train/test proportion matches the hand enumeration") {
    // ordered pairs: train 2 of 4, test 2 of the remaining 2 (single choice).
    // |v_te - v_tr| = 1 on the two pure splits, 0 otherwise: 2 of 6.
    PairedDrawResult result =
        paired_counting_measure(oracle_population(), all_zeros_class(), Rational(9, 10),
                                DrawSpec::exhaustive(4, 2));
    CHECK(result.total == 6);
    CHECK(result.bad == 2);
    CHECK(result.proportion == Rational(1, 3));
}

TEST_CASE("violations are strict inequalities") {
    // |u - v_tr| equals exactly 1/2 on the two pure draws; eps = 1/2 must not
    // count them.
    CountingMeasureResult at_boundary =
        counting_measure(oracle_population(), all_zeros_class(), Rational(1, 2),
                         DeviationStatistic::WholeVsTrain, DrawSpec::exhaustive(4, 2));
    CHECK(at_boundary.bad == 0);
    CountingMeasureResult below =
        counting_measure(oracle_population(), all_zeros_class(), Rational(49, 100),
                         DeviationStatistic::WholeVsTrain, DrawSpec::exhaustive(4, 2));
    CHECK(below.bad == 2);
}

TEST_CASE("violation proportion is monotone non-increasing in epsilon") {
    SyntheticSpec spec;
    spec.n = 10;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.3;
    spec.seed = 21;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass cls = HypothesisClass::threshold_1d();
    Rational prev(2);
    for (const char* eps : {"1/10", "1/4", "2/5", "1/2", "7/10", "9/10"}) {
        CountingMeasureResult r =
            counting_measure(pop, cls, parse_rational(eps),
                             DeviationStatistic::WholeVsTrain, DrawSpec::exhaustive(10, 5));
        CHECK(r.proportion <= prev);
        prev = r.proportion;
    }
}

TEST_CASE("supremum over the class dominates each single hypothesis") {
    SyntheticSpec spec;
    spec.n = 10;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.3;
    spec.seed = 9;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass full = HypothesisClass::threshold_1d();
    Rational eps(1, 4);
    CountingMeasureResult sup = counting_measure(
        pop, full, eps, DeviationStatistic::WholeVsTrain, DrawSpec::exhaustive(10, 5));
    for (const BitVec& d : effective_dichotomies(full, pop)) {
        HypothesisClass single = HypothesisClass::explicit_finite({d});
        CountingMeasureResult one = counting_measure(
            pop, single, eps, DeviationStatistic::WholeVsTrain, DrawSpec::exhaustive(10, 5));
        CHECK(one.proportion <= sup.proportion);
    }
}

TEST_CASE("monte-carlo is deterministic per seed and worker-count independent") {
    SyntheticSpec spec;
    spec.n = 12;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.25;
    spec.seed = 4;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass cls = HypothesisClass::interval_1d();
    DrawSpec mc = DrawSpec::monte_carlo(12, 5, 20000, 99);

    RunOptions one;
    one.workers = 1;
    RunOptions four;
    four.workers = 4;
    CountingMeasureResult a = counting_measure(pop, cls, Rational(41, 100),
                                               DeviationStatistic::WholeVsTrain, mc, one);
    CountingMeasureResult b = counting_measure(pop, cls, Rational(41, 100),
                                               DeviationStatistic::WholeVsTrain, mc, four);
    CHECK(a.bad == b.bad);
    CHECK(a.total == b.total);
    CHECK(a.proportion == b.proportion);
    CHECK(a.seed == 99);
    CHECK(a.mode == DrawMode::MonteCarlo);
    CHECK(a.ci_half_width == doctest::Approx(hoeffding_half_width(20000)));

    DrawSpec other_seed = DrawSpec::monte_carlo(12, 5, 20000, 100);
    CountingMeasureResult c = counting_measure(pop, cls, Rational(41, 100),
                                               DeviationStatistic::WholeVsTrain, other_seed, one);
    CHECK(c.bad != a.bad); // overwhelmingly likely for a fresh stream
}

TEST_CASE("paired monte-carlo is deterministic and worker-count independent") {
    SyntheticSpec spec;
    spec.n = 12;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.25;
    spec.seed = 4;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass cls = HypothesisClass::threshold_1d();
    DrawSpec mc = DrawSpec::monte_carlo(12, 5, 20000, 7);
    RunOptions one;
    RunOptions four;
    four.workers = 4;
    PairedDrawResult a = paired_counting_measure(pop, cls, Rational(1, 4), mc, one);
    PairedDrawResult b = paired_counting_measure(pop, cls, Rational(1, 4), mc, four);
    CHECK(a.bad == b.bad);
    CHECK(a.total == 20000);
}

TEST_CASE("exhaustive counts are worker-count independent") {
    SyntheticSpec spec;
    spec.n = 11;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.3;
    spec.seed = 17;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass cls = HypothesisClass::interval_1d();
    RunOptions one;
    RunOptions five;
    five.workers = 5;
    CountingMeasureResult a =
        counting_measure(pop, cls, Rational(2, 5), DeviationStatistic::RemainderVsTrain,
                         DrawSpec::exhaustive(11, 4), one);
    CountingMeasureResult b =
        counting_measure(pop, cls, Rational(2, 5), DeviationStatistic::RemainderVsTrain,
                         DrawSpec::exhaustive(11, 4), five);
    CHECK(a.bad == b.bad);
    CHECK(a.total == b.total);
}

TEST_CASE("budget overflow points at monte-carlo mode") {
    FinitePopulation pop = make_grid_population(std::vector<int>(30, 0));
    RunOptions opts;
    opts.budget = 1000;
    try {
        counting_measure(pop, HypothesisClass::threshold_1d(), Rational(1, 2),
                         DeviationStatistic::WholeVsTrain, DrawSpec::exhaustive(30, 15), opts);
        FAIL("unreachable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Budget);
        CHECK(std::string(e.what()).find("monte-carlo") != std::string::npos);
    }
}

TEST_CASE("parameter validation errors") {
    FinitePopulation pop = oracle_population();
    HypothesisClass cls = all_zeros_class();
    // l out of range
    CHECK_THROWS_AS(counting_measure(pop, cls, Rational(1, 2),
                                     DeviationStatistic::WholeVsTrain,
                                     DrawSpec::exhaustive(4, 5)),
                    Error);
    // population size mismatch
    CHECK_THROWS_AS(counting_measure(pop, cls, Rational(1, 2),
                                     DeviationStatistic::WholeVsTrain,
                                     DrawSpec::exhaustive(5, 2)),
                    Error);
    // epsilon must be positive
    CHECK_THROWS_AS(counting_measure(pop, cls, Rational(0),
                                     DeviationStatistic::WholeVsTrain,
                                     DrawSpec::exhaustive(4, 2)),
                    Error);
    // remainder statistic with an empty remainder
    try {
        counting_measure(pop, cls, Rational(1, 2), DeviationStatistic::RemainderVsTrain,
                         DrawSpec::exhaustive(4, 4));
        FAIL("unreachable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySet);
    }
    // paired draws need 2l <= N
    CHECK_THROWS_AS(
        paired_counting_measure(pop, cls, Rational(1, 2), DrawSpec::exhaustive(4, 3)),
        Error);
    // monte-carlo needs trials
    CHECK_THROWS_AS(counting_measure(pop, cls, Rational(1, 2),
                                     DeviationStatistic::WholeVsTrain,
                                     DrawSpec::monte_carlo(4, 2, 0, 1)),
                    Error);
}

TEST_CASE("at l = k the paired measure reduces to the remainder statistic") {
    SyntheticSpec spec;
    spec.n = 8;
    spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
    spec.flip_prob = 0.25;
    spec.seed = 31;
    FinitePopulation pop = make_synthetic_population(spec);
    HypothesisClass cls = HypothesisClass::threshold_1d();
    // the only size-4 test draw from a 4-point remainder is the remainder
    // itself, so v_te = u'
    for (const char* eps : {"1/4", "2/5", "3/5"}) {
        PairedDrawResult paired = paired_counting_measure(pop, cls, parse_rational(eps),
                                                          DrawSpec::exhaustive(8, 4));
        CountingMeasureResult direct =
            counting_measure(pop, cls, parse_rational(eps),
                             DeviationStatistic::RemainderVsTrain, DrawSpec::exhaustive(8, 4));
        CHECK(paired.proportion == direct.proportion);
    }
}

TEST_CASE("hypergeometric pmf matches hand values and sums to one") {
    CHECK(hypergeometric_pmf(4, 2, 2, 1) == Rational(2, 3));
    CHECK(hypergeometric_pmf(4, 2, 2, 0) == Rational(1, 6));
    CHECK(hypergeometric_pmf(4, 2, 2, 2) == Rational(1, 6));
    CHECK(hypergeometric_pmf(4, 2, 2, 3) == Rational(0));
    CHECK(hypergeometric_pmf(4, 2, 2, -1) == Rational(0));

    for (std::uint64_t n : {6, 9}) {
        for (std::uint64_t marked = 0; marked <= n; ++marked) {
            for (std::uint64_t drawn = 1; drawn <= n; ++drawn) {
                Rational sum(0);
                for (std::int64_t k = -1; k <= static_cast<std::int64_t>(drawn) + 1; ++k) {
                    sum += hypergeometric_pmf(n, marked, drawn, k);
                }
                CHECK(sum == Rational(1));
            }
        }
    }
}

TEST_CASE("hypergeometric tail is a monotone survival function") {
    CHECK(hypergeometric_tail_at_least(10, 5, 6, 0) == Rational(1));
    CHECK(hypergeometric_tail_at_least(10, 5, 6, 7) == Rational(0));
    Rational prev(2);
    for (std::int64_t k = 0; k <= 6; ++k) {
        Rational tail = hypergeometric_tail_at_least(10, 5, 6, k);
        CHECK(tail <= prev);
        prev = tail;
    }
    // tail(k) - tail(k+1) = pmf(k)
    CHECK(hypergeometric_tail_at_least(10, 5, 6, 2) -
              hypergeometric_tail_at_least(10, 5, 6, 3) ==
          hypergeometric_pmf(10, 5, 6, 2));
    CHECK_THROWS_AS(hypergeometric_pmf(4, 5, 2, 1), Error);
    CHECK_THROWS_AS(hypergeometric_pmf(4, 2, 5, 1), Error);
}

TEST_CASE("half-split concentration matches the hand enumeration") {
    std::vector<int> labels{1, 1, 0, 0};
    CHECK(half_split_concentration(labels, Rational(1, 2)) == Rational(2, 3));
    // inclusive comparison: eps = 1 admits every split
    CHECK(half_split_concentration(labels, Rational(1)) == Rational(1));
    // eps = 0 still admits the balanced splits: both halves hold one 1
    CHECK(half_split_concentration(labels, Rational(0)) == Rational(2, 3));

    CHECK_THROWS_AS(half_split_concentration(std::vector<int>{1, 0, 1}, Rational(1, 2)),
                    Error);
    CHECK_THROWS_AS(half_split_concentration(std::vector<int>{}, Rational(1, 2)), Error);
    CHECK_THROWS_AS(half_split_concentration(std::vector<int>{1, 2}, Rational(1, 2)), Error);
    CHECK_THROWS_AS(half_split_concentration(labels, Rational(-1, 2)), Error);
}

TEST_CASE("half-split equals the hypergeometric tail computation done directly") {
    // with K ones overall, a half containing j of them differs from the other
    // half by |2j - K| / m; the split probability is a hypergeometric sum
    for (std::size_t m : {2, 3, 4}) {
        for (std::size_t ones = 0; ones <= 2 * m; ++ones) {
            std::vector<int> labels(2 * m, 0);
            for (std::size_t i = 0; i < ones; ++i) labels[i] = 1;
            Rational eps(1, 3);
            Rational direct(0);
            for (std::int64_t j = 0; j <= static_cast<std::int64_t>(m); ++j) {
                Rational diff = Rational(std::abs(2 * j - static_cast<std::int64_t>(ones)),
                                         static_cast<unsigned long>(m));
                diff.canonicalize();
                if (diff <= eps) direct += hypergeometric_pmf(2 * m, ones, m, j);
            }
            direct.canonicalize();
            CHECK(half_split_concentration(labels, eps) == direct);
        }
    }
}

TEST_CASE("half-split is invariant under label order") {
    std::vector<int> a{1, 0, 1, 0, 1, 0};
    std::vector<int> b{1, 1, 1, 0, 0, 0};
    CHECK(half_split_concentration(a, Rational(1, 3)) ==
          half_split_concentration(b, Rational(1, 3)));
}

TEST_CASE("hoeffding half-width has the closed form") {
    double w = hoeffding_half_width(100000);
    CHECK(w == doctest::Approx(std::sqrt(std::log(200.0) / 200000.0)).epsilon(1e-12));
    CHECK(hoeffding_half_width(100000, 2.0) == doctest::Approx(2.0 * w).epsilon(1e-12));
    CHECK(hoeffding_half_width(400000) == doctest::Approx(w / 2.0).epsilon(1e-12));
}
