#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "fplab/error.hpp"
#include "fplab/hypotheses.hpp"
#include "fplab/population.hpp"
#include "fplab/synthetic.hpp"

using namespace fplab;

namespace {

FinitePopulation two_dim_population() {
    // 3 x 3 grid with one duplicate row to exercise tied coordinates.
    std::vector<std::vector<double>> rows;
    for (double x : {0.0, 0.5, 1.0}) {
        for (double y : {0.0, 0.5, 1.0}) rows.push_back({x, y});
    }
    rows.push_back({0.5, 0.5});
    std::vector<int> labels(rows.size(), 0);
    labels[0] = 1;
    return FinitePopulation::from_rows(std::move(rows), std::move(labels));
}

} // namespace

TEST_CASE("hypothesis prediction rules") {
    LabeledPoint p{0, {0.7, 0.2}, 1};
    CHECK(Hypothesis::threshold(0, 0.5).predict(p) == 1);
    CHECK(Hypothesis::threshold(0, 0.7).predict(p) == 1); // boundary included
    CHECK(Hypothesis::threshold(0, 0.71).predict(p) == 0);
    CHECK(Hypothesis::threshold(1, 0.5).predict(p) == 0);
    CHECK(Hypothesis::interval(0, 0.5, 0.9).predict(p) == 1);
    CHECK(Hypothesis::interval(0, 0.8, 0.9).predict(p) == 0);
    CHECK(Hypothesis::interval(0, 0.9, 0.1).predict(p) == 0); // empty concept
    CHECK(Hypothesis::rectangle({0.5, 0.0}, {1.0, 0.5}).predict(p) == 1);
    CHECK(Hypothesis::rectangle({0.5, 0.3}, {1.0, 0.5}).predict(p) == 0);
    CHECK_THROWS_AS(Hypothesis::threshold(2, 0.5).predict(p), Error);
}

TEST_CASE("error rate counts mismatches exactly") {
    FinitePopulation pop = make_grid_population({1, 1, 0, 0});
    Hypothesis all_zero = Hypothesis::explicit_labels(BitVec::from_string("0000"));
    CHECK(error_rate(all_zero, pop.points()) == Rational(1, 2));
    Hypothesis perfect = Hypothesis::explicit_labels(BitVec::from_string("1100"));
    CHECK(error_rate(perfect, pop.points()) == Rational(0));
    CHECK_THROWS_AS(error_rate(all_zero, std::span<const LabeledPoint>{}), Error);
}

TEST_CASE("threshold class induces m+1 dichotomies in lexicographic order") {
    FinitePopulation pop = make_grid_population({0, 0, 0, 0, 0});
    std::vector<BitVec> dichotomies =
        effective_dichotomies(HypothesisClass::threshold_1d(), pop);
    // 5 distinct coordinates: suffix masks of each length plus the empty one.
    CHECK(dichotomies.size() == 6);
    CHECK(std::is_sorted(dichotomies.begin(), dichotomies.end()));
    std::set<std::string> seen;
    for (const BitVec& d : dichotomies) seen.insert(d.to_string());
    CHECK(seen.count("00000") == 1);
    CHECK(seen.count("00001") == 1);
    CHECK(seen.count("01111") == 1);
    CHECK(seen.count("11111") == 1);
    CHECK(seen.size() == 6);
}

TEST_CASE("tied coordinates collapse threshold dichotomies") {
    FinitePopulation pop =
        FinitePopulation::from_rows({{0.3}, {0.3}, {0.9}}, {0, 0, 0});
    std::vector<BitVec> dichotomies =
        effective_dichotomies(HypothesisClass::threshold_1d(), pop);
    // 2 distinct values -> 3 dichotomies; the tied pair moves together.
    CHECK(dichotomies.size() == 3);
    for (const BitVec& d : dichotomies) CHECK(d.test(0) == d.test(1));
}

TEST_CASE("interval class induces m(m+1)/2 + 1 dichotomies") {
    FinitePopulation pop = make_grid_population({0, 0, 0, 0, 0, 0});
    std::vector<BitVec> dichotomies =
        effective_dichotomies(HypothesisClass::interval_1d(), pop);
    CHECK(dichotomies.size() == 6 * 7 / 2 + 1);
    CHECK(std::is_sorted(dichotomies.begin(), dichotomies.end()));
    // every non-empty dichotomy is a contiguous run of sorted coordinates
    for (const BitVec& d : dichotomies) {
        std::vector<std::size_t> ones;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d.test(i)) ones.push_back(i);
        }
        if (ones.empty()) continue;
        CHECK(ones.back() - ones.front() + 1 == ones.size());
    }
}

TEST_CASE("axis rectangle dichotomies match the two-coordinate run product") {
    FinitePopulation pop = two_dim_population();
    std::vector<BitVec> dichotomies =
        effective_dichotomies(HypothesisClass::axis_rectangle(), pop);
    CHECK(std::is_sorted(dichotomies.begin(), dichotomies.end()));
    CHECK(std::adjacent_find(dichotomies.begin(), dichotomies.end()) == dichotomies.end());

    // brute force: every pair of index intervals over the sorted distinct
    // values of each coordinate
    std::set<std::string> expected;
    std::vector<double> xs{0.0, 0.5, 1.0};
    expected.insert(std::string(pop.size(), '0'));
    for (std::size_t alo = 0; alo < xs.size(); ++alo) {
        for (std::size_t ahi = alo; ahi < xs.size(); ++ahi) {
            for (std::size_t blo = 0; blo < xs.size(); ++blo) {
                for (std::size_t bhi = blo; bhi < xs.size(); ++bhi) {
                    std::string mask(pop.size(), '0');
                    for (std::size_t i = 0; i < pop.size(); ++i) {
                        const auto& f = pop.point(i).features;
                        if (f[0] >= xs[alo] && f[0] <= xs[ahi] && f[1] >= xs[blo] &&
                            f[1] <= xs[bhi]) {
                            mask[i] = '1';
                        }
                    }
                    expected.insert(mask);
                }
            }
        }
    }
    std::set<std::string> got;
    for (const BitVec& d : dichotomies) got.insert(d.to_string());
    CHECK(got == expected);
}

TEST_CASE("explicit classes deduplicate and validate") {
    std::vector<BitVec> labelings{BitVec::from_string("0101"), BitVec::from_string("0101"),
                                  BitVec::from_string("1100")};
    HypothesisClass cls = HypothesisClass::explicit_finite(labelings);
    FinitePopulation pop = make_grid_population({1, 1, 0, 0});
    CHECK(effective_dichotomies(cls, pop).size() == 2);

    CHECK_THROWS_AS(HypothesisClass::explicit_finite({}), Error);
    CHECK_THROWS_AS(HypothesisClass::explicit_finite(
                        {BitVec::from_string("01"), BitVec::from_string("011")}),
                    Error);
    // labeling length must match the population
    HypothesisClass wrong = HypothesisClass::explicit_finite({BitVec::from_string("01")});
    CHECK_THROWS_AS(effective_dichotomies(wrong, pop), Error);
}

TEST_CASE("induced labeling matches pointwise prediction") {
    FinitePopulation pop = make_grid_population({0, 1, 0, 1, 0});
    Hypothesis h = Hypothesis::threshold(0, 0.4);
    BitVec induced = induced_labeling(h, pop);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        CHECK(static_cast<int>(induced.test(i)) == h.predict(pop.point(i)));
    }
}

TEST_CASE("growth function exhausts small populations exactly") {
    FinitePopulation pop = make_grid_population(std::vector<int>(8, 0));
    GrowthResult threshold = growth_function(HypothesisClass::threshold_1d(), 3, pop);
    CHECK(threshold.exact);
    CHECK(threshold.value == 4); // l + 1 on distinct points

    GrowthResult interval = growth_function(HypothesisClass::interval_1d(), 4, pop);
    CHECK(interval.exact);
    CHECK(interval.value == 11); // l(l+1)/2 + 1

    GrowthResult whole = growth_function(HypothesisClass::threshold_1d(), 8, pop);
    CHECK(whole.value == 9);

    CHECK_THROWS_AS(growth_function(HypothesisClass::threshold_1d(), 0, pop), Error);
    CHECK_THROWS_AS(growth_function(HypothesisClass::threshold_1d(), 9, pop), Error);
}

TEST_CASE("sampled growth lower-bounds the exact value") {
    FinitePopulation pop = make_grid_population(std::vector<int>(30, 0));
    GrowthOptions opts;
    opts.sampled_subsets = 200;
    opts.seed = 5;
    GrowthResult sampled = growth_function(HypothesisClass::threshold_1d(), 4, pop, opts);
    CHECK_FALSE(sampled.exact);
    CHECK(sampled.value <= 5);
    CHECK(sampled.value >= 2);
}

TEST_CASE("growth bound is exact in rational form and tight at the boundary") {
    CHECK(growth_bound_exact(4, 1) == Rational(6));
    CHECK(growth_bound_exact(4, 2) == Rational(12));
    CHECK(growth_bound_exact(3, 2) == Rational(27, 4));
    CHECK(growth_bound(16, 2) == doctest::Approx(1.5 * 256 / 2));

    FinitePopulation pop = make_grid_population(std::vector<int>(17, 0));

    // Boundary cases where the 1.5 l^h / h! form is not yet above the count:
    // threshold on l = 2 meets it with equality (3 = 3), interval on l = 3
    // exceeds it (7 > 27/4).  Strictness starts at l = 3 and l = 4.
    GrowthResult t2 = growth_function(HypothesisClass::threshold_1d(), 2, pop);
    CHECK(Rational(t2.value) == growth_bound_exact(2, 1));
    GrowthResult i3 = growth_function(HypothesisClass::interval_1d(), 3, pop);
    CHECK(Rational(i3.value) > growth_bound_exact(3, 2));
    GrowthResult t3 = growth_function(HypothesisClass::threshold_1d(), 3, pop);
    CHECK(Rational(t3.value) < growth_bound_exact(3, 1));
    GrowthResult i4 = growth_function(HypothesisClass::interval_1d(), 4, pop);
    CHECK(Rational(i4.value) < growth_bound_exact(4, 2));
}

TEST_CASE("vc dimension verifies declared values and finds undeclared ones") {
    FinitePopulation pop = make_grid_population(std::vector<int>(10, 0));
    CHECK(vc_dimension(HypothesisClass::threshold_1d(), pop) == 1);
    CHECK(vc_dimension(HypothesisClass::interval_1d(), pop) == 2);

    // undeclared explicit class: full search
    std::vector<BitVec> shatter_two;
    for (const char* s : {"0000", "0100", "0001", "0101"}) {
        shatter_two.push_back(BitVec::from_string(s));
    }
    FinitePopulation four = make_grid_population({0, 0, 0, 0});
    CHECK(vc_dimension(HypothesisClass::explicit_finite(shatter_two), four) == 2);

    // declaring less than the class shatters is an inconsistency
    HypothesisClass lying = HypothesisClass::explicit_finite(shatter_two, 1);
    try {
        vc_dimension(lying, four);
        FAIL("unreachable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Inconsistency);
    }
}

TEST_CASE("class descriptions name the family") {
    CHECK(HypothesisClass::threshold_1d().describe() == "threshold-1d(x0)");
    CHECK(HypothesisClass::interval_1d().describe() == "interval-1d(x0)");
    CHECK(HypothesisClass::axis_rectangle().describe() == "axis-rectangle");
    CHECK(HypothesisClass::explicit_finite({BitVec::from_string("01")}).describe() ==
          "explicit-finite(m=1)");
}
