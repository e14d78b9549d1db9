#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "fplab/hypotheses.hpp"
#include "fplab/population.hpp"
#include "fplab/rational.hpp"
#include "fplab/subsets.hpp"

namespace fplab {

enum class DrawMode { Exhaustive, MonteCarlo };

const char* to_string(DrawMode mode);

// How the space of size-l draws from N points is covered: every subset
// exactly once, or seeded sampling without replacement.
struct DrawSpec {
    std::size_t population_size = 0; // N
    std::size_t draw_size = 0;       // l
    DrawMode mode = DrawMode::Exhaustive;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    static DrawSpec exhaustive(std::size_t n, std::size_t l);
    static DrawSpec monte_carlo(std::size_t n, std::size_t l, std::uint64_t trials,
                                std::uint64_t seed);

    void validate() const;
};

struct RunOptions {
    int workers = 1;
    std::uint64_t budget = 1'000'000; // max exhaustive draw count
};

// Proportion of draws satisfying a deviation predicate.  Exhaustive counts
// are exact; monte-carlo results carry a distribution-free 99% confidence
// half-width.
struct CountingMeasureResult {
    std::uint64_t bad = 0;
    std::uint64_t total = 0;
    Rational proportion;        // bad / total, exact
    double estimate = 0;        // proportion as a double
    double ci_half_width = 0;   // 0 in exhaustive mode
    DrawMode mode = DrawMode::Exhaustive;
    std::uint64_t seed = 0;     // 0 in exhaustive mode
};

// Same layout over ordered (train, test) pairs: train drawn from the
// population, test drawn from the remaining N - l points.
using PairedDrawResult = CountingMeasureResult;

// Which deviation is tested against the cutoff: whole-set error minus train
// error, or remainder error minus train error.
enum class DeviationStatistic { WholeVsTrain, RemainderVsTrain };

const char* to_string(DeviationStatistic stat);
DeviationStatistic deviation_statistic_from_string(const std::string& name);

// Proportion of draws where sup over the class's dichotomies of the chosen
// absolute deviation strictly exceeds epsilon.
CountingMeasureResult counting_measure(const FinitePopulation& pop,
                                       const HypothesisClass& cls,
                                       const Rational& epsilon,
                                       DeviationStatistic statistic,
                                       const DrawSpec& spec,
                                       const RunOptions& opts = {});

// Proportion of (train, test) pairs where sup over dichotomies of
// |test error - train error| strictly exceeds the threshold.  Requires
// 2l <= N.
PairedDrawResult paired_counting_measure(const FinitePopulation& pop,
                                         const HypothesisClass& cls,
                                         const Rational& threshold,
                                         const DrawSpec& spec,
                                         const RunOptions& opts = {});

// P[X = k] for X hypergeometric(N, K, n): C(K,k)C(N-K,n-k)/C(N,n).
// k outside the support gives 0.
Rational hypergeometric_pmf(std::uint64_t n_total, std::uint64_t k_marked,
                            std::uint64_t n_drawn, std::int64_t k);

// P[X >= k], truncated to the support (k below it gives 1).
Rational hypergeometric_tail_at_least(std::uint64_t n_total, std::uint64_t k_marked,
                                      std::uint64_t n_drawn, std::int64_t k);

// Proportion of the C(2m, m) half/half partitions of a binary sequence whose
// two label ratios differ by at most epsilon.
Rational half_split_concentration(std::span<const int> labels, const Rational& epsilon);

// 99% distribution-free half-width for a mean of trials values spanning
// `range`.
double hoeffding_half_width(std::uint64_t trials, double range = 1.0);

} // namespace fplab
