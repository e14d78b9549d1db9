#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fplab/population.hpp"
#include "fplab/rational.hpp"

namespace fplab {

// Signed residuals y_i - f(x_i) over the whole population.
using ErrorVector = std::vector<double>;

ErrorVector residuals(const FinitePopulation& pop,
                      const std::function<int(const LabeledPoint&)>& predictor);

// Pearson correlation with 1/N-normalised moments.  Constant input is a
// degenerate-moment error.
double finite_pop_correlation(std::span<const double> a, std::span<const double> b);

struct DecompositionReport {
    double rho = 0;             // NaN when degenerate
    double sigma_e = 0;         // population std of the errors, 1/N moments
    double quantity_factor = 0; // sqrt((N - l) / l)
    double gap_sample_minus_pop = 0;
    double rhs_product = 0;     // rho * factor * sigma_e
    double residual = 0;        // gap - rhs_product
    bool degenerate = false;    // sigma_e = 0
    std::size_t n = 0;
    std::size_t l = 0;
};

// Splits the sample-vs-population mean error gap into correlation, quantity
// and variation factors:
//   mean(E | R=1) - mean(E) = rho_{R,E} * sqrt((N-l)/l) * sigma_E.
// The identity is algebraic under 1/N moments; residual stays at rounding
// level.  Requires 0 < l < N (otherwise sigma_R = 0).
DecompositionReport meng_decomposition(std::span<const double> errors,
                                       const InclusionVector& r);

// How inclusion indicators arise: a fixed vector, a uniform size-l draw, or
// independent feature-driven bernoulli draws with propensities in (0,1].
class InclusionScheme {
public:
    using Propensity = std::function<double(std::span<const double>)>;

    enum class Kind { Fixed, Uniform, Bernoulli };

    static InclusionScheme fixed(InclusionVector r);
    static InclusionScheme uniform_without_replacement(std::size_t l);
    static InclusionScheme bernoulli_propensity(Propensity pi);

    Kind kind() const noexcept { return kind_; }
    const InclusionVector& fixed_vector() const noexcept { return fixed_; }
    std::size_t draw_size() const noexcept { return l_; }
    const Propensity& propensity() const noexcept { return pi_; }

private:
    InclusionScheme() = default;

    Kind kind_ = Kind::Fixed;
    InclusionVector fixed_;
    std::size_t l_ = 0;
    Propensity pi_;
};

// Draws one inclusion vector; deterministic per seed.
InclusionVector sample_inclusion(const InclusionScheme& scheme,
                                 const FinitePopulation& pop, std::uint64_t seed);

// (1/N) sum over included points of v_i / pi_i: the inverse-probability
// weighted estimate of the population mean.
double horvitz_thompson(std::span<const double> values, const InclusionVector& r,
                        std::span<const double> inclusion_probs);

// Exact-arithmetic variant used by enumeration-based unbiasedness checks.
Rational horvitz_thompson_exact(std::span<const Rational> values, const InclusionVector& r,
                                std::span<const Rational> inclusion_probs);

struct GapTraceRow {
    std::uint64_t trial = 0;
    std::size_t l_drawn = 0;
    double gap = 0;
};

struct GapEstimate {
    double mean_gap = 0;
    double mean_abs_gap = 0;
    double ci_half_width = 0;        // 99% distribution-free, scaled by range
    std::uint64_t trials = 0;
    std::uint64_t degenerate_draws = 0; // resampled l in {0, N} draws
    bool degenerate = false;            // scheme can only produce full/empty samples
};

// Seeded monte-carlo distribution of the sample-minus-population mean error
// gap under repeated inclusion draws.  Draws with l in {0, N} are resampled
// and counted.  Optionally records one trace row per kept trial.
GapEstimate mc_expected_gap(const InclusionScheme& scheme, const FinitePopulation& pop,
                            std::span<const double> errors, std::uint64_t trials,
                            std::uint64_t seed, int workers = 1,
                            std::vector<GapTraceRow>* trace = nullptr);

} // namespace fplab
