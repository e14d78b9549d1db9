#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fplab/bitvec.hpp"
#include "fplab/population.hpp"
#include "fplab/rational.hpp"

namespace fplab {

// A single deterministic binary classifier.  Explicit hypotheses label points
// by index; the parametric kinds label by feature geometry.
class Hypothesis {
public:
    static Hypothesis explicit_labels(BitVec labels);
    // Predicts 1 iff x[coord] >= t.
    static Hypothesis threshold(std::size_t coord, double t);
    // Predicts 1 iff lo <= x[coord] <= hi; lo > hi gives the empty concept.
    static Hypothesis interval(std::size_t coord, double lo, double hi);
    // Predicts 1 iff lo[j] <= x[j] <= hi[j] for every coordinate.
    static Hypothesis rectangle(std::vector<double> lo, std::vector<double> hi);

    int predict(const LabeledPoint& p) const;

private:
    Hypothesis() = default;

    enum class Kind { Explicit, Threshold, Interval, Rectangle };
    Kind kind_ = Kind::Explicit;
    BitVec labels_;
    std::size_t coord_ = 0;
    double lo_ = 0;
    double hi_ = 0;
    std::vector<double> lo_box_;
    std::vector<double> hi_box_;
};

enum class ClassKind { ExplicitFinite, Threshold1D, Interval1D, AxisRectangle };

// A family of classifiers identified with the finite set of labelings it
// induces on a population.  declared_vc, when present, is trusted after a
// shattering search fails to contradict it.
class HypothesisClass {
public:
    // labelings must be non-empty, all of one length.
    static HypothesisClass explicit_finite(std::vector<BitVec> labelings,
                                           std::optional<int> declared_vc = std::nullopt);
    static HypothesisClass threshold_1d(std::size_t coord = 0,
                                        std::optional<int> declared_vc = 1);
    static HypothesisClass interval_1d(std::size_t coord = 0,
                                       std::optional<int> declared_vc = 2);
    static HypothesisClass axis_rectangle(std::optional<int> declared_vc = std::nullopt);

    // CSV: one row per hypothesis, N binary columns, no header.
    static HypothesisClass load_explicit(const std::filesystem::path& path,
                                         std::optional<int> declared_vc = std::nullopt);

    ClassKind kind() const noexcept { return kind_; }
    std::size_t coord() const noexcept { return coord_; }
    const std::vector<BitVec>& labelings() const noexcept { return labelings_; }
    std::optional<int> declared_vc() const noexcept { return declared_vc_; }

    std::string describe() const;

private:
    HypothesisClass() = default;

    ClassKind kind_ = ClassKind::ExplicitFinite;
    std::size_t coord_ = 0;
    std::vector<BitVec> labelings_;
    std::optional<int> declared_vc_;
};

// Fraction of points the hypothesis mislabels; one operation realises the
// whole-set, train, remainder and test error rates depending on the multiset
// passed.
Rational error_rate(const Hypothesis& h, std::span<const LabeledPoint> points);

// Prediction vector of h over the whole population.
BitVec induced_labeling(const Hypothesis& h, const FinitePopulation& pop);

// The exact set of distinct labelings the class realises on the population,
// sorted lexicographically.  Parametric kinds sweep boundaries at midpoints
// between consecutive distinct coordinate values plus the two extremes; tied
// values collapse into one dichotomy.
std::vector<BitVec> effective_dichotomies(const HypothesisClass& cls,
                                          const FinitePopulation& pop);

struct GrowthResult {
    std::uint64_t value = 0;
    // False when the subset space was sampled rather than exhausted; the
    // value is then a lower bound.
    bool exact = true;
};

struct GrowthOptions {
    std::size_t exhaustive_max_n = 20; // C(20,10) subsets stay desk-scale
    std::size_t sampled_subsets = 2000;
    std::uint64_t seed = 0;
};

// Maximum number of distinct labelings induced on any size-l subset.
GrowthResult growth_function(const HypothesisClass& cls, std::size_t l,
                             const FinitePopulation& pop, const GrowthOptions& opts = {});

// 1.5 * l^h / h!, evaluated in log-space so large h cannot overflow.
double growth_bound(std::uint64_t l, std::uint64_t h);

// Same quantity as an exact rational, for strict integer comparisons.
Rational growth_bound_exact(std::uint64_t l, std::uint64_t h);

// Size of the largest shattered subset.  With declared_vc set, verifies that
// no subset of size declared_vc + 1 is shattered and returns the declaration;
// finding one is an inconsistency error.
int vc_dimension(const HypothesisClass& cls, const FinitePopulation& pop,
                 const GrowthOptions& opts = {});

} // namespace fplab
