#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fplab/draws.hpp"
#include "fplab/hypotheses.hpp"
#include "fplab/population.hpp"
#include "fplab/rational.hpp"

namespace fplab {

// Parameters of the deviation bounds: train size l, remainder size k, VC
// dimension h, cutoff epsilon.  Valid regime: epsilon > 0, k >= l > 2/epsilon.
struct BoundParams {
    std::uint64_t l = 0;
    std::uint64_t k = 0;
    int h = 1;
    double epsilon = 0;

    void validate() const;
};

enum class BoundVariant { WholeSet, Remainder }; // u | uprime

const char* to_string(BoundVariant variant);
BoundVariant bound_variant_from_string(const std::string& name);

// 9 (2l)^h / h! * exp(-eps^2 l (1/2 + l/k)^2)   for the whole-set deviation,
// 9 (2l)^h / h! * exp(-eps^2 l / 4)             for the remainder deviation.
// Both evaluated in log-space.
double theorem_bound(const BoundParams& params, BoundVariant variant);

// The k -> infinity limit of the whole-set bound: 9 (2l)^h/h! exp(-eps^2 l/4),
// the classical with-replacement form.
double vapnik_limit_bound(std::uint64_t l, int h, double epsilon);

struct UPrimeIdentityRow {
    Rational u;              // whole-set error
    Rational v_tr;           // train error
    Rational uprime_direct;  // remainder error counted directly
    Rational uprime_formula; // u + (l/k)(u - v_tr)
    bool equal = false;
};

struct UPrimeIdentityReport {
    std::vector<UPrimeIdentityRow> rows; // one per effective dichotomy
    bool exact_equal = false;            // all rows equal
    std::size_t train_size = 0;
    std::size_t remainder_size = 0;
};

// Verifies, dichotomy by dichotomy, that the remainder error computed
// directly equals the algebraic rearrangement through u and v_tr.
UPrimeIdentityReport uprime_identity_check(const FinitePopulation& pop,
                                           const HypothesisClass& cls,
                                           std::span<const std::size_t> train_indices);

enum class LemmaVersion { V1, V2 };

const char* to_string(LemmaVersion version);
LemmaVersion lemma_version_from_string(const std::string& name);

struct LemmaReport {
    LemmaVersion version = LemmaVersion::V1;
    Rational lhs;           // deviation proportion over draws
    Rational rhs;           // 2 x paired proportion
    Rational rhs_threshold; // cutoff used inside the paired measure
    Rational epsilon;
    std::size_t l = 0;
    std::size_t k = 0;
    bool holds = false;         // lhs < rhs, or both exactly zero
    bool vacuous = false;       // lhs = rhs = 0
    bool out_of_regime = false; // run under the override flag
    std::string population_desc;
    std::string class_desc;
    CountingMeasureResult lhs_result;
    PairedDrawResult rhs_result;
};

// Checks one symmetrisation inequality instance.
//   V1:  P[sup |u - v_tr| > eps]      vs  2 P[sup |v_te - v_tr| > (1/2 + l/k) eps]
//   V2:  P[sup |u' - v_tr| > eps]     vs  2 P[sup |v_te - v_tr| > eps / 2]
// Regime k = N - l >= l and l > 2/eps is enforced unless allow_out_of_regime;
// results are then flagged.
LemmaReport lemma_check(const FinitePopulation& pop, const HypothesisClass& cls,
                        const Rational& epsilon, std::size_t l, LemmaVersion version,
                        DrawMode mode, const RunOptions& opts = {},
                        std::uint64_t trials = 0, std::uint64_t seed = 0,
                        bool allow_out_of_regime = false);

struct ConditionalHalfResult {
    Rational probability;
    bool exceeds_half = false;
    std::int64_t min_red = 0; // the tail's lower summation point
};

// Probability of drawing at least ceil((red/k - eps/2) * l) red balls in l
// draws without replacement from an urn of k balls with `red` red ones.
// Requires eps*l/2 > 1 and l <= k.
ConditionalHalfResult conditional_half_check(std::uint64_t k, std::uint64_t red,
                                             std::uint64_t l, const Rational& epsilon);

} // namespace fplab
