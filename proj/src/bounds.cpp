#include "fplab/bounds.hpp"

#include <cmath>

#include "fplab/error.hpp"

namespace fplab {

const char* to_string(BoundVariant variant) {
    return variant == BoundVariant::WholeSet ? "u" : "uprime";
}

BoundVariant bound_variant_from_string(const std::string& name) {
    if (name == "u") return BoundVariant::WholeSet;
    if (name == "uprime") return BoundVariant::Remainder;
    raise(ErrorKind::Parameter, "unknown bound variant '" + name + "'");
}

const char* to_string(LemmaVersion version) {
    return version == LemmaVersion::V1 ? "v1" : "v2";
}

LemmaVersion lemma_version_from_string(const std::string& name) {
    if (name == "v1") return LemmaVersion::V1;
    if (name == "v2") return LemmaVersion::V2;
    raise(ErrorKind::Parameter, "unknown lemma version '" + name + "'");
}

namespace {

// l > 2/epsilon, tested without rounding: l * epsilon > 2.
bool in_epsilon_regime(std::uint64_t l, const Rational& epsilon) {
    return Rational(static_cast<unsigned long>(l)) * epsilon > 2;
}

} // namespace

void BoundParams::validate() const {
    if (!(epsilon > 0)) {
        raise(ErrorKind::Parameter, "epsilon must be > 0");
    }
    if (k < l) {
        raise(ErrorKind::Parameter, "remainder size k must be >= train size l");
    }
    if (h < 1) {
        raise(ErrorKind::Parameter, "VC dimension h must be >= 1");
    }
    if (!in_epsilon_regime(l, rational_from_double(epsilon))) {
        raise(ErrorKind::Parameter, "train size l must exceed 2/epsilon");
    }
}

namespace {

// log of the polynomial front factor 9 (2l)^h / h!.
double log_front_factor(std::uint64_t l, int h) {
    return std::log(9.0) + static_cast<double>(h) * std::log(2.0 * static_cast<double>(l)) -
           std::lgamma(static_cast<double>(h) + 1.0);
}

} // namespace

double theorem_bound(const BoundParams& params, BoundVariant variant) {
    params.validate();
    double l = static_cast<double>(params.l);
    double factor_sq;
    if (variant == BoundVariant::WholeSet) {
        double factor = 0.5 + l / static_cast<double>(params.k);
        factor_sq = factor * factor;
    } else {
        factor_sq = 0.25;
    }
    double exponent = params.epsilon * params.epsilon * l * factor_sq;
    return std::exp(log_front_factor(params.l, params.h) - exponent);
}

double vapnik_limit_bound(std::uint64_t l, int h, double epsilon) {
    BoundParams params{l, l, h, epsilon}; // k = l only to reuse validation
    params.validate();
    double exponent = epsilon * epsilon * static_cast<double>(l) / 4.0;
    return std::exp(log_front_factor(l, h) - exponent);
}

UPrimeIdentityReport uprime_identity_check(const FinitePopulation& pop,
                                           const HypothesisClass& cls,
                                           std::span<const std::size_t> train_indices) {
    std::size_t n = pop.size();
    std::size_t l = train_indices.size();
    if (l == 0 || l >= n) {
        raise(ErrorKind::Dimension,
              "identity check needs a non-empty train set and a non-empty remainder");
    }
    std::size_t k = n - l;

    BitVec train_mask(n);
    for (std::size_t i : train_indices) {
        if (i >= n) {
            raise(ErrorKind::Dimension, "train index " + std::to_string(i) + " out of range");
        }
        if (train_mask.test(i)) {
            raise(ErrorKind::Dimension, "train index " + std::to_string(i) + " repeated");
        }
        train_mask.set(i);
    }

    UPrimeIdentityReport report;
    report.train_size = l;
    report.remainder_size = k;
    report.exact_equal = true;

    Rational l_over_k(static_cast<unsigned long>(l), static_cast<unsigned long>(k));
    l_over_k.canonicalize();

    for (const BitVec& d : effective_dichotomies(cls, pop)) {
        BitVec wrong = d ^ pop.labels();
        std::size_t a = wrong.count();
        std::size_t b = BitVec::and_count(wrong, train_mask);

        UPrimeIdentityRow row;
        row.u = Rational(static_cast<unsigned long>(a), static_cast<unsigned long>(n));
        row.u.canonicalize();
        row.v_tr = Rational(static_cast<unsigned long>(b), static_cast<unsigned long>(l));
        row.v_tr.canonicalize();
        row.uprime_direct =
            Rational(static_cast<unsigned long>(a - b), static_cast<unsigned long>(k));
        row.uprime_direct.canonicalize();
        row.uprime_formula = row.u + l_over_k * (row.u - row.v_tr);
        row.uprime_formula.canonicalize();
        row.equal = row.uprime_direct == row.uprime_formula;
        if (!row.equal) report.exact_equal = false;
        report.rows.push_back(std::move(row));
    }
    return report;
}

LemmaReport lemma_check(const FinitePopulation& pop, const HypothesisClass& cls,
                        const Rational& epsilon, std::size_t l, LemmaVersion version,
                        DrawMode mode, const RunOptions& opts, std::uint64_t trials,
                        std::uint64_t seed, bool allow_out_of_regime) {
    std::size_t n = pop.size();
    if (l < 1 || 2 * l > n) {
        raise(ErrorKind::Parameter,
              "symmetrisation needs k = N - l >= l >= 1, got l = " + std::to_string(l) +
                  ", N = " + std::to_string(n));
    }
    std::size_t k = n - l;
    if (epsilon <= 0) {
        raise(ErrorKind::Parameter, "epsilon must be > 0");
    }

    LemmaReport report;
    report.version = version;
    report.epsilon = epsilon;
    report.l = l;
    report.k = k;
    report.population_desc = "N=" + std::to_string(n);
    report.class_desc = cls.describe();

    if (!in_epsilon_regime(l, epsilon)) {
        if (!allow_out_of_regime) {
            raise(ErrorKind::Parameter,
                  "l = " + std::to_string(l) + " is not > 2/epsilon; pass the regime override " +
                      "to explore anyway");
        }
        report.out_of_regime = true;
    }

    DrawSpec spec;
    spec.population_size = n;
    spec.draw_size = l;
    spec.mode = mode;
    if (mode == DrawMode::MonteCarlo) {
        spec.trials = trials;
        spec.seed = seed;
    }

    DeviationStatistic statistic = version == LemmaVersion::V1
                                       ? DeviationStatistic::WholeVsTrain
                                       : DeviationStatistic::RemainderVsTrain;
    report.lhs_result = counting_measure(pop, cls, epsilon, statistic, spec, opts);
    report.lhs = report.lhs_result.proportion;

    if (version == LemmaVersion::V1) {
        // (1/2 + l/k) * epsilon
        Rational shift(static_cast<unsigned long>(k + 2 * l), static_cast<unsigned long>(2 * k));
        shift.canonicalize();
        report.rhs_threshold = epsilon * shift;
    } else {
        report.rhs_threshold = epsilon / 2;
    }
    report.rhs_threshold.canonicalize();

    DrawSpec paired_spec = spec;
    if (mode == DrawMode::MonteCarlo) {
        paired_spec.seed = seed + 1; // independent stream for the paired side
    }
    report.rhs_result = paired_counting_measure(pop, cls, report.rhs_threshold, paired_spec, opts);
    report.rhs = Rational(2) * report.rhs_result.proportion;
    report.rhs.canonicalize();

    report.vacuous = report.lhs == 0 && report.rhs == 0;
    report.holds = report.lhs < report.rhs || report.vacuous;
    return report;
}

ConditionalHalfResult conditional_half_check(std::uint64_t k, std::uint64_t red,
                                             std::uint64_t l, const Rational& epsilon) {
    if (!(epsilon > 0) || !in_epsilon_regime(l, epsilon)) {
        raise(ErrorKind::Parameter, "needs epsilon * l / 2 > 1");
    }
    if (l > k) {
        raise(ErrorKind::Parameter, "draw size l must not exceed urn size k");
    }
    if (red > k) {
        raise(ErrorKind::Parameter, "red count must not exceed urn size k");
    }

    // Required red draws: ceil((red/k - eps/2) * l), exactly.
    Rational red_share(static_cast<unsigned long>(red), static_cast<unsigned long>(k));
    red_share.canonicalize();
    Rational threshold = (red_share - epsilon / 2) * Rational(static_cast<unsigned long>(l));
    BigInt t = ceil_to_int(threshold);

    ConditionalHalfResult result;
    if (!t.fits_slong_p()) {
        raise(ErrorKind::Parameter, "tail threshold out of range");
    }
    result.min_red = t.get_si();
    result.probability = hypergeometric_tail_at_least(k, red, l, result.min_red);
    result.exceeds_half = result.probability > Rational(1, 2);
    return result;
}

} // namespace fplab
