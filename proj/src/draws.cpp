#include "fplab/draws.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>

#include "fplab/error.hpp"
#include "parallel_rng.hpp"

namespace fplab {

const char* to_string(DrawMode mode) {
    return mode == DrawMode::Exhaustive ? "exhaustive" : "monte_carlo";
}

const char* to_string(DeviationStatistic stat) {
    return stat == DeviationStatistic::WholeVsTrain ? "u_minus_vtr" : "uprime_minus_vtr";
}

DeviationStatistic deviation_statistic_from_string(const std::string& name) {
    if (name == "u_minus_vtr") return DeviationStatistic::WholeVsTrain;
    if (name == "uprime_minus_vtr") return DeviationStatistic::RemainderVsTrain;
    raise(ErrorKind::Parameter, "unknown statistic '" + name + "'");
}

DrawSpec DrawSpec::exhaustive(std::size_t n, std::size_t l) {
    DrawSpec spec;
    spec.population_size = n;
    spec.draw_size = l;
    spec.mode = DrawMode::Exhaustive;
    spec.validate();
    return spec;
}

DrawSpec DrawSpec::monte_carlo(std::size_t n, std::size_t l, std::uint64_t trials,
                               std::uint64_t seed) {
    DrawSpec spec;
    spec.population_size = n;
    spec.draw_size = l;
    spec.mode = DrawMode::MonteCarlo;
    spec.trials = trials;
    spec.seed = seed;
    spec.validate();
    return spec;
}

void DrawSpec::validate() const {
    if (draw_size < 1 || draw_size > population_size) {
        raise(ErrorKind::Dimension,
              "draw size " + std::to_string(draw_size) + " outside 1.." +
                  std::to_string(population_size));
    }
    if (mode == DrawMode::MonteCarlo && trials < 1) {
        raise(ErrorKind::Parameter, "monte-carlo mode needs trials >= 1");
    }
}

double hoeffding_half_width(std::uint64_t trials, double range) {
    // Two-sided distribution-free bound at the 99% level.
    constexpr double kAlpha = 0.01;
    return range * std::sqrt(std::log(2.0 / kAlpha) / (2.0 * static_cast<double>(trials)));
}

// ------------------------------------------------------------------ internals

namespace {

using detail::block_seed;
using detail::bounded;
using detail::kBlockTrials;
using detail::run_blocks;

// Mismatch masks of every effective dichotomy against the true labels; the
// exact sup over the class reduces to scanning these.
struct PreparedClass {
    std::size_t n = 0;
    std::vector<BitVec> wrong;
    std::vector<std::uint64_t> whole_mismatches;
};

PreparedClass prepare_class(const FinitePopulation& pop, const HypothesisClass& cls) {
    PreparedClass pc;
    pc.n = pop.size();
    for (BitVec& d : effective_dichotomies(cls, pop)) {
        BitVec w = d ^ pop.labels();
        pc.whole_mismatches.push_back(w.count());
        pc.wrong.push_back(std::move(w));
    }
    return pc;
}

void build_mask(BitVec& mask, std::span<const std::size_t> indices) {
    mask.clear();
    for (std::size_t i : indices) mask.set(i);
}

// floor(q * scale) + 1, i.e. the smallest integer numerator that makes the
// deviation strictly exceed q; capped so impossible cutoffs short-circuit.
std::uint64_t strict_numerator_cutoff(const Rational& q, std::uint64_t scale,
                                      std::uint64_t max_numerator) {
    Rational scaled = q * Rational(static_cast<unsigned long>(scale));
    BigInt cut = floor_to_int(scaled) + 1;
    if (cut > max_numerator) return std::numeric_limits<std::uint64_t>::max();
    return cut.get_ui();
}

// sup_d |deviation_d| > epsilon, in integer form.  With a = whole-set
// mismatches and b = in-draw mismatches, both statistics share the same
// numerator |a l - b N|:
//   |u - v_tr|   = |a l - b N| / (N l)
//   |u' - v_tr|  = |a l - b N| / (k l)      (k = N - l)
struct DeviationPredicate {
    const PreparedClass* pc = nullptr;
    std::vector<std::int64_t> al; // whole_mismatches[d] * l, precomputed
    std::uint64_t n = 0;
    std::uint64_t cutoff = 0; // min |a l - b N| that counts as a violation

    DeviationPredicate(const PreparedClass& prepared, std::uint64_t l, std::uint64_t cut)
        : pc(&prepared), n(prepared.n), cutoff(cut) {
        al.reserve(pc->whole_mismatches.size());
        for (std::uint64_t a : pc->whole_mismatches) {
            al.push_back(static_cast<std::int64_t>(a * l));
        }
    }

    bool operator()(const BitVec& draw_mask) const {
        for (std::size_t d = 0; d < al.size(); ++d) {
            std::int64_t bn =
                static_cast<std::int64_t>(BitVec::and_count(pc->wrong[d], draw_mask) * n);
            std::uint64_t dev = static_cast<std::uint64_t>(std::abs(al[d] - bn));
            if (dev >= cutoff) return true;
        }
        return false;
    }
};

// sup_d |v_te - v_tr| > threshold: numerator |b_test - b_train| over l.
struct PairedPredicate {
    const PreparedClass* pc = nullptr;
    std::uint64_t cutoff = 0; // min |b_test - b_train| that counts

    bool operator()(const BitVec& train_mask, const BitVec& test_mask) const {
        for (const BitVec& w : pc->wrong) {
            std::int64_t bs = static_cast<std::int64_t>(BitVec::and_count(w, train_mask));
            std::int64_t bt = static_cast<std::int64_t>(BitVec::and_count(w, test_mask));
            std::uint64_t dev = static_cast<std::uint64_t>(std::abs(bt - bs));
            if (dev >= cutoff) return true;
        }
        return false;
    }
};

std::uint64_t checked_exhaustive_total(std::size_t n, std::size_t l, std::uint64_t budget) {
    BigInt total = binomial(n, l);
    if (total > budget) {
        raise(ErrorKind::Budget, "C(" + std::to_string(n) + "," + std::to_string(l) + ") = " +
                                     total.get_str() + " exceeds enumeration budget " +
                                     std::to_string(budget) + "; use monte-carlo mode");
    }
    return total.get_ui();
}

template <typename Pred>
std::uint64_t exhaustive_bad(std::size_t n, std::size_t l, std::uint64_t total, int workers,
                             const Pred& pred) {
    std::uint64_t chunks = workers > 1
                               ? std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), total)
                               : 1;
    std::vector<std::uint64_t> bad(chunks, 0);
    run_blocks(chunks, workers, [&](std::uint64_t c) {
        std::uint64_t begin = total / chunks * c + std::min<std::uint64_t>(c, total % chunks);
        std::uint64_t end = total / chunks * (c + 1) + std::min<std::uint64_t>(c + 1, total % chunks);
        if (begin >= end) return;
        SubsetEnumerator it(n, l, begin);
        BitVec mask(n);
        std::uint64_t local = 0;
        for (std::uint64_t r = begin; r < end; ++r) {
            build_mask(mask, it.current());
            if (pred(mask)) ++local;
            it.advance();
        }
        bad[c] = local;
    });
    return std::accumulate(bad.begin(), bad.end(), std::uint64_t{0});
}

template <typename Pred>
std::uint64_t monte_carlo_bad(std::size_t n, std::size_t l, std::uint64_t trials,
                              std::uint64_t seed, int workers, const Pred& pred) {
    std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    std::vector<std::uint64_t> bad(blocks, 0);
    run_blocks(blocks, workers, [&](std::uint64_t b) {
        std::uint64_t count = std::min(kBlockTrials, trials - b * kBlockTrials);
        std::mt19937_64 rng(block_seed(seed, b));
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        BitVec mask(n);
        std::uint64_t local = 0;
        for (std::uint64_t t = 0; t < count; ++t) {
            // Partial Fisher-Yates; starting from the previous trial's
            // permutation keeps every draw uniform.
            mask.clear();
            for (std::size_t j = 0; j < l; ++j) {
                std::size_t r = j + static_cast<std::size_t>(bounded(rng, n - j));
                std::swap(idx[j], idx[r]);
                mask.set(idx[j]);
            }
            if (pred(mask)) ++local;
        }
        bad[b] = local;
    });
    return std::accumulate(bad.begin(), bad.end(), std::uint64_t{0});
}

template <typename Pred2>
std::uint64_t paired_exhaustive_bad(std::size_t n, std::size_t l, std::uint64_t outer,
                                    int workers, const Pred2& pred) {
    std::uint64_t chunks = workers > 1
                               ? std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), outer)
                               : 1;
    std::vector<std::uint64_t> bad(chunks, 0);
    run_blocks(chunks, workers, [&](std::uint64_t c) {
        std::uint64_t begin = outer / chunks * c + std::min<std::uint64_t>(c, outer % chunks);
        std::uint64_t end = outer / chunks * (c + 1) + std::min<std::uint64_t>(c + 1, outer % chunks);
        if (begin >= end) return;
        SubsetEnumerator train_it(n, l, begin);
        BitVec train_mask(n);
        BitVec test_mask(n);
        std::vector<std::size_t> complement;
        std::vector<std::size_t> test_indices(l);
        std::uint64_t local = 0;
        for (std::uint64_t r = begin; r < end; ++r) {
            const auto& train = train_it.current();
            build_mask(train_mask, train);
            complement.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (!train_mask.test(i)) complement.push_back(i);
            }
            SubsetEnumerator test_it(complement.size(), l);
            do {
                const auto& pos = test_it.current();
                for (std::size_t j = 0; j < l; ++j) test_indices[j] = complement[pos[j]];
                build_mask(test_mask, test_indices);
                if (pred(train_mask, test_mask)) ++local;
            } while (test_it.advance());
            train_it.advance();
        }
        bad[c] = local;
    });
    return std::accumulate(bad.begin(), bad.end(), std::uint64_t{0});
}

template <typename Pred2>
std::uint64_t paired_monte_carlo_bad(std::size_t n, std::size_t l, std::uint64_t trials,
                                     std::uint64_t seed, int workers, const Pred2& pred) {
    std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    std::vector<std::uint64_t> bad(blocks, 0);
    run_blocks(blocks, workers, [&](std::uint64_t b) {
        std::uint64_t count = std::min(kBlockTrials, trials - b * kBlockTrials);
        std::mt19937_64 rng(block_seed(seed, b));
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        BitVec train_mask(n);
        BitVec test_mask(n);
        std::uint64_t local = 0;
        for (std::uint64_t t = 0; t < count; ++t) {
            // One partial Fisher-Yates pass of 2l positions: the first l are
            // the train draw, the next l the test draw from the remainder.
            train_mask.clear();
            test_mask.clear();
            for (std::size_t j = 0; j < 2 * l; ++j) {
                std::size_t r = j + static_cast<std::size_t>(bounded(rng, n - j));
                std::swap(idx[j], idx[r]);
                (j < l ? train_mask : test_mask).set(idx[j]);
            }
            if (pred(train_mask, test_mask)) ++local;
        }
        bad[b] = local;
    });
    return std::accumulate(bad.begin(), bad.end(), std::uint64_t{0});
}

CountingMeasureResult finish_result(std::uint64_t bad, std::uint64_t total, DrawMode mode,
                                    std::uint64_t seed) {
    CountingMeasureResult result;
    result.bad = bad;
    result.total = total;
    result.proportion =
        Rational(static_cast<unsigned long>(bad), static_cast<unsigned long>(total));
    result.proportion.canonicalize();
    result.estimate = to_double(result.proportion);
    result.mode = mode;
    if (mode == DrawMode::MonteCarlo) {
        result.ci_half_width = hoeffding_half_width(total);
        result.seed = seed;
    }
    return result;
}

} // namespace

// ---------------------------------------------------------------- public ops

CountingMeasureResult counting_measure(const FinitePopulation& pop, const HypothesisClass& cls,
                                       const Rational& epsilon, DeviationStatistic statistic,
                                       const DrawSpec& spec, const RunOptions& opts) {
    spec.validate();
    if (spec.population_size != pop.size()) {
        raise(ErrorKind::Dimension, "draw spec population size " +
                                        std::to_string(spec.population_size) +
                                        " differs from population size " +
                                        std::to_string(pop.size()));
    }
    if (epsilon <= 0) {
        raise(ErrorKind::Parameter, "epsilon must be > 0");
    }
    std::size_t n = pop.size();
    std::size_t l = spec.draw_size;
    if (statistic == DeviationStatistic::RemainderVsTrain && l == n) {
        raise(ErrorKind::EmptySet, "remainder is empty at l = N; the statistic is undefined");
    }

    PreparedClass pc = prepare_class(pop, cls);
    std::uint64_t scale = statistic == DeviationStatistic::WholeVsTrain
                              ? static_cast<std::uint64_t>(n) * l
                              : static_cast<std::uint64_t>(n - l) * l;
    DeviationPredicate pred(pc, l,
                            strict_numerator_cutoff(epsilon, scale,
                                                    static_cast<std::uint64_t>(n) * l));

    if (spec.mode == DrawMode::Exhaustive) {
        std::uint64_t total = checked_exhaustive_total(n, l, opts.budget);
        std::uint64_t bad = exhaustive_bad(n, l, total, opts.workers, pred);
        return finish_result(bad, total, DrawMode::Exhaustive, 0);
    }
    std::uint64_t bad = monte_carlo_bad(n, l, spec.trials, spec.seed, opts.workers, pred);
    return finish_result(bad, spec.trials, DrawMode::MonteCarlo, spec.seed);
}

PairedDrawResult paired_counting_measure(const FinitePopulation& pop, const HypothesisClass& cls,
                                         const Rational& threshold, const DrawSpec& spec,
                                         const RunOptions& opts) {
    spec.validate();
    if (spec.population_size != pop.size()) {
        raise(ErrorKind::Dimension, "draw spec population size " +
                                        std::to_string(spec.population_size) +
                                        " differs from population size " +
                                        std::to_string(pop.size()));
    }
    if (threshold <= 0) {
        raise(ErrorKind::Parameter, "threshold must be > 0");
    }
    std::size_t n = pop.size();
    std::size_t l = spec.draw_size;
    if (2 * l > n) {
        raise(ErrorKind::Dimension, "paired draws need 2l <= N, got l = " + std::to_string(l) +
                                        ", N = " + std::to_string(n));
    }

    PreparedClass pc = prepare_class(pop, cls);
    PairedPredicate pred{&pc, strict_numerator_cutoff(threshold, l, l)};

    if (spec.mode == DrawMode::Exhaustive) {
        BigInt outer = binomial(n, l);
        BigInt inner = binomial(n - l, l);
        BigInt total = outer * inner;
        if (total > opts.budget) {
            raise(ErrorKind::Budget,
                  "C(N,l) * C(N-l,l) = " + total.get_str() + " exceeds enumeration budget " +
                      std::to_string(opts.budget) + "; use monte-carlo mode");
        }
        std::uint64_t bad =
            paired_exhaustive_bad(n, l, outer.get_ui(), opts.workers, pred);
        return finish_result(bad, total.get_ui(), DrawMode::Exhaustive, 0);
    }
    std::uint64_t bad =
        paired_monte_carlo_bad(n, l, spec.trials, spec.seed, opts.workers, pred);
    return finish_result(bad, spec.trials, DrawMode::MonteCarlo, spec.seed);
}

// ----------------------------------------------------------- hypergeometrics

namespace {

void check_urn(std::uint64_t n_total, std::uint64_t k_marked, std::uint64_t n_drawn) {
    if (k_marked > n_total) {
        raise(ErrorKind::Parameter, "marked count exceeds urn size");
    }
    if (n_drawn > n_total) {
        raise(ErrorKind::Parameter, "draw count exceeds urn size");
    }
}

} // namespace

Rational hypergeometric_pmf(std::uint64_t n_total, std::uint64_t k_marked,
                            std::uint64_t n_drawn, std::int64_t k) {
    check_urn(n_total, k_marked, n_drawn);
    std::int64_t lo = static_cast<std::int64_t>(n_drawn) -
                      static_cast<std::int64_t>(n_total - k_marked);
    if (lo < 0) lo = 0;
    std::int64_t hi = static_cast<std::int64_t>(std::min(k_marked, n_drawn));
    if (k < lo || k > hi) return Rational(0);
    std::uint64_t ku = static_cast<std::uint64_t>(k);
    Rational p(binomial(k_marked, ku) * binomial(n_total - k_marked, n_drawn - ku),
               binomial(n_total, n_drawn));
    p.canonicalize();
    return p;
}

Rational hypergeometric_tail_at_least(std::uint64_t n_total, std::uint64_t k_marked,
                                      std::uint64_t n_drawn, std::int64_t k) {
    check_urn(n_total, k_marked, n_drawn);
    std::int64_t lo = static_cast<std::int64_t>(n_drawn) -
                      static_cast<std::int64_t>(n_total - k_marked);
    if (lo < 0) lo = 0;
    std::int64_t hi = static_cast<std::int64_t>(std::min(k_marked, n_drawn));
    if (k <= lo) return Rational(1);
    if (k > hi) return Rational(0);
    Rational sum(0);
    for (std::int64_t j = k; j <= hi; ++j) {
        sum += hypergeometric_pmf(n_total, k_marked, n_drawn, j);
    }
    sum.canonicalize();
    return sum;
}

Rational half_split_concentration(std::span<const int> labels, const Rational& epsilon) {
    if (labels.empty() || labels.size() % 2 != 0) {
        raise(ErrorKind::Dimension, "half-split needs an even number of labels, got " +
                                        std::to_string(labels.size()));
    }
    if (epsilon < 0) {
        raise(ErrorKind::Parameter, "epsilon must be >= 0");
    }
    std::uint64_t ones = 0;
    for (int label : labels) {
        if (label != 0 && label != 1) {
            raise(ErrorKind::Schema, "labels must be binary");
        }
        ones += static_cast<std::uint64_t>(label);
    }
    std::uint64_t m = labels.size() / 2;

    // With j ones in the first half, the ratio difference is |2j - K| / m;
    // the qualifying proportion is a hypergeometric mass.
    Rational sum(0);
    std::int64_t lo = static_cast<std::int64_t>(m) - static_cast<std::int64_t>(2 * m - ones);
    if (lo < 0) lo = 0;
    std::int64_t hi = static_cast<std::int64_t>(std::min(ones, m));
    for (std::int64_t j = lo; j <= hi; ++j) {
        std::int64_t dev = 2 * j - static_cast<std::int64_t>(ones);
        if (dev < 0) dev = -dev;
        // |2j - K| / m <= eps  <=>  |2j - K| * den <= num * m
        if (BigInt(dev) * epsilon.get_den() <= epsilon.get_num() * BigInt(static_cast<unsigned long>(m))) {
            sum += hypergeometric_pmf(2 * m, ones, m, j);
        }
    }
    sum.canonicalize();
    return sum;
}

} // namespace fplab
