#include "fplab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "fplab/draws.hpp"
#include "fplab/error.hpp"
#include "parallel_rng.hpp"

namespace fplab {

namespace {

using detail::block_seed;
using detail::bounded;
using detail::KahanSum;
using detail::kBlockTrials;
using detail::run_blocks;
using detail::uniform_unit;

double kahan_mean(std::span<const double> values) {
    KahanSum sum;
    for (double v : values) sum.add(v);
    return sum.value() / static_cast<double>(values.size());
}

bool all_equal(std::span<const double> values) {
    for (double v : values) {
        if (v != values.front()) return false;
    }
    return true;
}

} // namespace

ErrorVector residuals(const FinitePopulation& pop,
                      const std::function<int(const LabeledPoint&)>& predictor) {
    ErrorVector out;
    out.reserve(pop.size());
    for (const LabeledPoint& p : pop.points()) {
        out.push_back(static_cast<double>(p.label - predictor(p)));
    }
    return out;
}

double finite_pop_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        raise(ErrorKind::Dimension, "correlation inputs differ in length");
    }
    if (a.size() < 2) {
        raise(ErrorKind::Dimension, "correlation needs at least two points");
    }
    if (all_equal(a) || all_equal(b)) {
        raise(ErrorKind::Degenerate, "correlation is undefined for a constant sequence");
    }
    double n = static_cast<double>(a.size());
    double mean_a = kahan_mean(a);
    double mean_b = kahan_mean(b);
    KahanSum cov;
    KahanSum var_a;
    KahanSum var_b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - mean_a;
        double db = b[i] - mean_b;
        cov.add(da * db);
        var_a.add(da * da);
        var_b.add(db * db);
    }
    double rho = (cov.value() / n) /
                 (std::sqrt(var_a.value() / n) * std::sqrt(var_b.value() / n));
    return std::clamp(rho, -1.0, 1.0);
}

DecompositionReport meng_decomposition(std::span<const double> errors,
                                       const InclusionVector& r) {
    std::size_t n = errors.size();
    if (r.size() != n) {
        raise(ErrorKind::Dimension, "inclusion vector length differs from error vector length");
    }
    if (n == 0) {
        raise(ErrorKind::Dimension, "error vector must not be empty");
    }
    std::size_t l = r.ones();
    if (l == 0 || l == n) {
        raise(ErrorKind::Degenerate,
              "inclusion with l = " + std::to_string(l) + " of N = " + std::to_string(n) +
                  " has zero variance; the decomposition is undefined");
    }

    DecompositionReport report;
    report.n = n;
    report.l = l;

    double nd = static_cast<double>(n);
    double ld = static_cast<double>(l);
    double pop_mean = kahan_mean(errors);
    KahanSum sample;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.included(i)) sample.add(errors[i]);
    }
    double sample_mean = sample.value() / ld;
    report.gap_sample_minus_pop = sample_mean - pop_mean;
    report.quantity_factor = std::sqrt((nd - ld) / ld);

    // Both sides are computed through independent summation paths, so the
    // residual genuinely measures the identity rather than echoing it.
    KahanSum var_e;
    KahanSum cov_re;
    double r_mean = ld / nd;
    for (std::size_t i = 0; i < n; ++i) {
        double de = errors[i] - pop_mean;
        var_e.add(de * de);
        double dr = (r.included(i) ? 1.0 : 0.0) - r_mean;
        cov_re.add(dr * de);
    }
    report.sigma_e = std::sqrt(var_e.value() / nd);
    double sigma_r = std::sqrt(r_mean * (1.0 - r_mean));

    if (all_equal(errors) || report.sigma_e == 0.0) {
        report.degenerate = true;
        report.rho = std::numeric_limits<double>::quiet_NaN();
        report.rhs_product = 0.0;
        report.residual = report.gap_sample_minus_pop;
        double scale = std::max(1.0, std::abs(pop_mean));
        if (std::abs(report.gap_sample_minus_pop) > 1e-12 * scale) {
            raise(ErrorKind::Inconsistency,
                  "constant errors must give a zero gap; got " +
                      std::to_string(report.gap_sample_minus_pop));
        }
        return report;
    }

    report.rho = std::clamp((cov_re.value() / nd) / (sigma_r * report.sigma_e), -1.0, 1.0);
    report.rhs_product = report.rho * report.quantity_factor * report.sigma_e;
    report.residual = report.gap_sample_minus_pop - report.rhs_product;
    return report;
}

// ------------------------------------------------------------------ schemes

InclusionScheme InclusionScheme::fixed(InclusionVector r) {
    InclusionScheme s;
    s.kind_ = Kind::Fixed;
    s.fixed_ = std::move(r);
    return s;
}

InclusionScheme InclusionScheme::uniform_without_replacement(std::size_t l) {
    if (l < 1) {
        raise(ErrorKind::Scheme, "uniform scheme needs l >= 1");
    }
    InclusionScheme s;
    s.kind_ = Kind::Uniform;
    s.l_ = l;
    return s;
}

InclusionScheme InclusionScheme::bernoulli_propensity(Propensity pi) {
    if (!pi) {
        raise(ErrorKind::Scheme, "propensity function must be set");
    }
    InclusionScheme s;
    s.kind_ = Kind::Bernoulli;
    s.pi_ = std::move(pi);
    return s;
}

namespace {

// Propensities evaluated and validated once per population.
std::vector<double> propensities(const InclusionScheme& scheme, const FinitePopulation& pop) {
    std::vector<double> pi;
    pi.reserve(pop.size());
    for (const LabeledPoint& p : pop.points()) {
        double value = scheme.propensity()(p.features);
        if (!(value > 0.0) || value > 1.0) {
            raise(ErrorKind::Scheme, "propensity at point " + std::to_string(p.index) +
                                         " is " + std::to_string(value) +
                                         ", outside (0, 1]");
        }
        pi.push_back(value);
    }
    return pi;
}

InclusionVector draw_uniform(std::size_t n, std::size_t l, std::mt19937_64& rng,
                             std::vector<std::size_t>& idx) {
    BitVec bits(n);
    for (std::size_t j = 0; j < l; ++j) {
        std::size_t r = j + static_cast<std::size_t>(bounded(rng, n - j));
        std::swap(idx[j], idx[r]);
        bits.set(idx[j]);
    }
    return InclusionVector(std::move(bits));
}

InclusionVector draw_bernoulli(std::span<const double> pi, std::mt19937_64& rng) {
    BitVec bits(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (uniform_unit(rng) < pi[i]) bits.set(i);
    }
    return InclusionVector(std::move(bits));
}

} // namespace

InclusionVector sample_inclusion(const InclusionScheme& scheme, const FinitePopulation& pop,
                                 std::uint64_t seed) {
    switch (scheme.kind()) {
        case InclusionScheme::Kind::Fixed: {
            if (scheme.fixed_vector().size() != pop.size()) {
                raise(ErrorKind::Dimension,
                      "fixed inclusion vector length differs from population size");
            }
            return scheme.fixed_vector();
        }
        case InclusionScheme::Kind::Uniform: {
            if (scheme.draw_size() > pop.size()) {
                raise(ErrorKind::Scheme, "uniform draw size exceeds population size");
            }
            std::mt19937_64 rng(detail::splitmix64(seed));
            std::vector<std::size_t> idx(pop.size());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            return draw_uniform(pop.size(), scheme.draw_size(), rng, idx);
        }
        case InclusionScheme::Kind::Bernoulli: {
            std::vector<double> pi = propensities(scheme, pop);
            std::mt19937_64 rng(detail::splitmix64(seed));
            return draw_bernoulli(pi, rng);
        }
    }
    raise(ErrorKind::Scheme, "unknown inclusion scheme");
}

// ---------------------------------------------------------------- estimators

double horvitz_thompson(std::span<const double> values, const InclusionVector& r,
                        std::span<const double> inclusion_probs) {
    std::size_t n = values.size();
    if (r.size() != n || inclusion_probs.size() != n) {
        raise(ErrorKind::Dimension, "estimator inputs differ in length");
    }
    if (r.ones() == 0) {
        raise(ErrorKind::Degenerate, "estimator is undefined for an empty sample");
    }
    KahanSum sum;
    for (std::size_t i = 0; i < n; ++i) {
        if (!r.included(i)) continue;
        double pi = inclusion_probs[i];
        if (!(pi > 0.0) || pi > 1.0) {
            raise(ErrorKind::Estimator, "inclusion probability at included point " +
                                            std::to_string(i) + " is outside (0, 1]");
        }
        sum.add(values[i] / pi);
    }
    return sum.value() / static_cast<double>(n);
}

Rational horvitz_thompson_exact(std::span<const Rational> values, const InclusionVector& r,
                                std::span<const Rational> inclusion_probs) {
    std::size_t n = values.size();
    if (r.size() != n || inclusion_probs.size() != n) {
        raise(ErrorKind::Dimension, "estimator inputs differ in length");
    }
    if (r.ones() == 0) {
        raise(ErrorKind::Degenerate, "estimator is undefined for an empty sample");
    }
    Rational sum(0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!r.included(i)) continue;
        const Rational& pi = inclusion_probs[i];
        if (pi <= 0 || pi > 1) {
            raise(ErrorKind::Estimator, "inclusion probability at included point " +
                                            std::to_string(i) + " is outside (0, 1]");
        }
        sum += values[i] / pi;
    }
    sum /= Rational(static_cast<unsigned long>(n));
    sum.canonicalize();
    return sum;
}

// ------------------------------------------------------------- gap sampling

GapEstimate mc_expected_gap(const InclusionScheme& scheme, const FinitePopulation& pop,
                            std::span<const double> errors, std::uint64_t trials,
                            std::uint64_t seed, int workers, std::vector<GapTraceRow>* trace) {
    if (trials < 1) {
        raise(ErrorKind::Parameter, "gap sampling needs trials >= 1");
    }
    std::size_t n = pop.size();
    if (errors.size() != n) {
        raise(ErrorKind::Dimension, "error vector length differs from population size");
    }

    GapEstimate estimate;
    estimate.trials = trials;

    // Schemes that can only produce full or empty samples have no gap
    // distribution; the gap is identically zero and reported as degenerate.
    std::vector<double> pi;
    switch (scheme.kind()) {
        case InclusionScheme::Kind::Fixed: {
            std::size_t l = scheme.fixed_vector().ones();
            if (scheme.fixed_vector().size() != n) {
                raise(ErrorKind::Dimension,
                      "fixed inclusion vector length differs from population size");
            }
            if (l == 0) {
                raise(ErrorKind::Degenerate, "fixed empty sample has no mean error gap");
            }
            if (l == n) {
                estimate.degenerate = true;
                return estimate;
            }
            break;
        }
        case InclusionScheme::Kind::Uniform: {
            if (scheme.draw_size() > n) {
                raise(ErrorKind::Scheme, "uniform draw size exceeds population size");
            }
            if (scheme.draw_size() == n) {
                estimate.degenerate = true;
                return estimate;
            }
            break;
        }
        case InclusionScheme::Kind::Bernoulli: {
            pi = propensities(scheme, pop);
            if (std::all_of(pi.begin(), pi.end(), [](double p) { return p == 1.0; })) {
                estimate.degenerate = true;
                return estimate;
            }
            break;
        }
    }

    double pop_mean = kahan_mean(errors);
    auto [min_it, max_it] = std::minmax_element(errors.begin(), errors.end());
    double range = *max_it - *min_it;

    constexpr std::uint64_t kMaxConsecutiveDegenerate = 100'000;

    std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    std::vector<double> gap_partial(blocks, 0.0);
    std::vector<double> abs_partial(blocks, 0.0);
    std::vector<std::uint64_t> degenerate_partial(blocks, 0);
    if (trace) trace->assign(trials, GapTraceRow{});

    run_blocks(blocks, workers, [&](std::uint64_t b) {
        std::uint64_t count = std::min(kBlockTrials, trials - b * kBlockTrials);
        std::mt19937_64 rng(block_seed(seed, b));
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        KahanSum gaps;
        KahanSum abs_gaps;
        std::uint64_t degenerate_draws = 0;
        for (std::uint64_t t = 0; t < count; ++t) {
            InclusionVector r;
            std::uint64_t rejected = 0;
            for (;;) {
                switch (scheme.kind()) {
                    case InclusionScheme::Kind::Fixed:
                        r = scheme.fixed_vector();
                        break;
                    case InclusionScheme::Kind::Uniform:
                        r = draw_uniform(n, scheme.draw_size(), rng, idx);
                        break;
                    case InclusionScheme::Kind::Bernoulli:
                        r = draw_bernoulli(pi, rng);
                        break;
                }
                std::size_t l = r.ones();
                if (l > 0 && l < n) break;
                ++degenerate_draws;
                if (++rejected >= kMaxConsecutiveDegenerate) {
                    raise(ErrorKind::Degenerate,
                          "scheme produced only full or empty samples");
                }
            }
            std::size_t l = r.ones();
            KahanSum sample;
            for (std::size_t i = 0; i < n; ++i) {
                if (r.included(i)) sample.add(errors[i]);
            }
            double gap = sample.value() / static_cast<double>(l) - pop_mean;
            gaps.add(gap);
            abs_gaps.add(std::abs(gap));
            if (trace) {
                (*trace)[b * kBlockTrials + t] = GapTraceRow{b * kBlockTrials + t, l, gap};
            }
        }
        gap_partial[b] = gaps.value();
        abs_partial[b] = abs_gaps.value();
        degenerate_partial[b] = degenerate_draws;
    });

    // Sequential fold in block order keeps the result independent of worker
    // scheduling.
    KahanSum gap_total;
    KahanSum abs_total;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        gap_total.add(gap_partial[b]);
        abs_total.add(abs_partial[b]);
    }
    estimate.mean_gap = gap_total.value() / static_cast<double>(trials);
    estimate.mean_abs_gap = abs_total.value() / static_cast<double>(trials);
    estimate.ci_half_width = hoeffding_half_width(trials, range);
    estimate.degenerate_draws =
        std::accumulate(degenerate_partial.begin(), degenerate_partial.end(), std::uint64_t{0});
    return estimate;
}

} // namespace fplab
