#include "fplab/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "fplab/error.hpp"
#include "fplab/subsets.hpp"

namespace fplab {

// ---------------------------------------------------------------- Hypothesis

Hypothesis Hypothesis::explicit_labels(BitVec labels) {
    Hypothesis h;
    h.kind_ = Kind::Explicit;
    h.labels_ = std::move(labels);
    return h;
}

Hypothesis Hypothesis::threshold(std::size_t coord, double t) {
    Hypothesis h;
    h.kind_ = Kind::Threshold;
    h.coord_ = coord;
    h.lo_ = t;
    return h;
}

Hypothesis Hypothesis::interval(std::size_t coord, double lo, double hi) {
    Hypothesis h;
    h.kind_ = Kind::Interval;
    h.coord_ = coord;
    h.lo_ = lo;
    h.hi_ = hi;
    return h;
}

Hypothesis Hypothesis::rectangle(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size()) {
        raise(ErrorKind::Dimension, "rectangle corner vectors differ in length");
    }
    Hypothesis h;
    h.kind_ = Kind::Rectangle;
    h.lo_box_ = std::move(lo);
    h.hi_box_ = std::move(hi);
    return h;
}

namespace {

double coord_of(const LabeledPoint& p, std::size_t coord) {
    if (coord >= p.features.size()) {
        raise(ErrorKind::Dimension, "coordinate " + std::to_string(coord) +
                                        " out of range for dimension " +
                                        std::to_string(p.features.size()));
    }
    return p.features[coord];
}

} // namespace

int Hypothesis::predict(const LabeledPoint& p) const {
    switch (kind_) {
        case Kind::Explicit:
            if (p.index >= labels_.size()) {
                raise(ErrorKind::Dimension,
                      "point index " + std::to_string(p.index) +
                          " outside the explicit labeling of length " +
                          std::to_string(labels_.size()));
            }
            return labels_.test(p.index) ? 1 : 0;
        case Kind::Threshold:
            return coord_of(p, coord_) >= lo_ ? 1 : 0;
        case Kind::Interval: {
            double x = coord_of(p, coord_);
            return (lo_ <= x && x <= hi_) ? 1 : 0;
        }
        case Kind::Rectangle: {
            if (p.features.size() != lo_box_.size()) {
                raise(ErrorKind::Dimension, "rectangle dimension " +
                                                std::to_string(lo_box_.size()) +
                                                " differs from feature dimension " +
                                                std::to_string(p.features.size()));
            }
            for (std::size_t j = 0; j < lo_box_.size(); ++j) {
                if (p.features[j] < lo_box_[j] || p.features[j] > hi_box_[j]) return 0;
            }
            return 1;
        }
    }
    return 0;
}

// ----------------------------------------------------------- HypothesisClass

HypothesisClass HypothesisClass::explicit_finite(std::vector<BitVec> labelings,
                                                 std::optional<int> declared_vc) {
    if (labelings.empty()) {
        raise(ErrorKind::Schema, "explicit-finite class must contain at least one labeling");
    }
    std::size_t n = labelings.front().size();
    for (const BitVec& l : labelings) {
        if (l.size() != n) {
            raise(ErrorKind::Dimension, "explicit labelings differ in length");
        }
    }
    if (declared_vc && *declared_vc < 1) {
        raise(ErrorKind::Parameter, "declared VC dimension must be >= 1");
    }
    HypothesisClass cls;
    cls.kind_ = ClassKind::ExplicitFinite;
    cls.labelings_ = std::move(labelings);
    cls.declared_vc_ = declared_vc;
    return cls;
}

HypothesisClass HypothesisClass::threshold_1d(std::size_t coord,
                                              std::optional<int> declared_vc) {
    if (declared_vc && *declared_vc < 1) {
        raise(ErrorKind::Parameter, "declared VC dimension must be >= 1");
    }
    HypothesisClass cls;
    cls.kind_ = ClassKind::Threshold1D;
    cls.coord_ = coord;
    cls.declared_vc_ = declared_vc;
    return cls;
}

HypothesisClass HypothesisClass::interval_1d(std::size_t coord,
                                             std::optional<int> declared_vc) {
    if (declared_vc && *declared_vc < 1) {
        raise(ErrorKind::Parameter, "declared VC dimension must be >= 1");
    }
    HypothesisClass cls;
    cls.kind_ = ClassKind::Interval1D;
    cls.coord_ = coord;
    cls.declared_vc_ = declared_vc;
    return cls;
}

HypothesisClass HypothesisClass::axis_rectangle(std::optional<int> declared_vc) {
    if (declared_vc && *declared_vc < 1) {
        raise(ErrorKind::Parameter, "declared VC dimension must be >= 1");
    }
    HypothesisClass cls;
    cls.kind_ = ClassKind::AxisRectangle;
    cls.declared_vc_ = declared_vc;
    return cls;
}

HypothesisClass HypothesisClass::load_explicit(const std::filesystem::path& path,
                                               std::optional<int> declared_vc) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorKind::Io, "cannot open class file " + path.string());
    }
    std::vector<BitVec> labelings;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::size_t start = 0;
        std::vector<int> values;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                std::string_view field(line.data() + start, i - start);
                if (field == "0") {
                    values.push_back(0);
                } else if (field == "1") {
                    values.push_back(1);
                } else {
                    raise(ErrorKind::Schema, path.filename().string() + ": row " +
                                                 std::to_string(row) +
                                                 ": labeling entries must be 0 or 1");
                }
                start = i + 1;
            }
        }
        BitVec bits(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i]) bits.set(i);
        }
        labelings.push_back(std::move(bits));
    }
    return explicit_finite(std::move(labelings), declared_vc);
}

std::string HypothesisClass::describe() const {
    switch (kind_) {
        case ClassKind::ExplicitFinite:
            return "explicit-finite(m=" + std::to_string(labelings_.size()) + ")";
        case ClassKind::Threshold1D:
            return "threshold-1d(x" + std::to_string(coord_) + ")";
        case ClassKind::Interval1D:
            return "interval-1d(x" + std::to_string(coord_) + ")";
        case ClassKind::AxisRectangle:
            return "axis-rectangle";
    }
    return "unknown";
}

// ------------------------------------------------------------- basic queries

Rational error_rate(const Hypothesis& h, std::span<const LabeledPoint> points) {
    if (points.empty()) {
        raise(ErrorKind::EmptySet, "error rate over an empty multiset is undefined");
    }
    std::size_t mismatches = 0;
    for (const LabeledPoint& p : points) {
        mismatches += h.predict(p) != p.label;
    }
    Rational rate(static_cast<unsigned long>(mismatches),
                  static_cast<unsigned long>(points.size()));
    rate.canonicalize();
    return rate;
}

BitVec induced_labeling(const Hypothesis& h, const FinitePopulation& pop) {
    BitVec out(pop.size());
    for (const LabeledPoint& p : pop.points()) {
        if (h.predict(p)) out.set(p.index);
    }
    return out;
}

// ------------------------------------------------------ dichotomy enumeration

namespace {

void sort_unique(std::vector<BitVec>& vecs) {
    std::sort(vecs.begin(), vecs.end());
    vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
}

// Distinct sorted values of one coordinate over the given points.
std::vector<double> distinct_values(const FinitePopulation& pop, std::size_t coord,
                                    std::span<const std::size_t> subset) {
    std::vector<double> values;
    values.reserve(subset.size());
    for (std::size_t i : subset) {
        values.push_back(coord_of(pop.point(i), coord));
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

// Masks of the value runs [v_i, v_j] of one coordinate, the building blocks
// of every interval/rectangle dichotomy.  Points sharing a value always move
// together, which is exactly the tie-collapsing the sweep demands.
std::vector<BitVec> interval_run_masks(const FinitePopulation& pop, std::size_t coord,
                                       std::size_t mask_size) {
    auto idx = all_indices(pop.size());
    std::vector<double> values = distinct_values(pop, coord, idx);
    std::size_t m = values.size();
    std::vector<BitVec> runs;
    runs.reserve(m * (m + 1) / 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            BitVec mask(mask_size);
            for (std::size_t p = 0; p < pop.size(); ++p) {
                double x = coord_of(pop.point(p), coord);
                if (values[i] <= x && x <= values[j]) mask.set(p);
            }
            runs.push_back(std::move(mask));
        }
    }
    return runs;
}

} // namespace

std::vector<BitVec> effective_dichotomies(const HypothesisClass& cls,
                                          const FinitePopulation& pop) {
    std::size_t n = pop.size();
    std::vector<BitVec> out;

    switch (cls.kind()) {
        case ClassKind::ExplicitFinite: {
            for (const BitVec& l : cls.labelings()) {
                if (l.size() != n) {
                    raise(ErrorKind::Dimension,
                          "explicit labeling length " + std::to_string(l.size()) +
                              " differs from population size " + std::to_string(n));
                }
            }
            out = cls.labelings();
            break;
        }
        case ClassKind::Threshold1D: {
            auto idx = all_indices(n);
            std::vector<double> values = distinct_values(pop, cls.coord(), idx);
            // One dichotomy per cut position: all points at or above the
            // j-th distinct value, plus the empty labeling for cuts beyond
            // the maximum.
            for (std::size_t j = 0; j < values.size(); ++j) {
                BitVec mask(n);
                for (std::size_t p = 0; p < n; ++p) {
                    if (coord_of(pop.point(p), cls.coord()) >= values[j]) mask.set(p);
                }
                out.push_back(std::move(mask));
            }
            out.push_back(BitVec(n));
            break;
        }
        case ClassKind::Interval1D: {
            out = interval_run_masks(pop, cls.coord(), n);
            out.push_back(BitVec(n)); // lo > hi: the empty concept
            break;
        }
        case ClassKind::AxisRectangle: {
            if (pop.dim() == 0) {
                raise(ErrorKind::Dimension, "axis-rectangle needs at least one feature");
            }
            // Product of per-coordinate runs; deduped per dimension to keep
            // the accumulation near the true dichotomy count.
            std::vector<BitVec> acc;
            BitVec full(n);
            for (std::size_t p = 0; p < n; ++p) full.set(p);
            acc.push_back(std::move(full));
            for (std::size_t d = 0; d < pop.dim(); ++d) {
                std::vector<BitVec> runs = interval_run_masks(pop, d, n);
                std::vector<BitVec> next;
                next.reserve(acc.size() * runs.size());
                for (const BitVec& a : acc) {
                    for (const BitVec& r : runs) {
                        BitVec combined(n);
                        for (std::size_t p = 0; p < n; ++p) {
                            if (a.test(p) && r.test(p)) combined.set(p);
                        }
                        next.push_back(std::move(combined));
                    }
                }
                sort_unique(next);
                acc = std::move(next);
            }
            out = std::move(acc);
            out.push_back(BitVec(n)); // empty rectangle
            break;
        }
    }

    sort_unique(out);
    return out;
}

// --------------------------------------------------------- growth / shattering

namespace {

// Distinct labelings the class induces on the given subset of points.
std::uint64_t count_induced(const HypothesisClass& cls, const FinitePopulation& pop,
                            std::span<const std::size_t> subset) {
    switch (cls.kind()) {
        case ClassKind::Threshold1D: {
            std::size_t m = distinct_values(pop, cls.coord(), subset).size();
            return m + 1;
        }
        case ClassKind::Interval1D: {
            std::size_t m = distinct_values(pop, cls.coord(), subset).size();
            return m * (m + 1) / 2 + 1;
        }
        case ClassKind::ExplicitFinite: {
            std::vector<BitVec> projected;
            projected.reserve(cls.labelings().size());
            for (const BitVec& l : cls.labelings()) {
                BitVec sub(subset.size());
                for (std::size_t p = 0; p < subset.size(); ++p) {
                    if (l.test(subset[p])) sub.set(p);
                }
                projected.push_back(std::move(sub));
            }
            sort_unique(projected);
            return projected.size();
        }
        case ClassKind::AxisRectangle: {
            // Delegate to the sweep on the sub-population.
            std::vector<LabeledPoint> points;
            points.reserve(subset.size());
            for (std::size_t p = 0; p < subset.size(); ++p) {
                points.push_back(LabeledPoint{p, pop.point(subset[p]).features, 0});
            }
            FinitePopulation sub(std::move(points));
            return effective_dichotomies(cls, sub).size();
        }
    }
    return 0;
}

bool is_shattered(const HypothesisClass& cls, const FinitePopulation& pop,
                  std::span<const std::size_t> subset) {
    return count_induced(cls, pop, subset) == (std::uint64_t{1} << subset.size());
}

} // namespace

GrowthResult growth_function(const HypothesisClass& cls, std::size_t l,
                             const FinitePopulation& pop, const GrowthOptions& opts) {
    std::size_t n = pop.size();
    if (l < 1 || l > n) {
        raise(ErrorKind::Dimension, "growth argument " + std::to_string(l) +
                                        " outside 1.." + std::to_string(n));
    }
    std::uint64_t ceiling =
        l < 64 ? (std::uint64_t{1} << l) : std::numeric_limits<std::uint64_t>::max();

    GrowthResult result;
    if (n <= opts.exhaustive_max_n) {
        SubsetEnumerator it(n, l);
        do {
            std::uint64_t c = count_induced(cls, pop, it.current());
            if (c > result.value) result.value = c;
            if (result.value == ceiling) break;
        } while (it.advance());
        result.exact = true;
    } else {
        // Sampled lower bound over random subsets; flagged as inexact.
        std::mt19937_64 rng(opts.seed);
        std::vector<std::size_t> idx = all_indices(n);
        std::vector<std::size_t> subset(l);
        for (std::size_t s = 0; s < opts.sampled_subsets; ++s) {
            for (std::size_t j = 0; j < l; ++j) {
                std::uniform_int_distribution<std::size_t> pick(j, n - 1);
                std::swap(idx[j], idx[pick(rng)]);
                subset[j] = idx[j];
            }
            std::uint64_t c = count_induced(cls, pop, subset);
            if (c > result.value) result.value = c;
            if (result.value == ceiling) break;
        }
        result.exact = false;
    }
    return result;
}

double growth_bound(std::uint64_t l, std::uint64_t h) {
    if (l < 1 || h < 1) {
        raise(ErrorKind::Parameter, "growth bound needs l >= 1 and h >= 1");
    }
    double log_value = std::log(1.5) + static_cast<double>(h) * std::log(static_cast<double>(l)) -
                       std::lgamma(static_cast<double>(h) + 1.0);
    return std::exp(log_value);
}

Rational growth_bound_exact(std::uint64_t l, std::uint64_t h) {
    if (l < 1 || h < 1) {
        raise(ErrorKind::Parameter, "growth bound needs l >= 1 and h >= 1");
    }
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), l, h);
    BigInt factorial;
    mpz_fac_ui(factorial.get_mpz_t(), h);
    Rational q(3 * power, 2 * factorial);
    q.canonicalize();
    return q;
}

int vc_dimension(const HypothesisClass& cls, const FinitePopulation& pop,
                 const GrowthOptions& opts) {
    std::size_t n = pop.size();

    if (cls.declared_vc()) {
        int h = *cls.declared_vc();
        std::size_t s = static_cast<std::size_t>(h) + 1;
        if (s > n) return h; // nothing large enough to contradict
        // Shattering is monotone, so one contradicting size suffices.
        BigInt combos = binomial(n, s);
        if (combos > 2'000'000) {
            raise(ErrorKind::Parameter,
                  "verifying declared VC dimension " + std::to_string(h) + " over N = " +
                      std::to_string(n) + " would enumerate " + combos.get_str() +
                      " subsets; reduce the population");
        }
        SubsetEnumerator it(n, s);
        do {
            if (is_shattered(cls, pop, it.current())) {
                std::string subset;
                for (std::size_t i : it.current()) subset += " " + std::to_string(i);
                raise(ErrorKind::Inconsistency,
                      "declared VC dimension " + std::to_string(h) +
                          " contradicted by shattered subset{" + subset + " }");
            }
        } while (it.advance());
        return h;
    }

    if (n > opts.exhaustive_max_n) {
        raise(ErrorKind::Parameter,
              "exhaustive shattering search is limited to N <= " +
                  std::to_string(opts.exhaustive_max_n) +
                  "; set declared_vc for larger populations");
    }

    int vc = 0;
    for (std::size_t s = 1; s <= n; ++s) {
        bool found = false;
        SubsetEnumerator it(n, s);
        do {
            if (is_shattered(cls, pop, it.current())) {
                found = true;
                break;
            }
        } while (it.advance());
        if (!found) break;
        vc = static_cast<int>(s);
    }
    return vc;
}

} // namespace fplab
