#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fplab/bitvec.hpp"
#include "fplab/rational.hpp"

namespace fplab {

struct LabeledPoint {
    std::size_t index = 0;
    std::vector<double> features;
    int label = 0; // binary
};

// The whole finite world the statistics range over.  Every rate is a count
// against these N points; nothing is sampled from outside them.
class FinitePopulation {
public:
    // Points must carry indices 0..N-1 in order, equal feature dimension,
    // binary labels.
    explicit FinitePopulation(std::vector<LabeledPoint> points);

    static FinitePopulation from_rows(std::vector<std::vector<double>> features,
                                      std::vector<int> labels);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t dim() const noexcept { return dim_; }

    const LabeledPoint& point(std::size_t i) const { return points_[i]; }
    const std::vector<LabeledPoint>& points() const noexcept { return points_; }

    // Bit i = label of point i.
    const BitVec& labels() const noexcept { return labels_; }

private:
    std::vector<LabeledPoint> points_;
    BitVec labels_;
    std::size_t dim_ = 0;
};

// Membership indicator over a population: bit i says whether point i is in
// the drawn sample.
class InclusionVector {
public:
    InclusionVector() = default;
    explicit InclusionVector(BitVec bits) : bits_(std::move(bits)) {}

    static InclusionVector from_indices(std::span<const std::size_t> indices,
                                        std::size_t n);

    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t ones() const noexcept { return bits_.count(); }
    bool included(std::size_t i) const { return bits_.test(i); }
    const BitVec& mask() const noexcept { return bits_; }

    std::vector<std::size_t> indices() const;

    bool operator==(const InclusionVector& other) const { return bits_ == other.bits_; }

private:
    BitVec bits_;
};

struct LoadedPopulation {
    FinitePopulation population;
    std::optional<InclusionVector> inclusion;
};

// CSV with header "x0,...,x{d-1},y[,r]"; r, when present, is a binary
// inclusion column.  Parse errors carry 1-based line numbers.
LoadedPopulation load_population(const std::filesystem::path& path);
LoadedPopulation parse_population_csv(std::istream& in, const std::string& origin);

// Inverse of load_population: emits the same header shape with features in
// shortest round-trip decimal form, so load(serialize(p)) == p exactly.
std::string serialize_population(const FinitePopulation& pop,
                                 const std::optional<InclusionVector>& inclusion = std::nullopt);
void save_population(const FinitePopulation& pop, const std::filesystem::path& path,
                     const std::optional<InclusionVector>& inclusion = std::nullopt);

struct SplitResult {
    std::vector<LabeledPoint> sample;    // included points, original order
    std::vector<LabeledPoint> remainder; // excluded points, original order
};

SplitResult split_by_inclusion(const FinitePopulation& pop, const InclusionVector& inc);

using CellPredicate = std::function<bool(std::span<const double>)>;

// Proportion of label-1 points among those whose features match the cell, as
// an exact ratio of counts.  Empty cell is an error, never 0/0.
Rational conditional_rate(const FinitePopulation& pop, const CellPredicate& cell);

} // namespace fplab
