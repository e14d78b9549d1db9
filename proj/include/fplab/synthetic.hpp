#pragma once

#include <cstdint>
#include <cstddef>

#include "fplab/population.hpp"

namespace fplab {

// Self-contained population generators so every scenario can run without
// external data.  Features are uniform on [0,1); all draws are pure
// functions of the seed.
struct SyntheticSpec {
    enum class LabelRule {
        Threshold,      // y = 1 iff x[label_coord] >= cut
        ThresholdNoise, // threshold label, then flipped with flip_prob
        Bernoulli,      // y = 1 with label_prob, independent of features
    };

    std::size_t n = 0;
    std::size_t dim = 1;
    LabelRule rule = LabelRule::Threshold;
    std::size_t label_coord = 0;
    double cut = 0.5;
    double flip_prob = 0.0;
    double label_prob = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

FinitePopulation make_synthetic_population(const SyntheticSpec& spec);

// n points on a 1-D grid i/n with the given labels; handy for exact
// dichotomy counting over distinct coordinates.
FinitePopulation make_grid_population(const std::vector<int>& labels);

} // namespace fplab
