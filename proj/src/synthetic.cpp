#include "fplab/synthetic.hpp"

#include <random>
#include <string>

#include "fplab/error.hpp"
#include "parallel_rng.hpp"

namespace fplab {

void SyntheticSpec::validate() const {
    if (n < 1) {
        raise(ErrorKind::Parameter, "synthetic population needs n >= 1");
    }
    if (dim < 1) {
        raise(ErrorKind::Parameter, "synthetic population needs dim >= 1");
    }
    if (label_coord >= dim) {
        raise(ErrorKind::Parameter, "label coordinate " + std::to_string(label_coord) +
                                        " is out of range for dim = " + std::to_string(dim));
    }
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
        raise(ErrorKind::Parameter, "flip probability must lie in [0, 1]");
    }
    if (!(label_prob >= 0.0 && label_prob <= 1.0)) {
        raise(ErrorKind::Parameter, "label probability must lie in [0, 1]");
    }
}

FinitePopulation make_synthetic_population(const SyntheticSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(detail::splitmix64(spec.seed));
    std::vector<LabeledPoint> points;
    points.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        LabeledPoint p;
        p.index = i;
        p.features.reserve(spec.dim);
        for (std::size_t d = 0; d < spec.dim; ++d) {
            p.features.push_back(detail::uniform_unit(rng));
        }
        switch (spec.rule) {
            case SyntheticSpec::LabelRule::Threshold:
                p.label = p.features[spec.label_coord] >= spec.cut ? 1 : 0;
                break;
            case SyntheticSpec::LabelRule::ThresholdNoise: {
                p.label = p.features[spec.label_coord] >= spec.cut ? 1 : 0;
                if (detail::uniform_unit(rng) < spec.flip_prob) p.label = 1 - p.label;
                break;
            }
            case SyntheticSpec::LabelRule::Bernoulli:
                p.label = detail::uniform_unit(rng) < spec.label_prob ? 1 : 0;
                break;
        }
        points.push_back(std::move(p));
    }
    return FinitePopulation(std::move(points));
}

FinitePopulation make_grid_population(const std::vector<int>& labels) {
    if (labels.empty()) {
        raise(ErrorKind::Parameter, "grid population needs at least one label");
    }
    std::vector<LabeledPoint> points;
    points.reserve(labels.size());
    double n = static_cast<double>(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        LabeledPoint p;
        p.index = i;
        p.features = {static_cast<double>(i) / n};
        p.label = labels[i];
        points.push_back(std::move(p));
    }
    return FinitePopulation(std::move(points));
}

} // namespace fplab
