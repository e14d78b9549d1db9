#include "fplab/json_io.hpp"

#include <cmath>

namespace fplab {

namespace {

// 64-bit integers when they fit, decimal strings beyond that; consumers can
// always reconstruct the exact value.
nlohmann::json big_to_json(const BigInt& z) {
    if (z.fits_slong_p()) {
        return static_cast<std::int64_t>(z.get_si());
    }
    return z.get_str();
}

nlohmann::json double_to_json(double value) {
    if (std::isnan(value)) return nullptr;
    return value;
}

} // namespace

nlohmann::json rational_to_json(const Rational& q) {
    return {{"num", big_to_json(q.get_num())}, {"den", big_to_json(q.get_den())}};
}

nlohmann::json to_json(const CountingMeasureResult& result) {
    return {
        {"bad", result.bad},
        {"total", result.total},
        {"proportion_num", big_to_json(result.proportion.get_num())},
        {"proportion_den", big_to_json(result.proportion.get_den())},
        {"estimate", result.estimate},
        {"ci_half_width", result.ci_half_width},
        {"mode", to_string(result.mode)},
        {"seed", result.seed},
    };
}

nlohmann::json to_json(const LemmaReport& report) {
    return {
        {"version", to_string(report.version)},
        {"lhs", rational_to_json(report.lhs)},
        {"rhs", rational_to_json(report.rhs)},
        {"rhs_threshold", rational_to_json(report.rhs_threshold)},
        {"epsilon", rational_to_json(report.epsilon)},
        {"l", report.l},
        {"k", report.k},
        {"holds", report.holds},
        {"vacuous", report.vacuous},
        {"out_of_regime", report.out_of_regime},
        {"population", report.population_desc},
        {"class", report.class_desc},
        {"lhs_measure", to_json(report.lhs_result)},
        {"rhs_measure", to_json(report.rhs_result)},
    };
}

nlohmann::json to_json(const DecompositionReport& report) {
    return {
        {"rho", double_to_json(report.rho)},
        {"sigma_e", report.sigma_e},
        {"quantity_factor", report.quantity_factor},
        {"gap_sample_minus_pop", report.gap_sample_minus_pop},
        {"rhs_product", report.rhs_product},
        {"residual", report.residual},
        {"degenerate", report.degenerate},
        {"n", report.n},
        {"l", report.l},
    };
}

nlohmann::json to_json(const GapEstimate& estimate) {
    return {
        {"mean_gap", estimate.mean_gap},
        {"mean_abs_gap", estimate.mean_abs_gap},
        {"ci_half_width", estimate.ci_half_width},
        {"trials", estimate.trials},
        {"degenerate_draws", estimate.degenerate_draws},
        {"degenerate", estimate.degenerate},
    };
}

nlohmann::json to_json(const ConditionalHalfResult& result) {
    return {
        {"probability", rational_to_json(result.probability)},
        {"exceeds_half", result.exceeds_half},
        {"min_red", result.min_red},
    };
}

} // namespace fplab
