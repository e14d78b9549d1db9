#include "runner.hpp"

#include <charconv>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fplab/bounds.hpp"
#include "fplab/decomposition.hpp"
#include "fplab/draws.hpp"
#include "fplab/error.hpp"
#include "fplab/hypotheses.hpp"
#include "fplab/json_io.hpp"
#include "fplab/population.hpp"
#include "fplab/rational.hpp"
#include "fplab/subsets.hpp"
#include "fplab/synthetic.hpp"
#include "fplab/version.hpp"

namespace fplab::cli {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_list(const std::string& raw, char sep, const std::string& what) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t end = raw.find(sep, start);
        if (end == std::string::npos) end = raw.size();
        std::string item = raw.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (item.empty()) {
            raise(ErrorKind::Schema, "empty item in " + what + " list");
        }
        items.push_back(std::move(item));
        start = end + 1;
    }
    return items;
}

std::uint64_t parse_u64_item(const std::string& raw, const std::string& what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
        raise(ErrorKind::Schema, what + " needs a non-negative integer, got '" + raw + "'");
    }
    return value;
}

LoadedPopulation build_population(const Scenario& sc) {
    const std::string& src = sc.require("population");
    if (src == "file") {
        return load_population(sc.require("population.file"));
    }
    if (src == "synthetic") {
        SyntheticSpec spec;
        spec.n = sc.require_u64("pop.n");
        spec.dim = sc.get_u64_or("pop.dim", 1);
        const std::string& rule = sc.require("pop.rule");
        if (rule == "threshold") {
            spec.rule = SyntheticSpec::LabelRule::Threshold;
        } else if (rule == "threshold_noise") {
            spec.rule = SyntheticSpec::LabelRule::ThresholdNoise;
            spec.flip_prob = sc.require_double("pop.flip_prob");
        } else if (rule == "bernoulli") {
            spec.rule = SyntheticSpec::LabelRule::Bernoulli;
            spec.label_prob = sc.require_double("pop.label_prob");
        } else {
            raise(ErrorKind::Schema, sc.origin + ": pop.rule must be threshold, threshold_noise or bernoulli");
        }
        spec.label_coord = sc.get_u64_or("pop.coord", 0);
        spec.cut = sc.get_double_or("pop.cut", 0.5);
        spec.seed = sc.require_u64("pop.seed");
        return {make_synthetic_population(spec), std::nullopt};
    }
    raise(ErrorKind::Schema, sc.origin + ": population must be 'file' or 'synthetic'");
}

HypothesisClass build_class(const Scenario& sc) {
    const std::string& kind = sc.require("class");
    std::optional<int> vc;
    if (sc.has("class.declared_vc")) vc = sc.require_int("class.declared_vc");
    std::size_t coord = sc.get_u64_or("class.coord", 0);
    if (kind == "threshold") {
        return vc ? HypothesisClass::threshold_1d(coord, vc) : HypothesisClass::threshold_1d(coord);
    }
    if (kind == "interval") {
        return vc ? HypothesisClass::interval_1d(coord, vc) : HypothesisClass::interval_1d(coord);
    }
    if (kind == "rectangle") {
        return HypothesisClass::axis_rectangle(vc);
    }
    if (kind == "explicit") {
        if (sc.has("class.file")) {
            return HypothesisClass::load_explicit(sc.require("class.file"), vc);
        }
        std::vector<BitVec> labelings;
        for (const std::string& bits : split_list(sc.require("class.labelings"), ';', "class.labelings")) {
            labelings.push_back(BitVec::from_string(bits));
        }
        return HypothesisClass::explicit_finite(std::move(labelings), vc);
    }
    raise(ErrorKind::Schema, sc.origin + ": class must be threshold, interval, rectangle or explicit");
}

std::function<int(const LabeledPoint&)> build_predictor(const Scenario& sc) {
    const std::string& kind = sc.require("predictor");
    if (kind == "zero") return [](const LabeledPoint&) { return 0; };
    if (kind == "one") return [](const LabeledPoint&) { return 1; };
    if (kind == "threshold") {
        std::size_t coord = sc.get_u64_or("predictor.coord", 0);
        double cut = sc.require_double("predictor.cut");
        return [coord, cut](const LabeledPoint& p) {
            if (coord >= p.features.size()) {
                raise(ErrorKind::Dimension, "predictor coordinate out of range");
            }
            return p.features[coord] >= cut ? 1 : 0;
        };
    }
    raise(ErrorKind::Schema, sc.origin + ": predictor must be zero, one or threshold");
}

RunOptions run_options(const Scenario& sc) {
    RunOptions opts;
    opts.workers = sc.get_int_or("workers", 1);
    if (opts.workers < 1) {
        raise(ErrorKind::Parameter, "workers must be >= 1");
    }
    opts.budget = sc.get_u64_or("budget", RunOptions{}.budget);
    return opts;
}

bool monte_carlo_fallback_allowed(const Scenario& sc) {
    const std::string choice = sc.get_or("fallback", "none");
    if (choice == "none") return false;
    if (choice == "monte_carlo") return true;
    raise(ErrorKind::Schema, sc.origin + ": fallback must be none or monte_carlo");
}

nlohmann::json scenario_echo(const Scenario& sc) {
    nlohmann::json echo = nlohmann::json::object();
    for (const auto& [key, value] : sc.keys) echo[key] = value;
    return echo;
}

nlohmann::json base_payload(const Scenario& sc, const std::string& kind) {
    return {
        {"experiment", kind},
        {"name", sc.require("name")},
        {"scenario", scenario_echo(sc)},
        {"versions", {{"artifact", kVersion}}},
    };
}

RunResult run_counting(const Scenario& sc) {
    LoadedPopulation loaded = build_population(sc);
    HypothesisClass cls = build_class(sc);
    DeviationStatistic stat = deviation_statistic_from_string(sc.require("statistic"));
    Rational epsilon = sc.require_rational("epsilon");
    std::size_t n = loaded.population.size();
    std::size_t l = sc.require_u64("l");
    RunOptions opts = run_options(sc);

    const std::string& mode = sc.require("mode");
    DrawSpec spec;
    if (mode == "exhaustive") {
        spec = DrawSpec::exhaustive(n, l);
    } else if (mode == "monte_carlo") {
        spec = DrawSpec::monte_carlo(n, l, sc.require_u64("trials"), sc.require_u64("seed"));
    } else {
        raise(ErrorKind::Schema, sc.origin + ": mode must be exhaustive or monte_carlo");
    }

    bool fell_back = false;
    CountingMeasureResult result;
    try {
        result = counting_measure(loaded.population, cls, epsilon, stat, spec, opts);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Budget || spec.mode != DrawMode::Exhaustive ||
            !monte_carlo_fallback_allowed(sc)) {
            throw;
        }
        spec = DrawSpec::monte_carlo(n, l, sc.require_u64("fallback.trials"),
                                     sc.require_u64("fallback.seed"));
        result = counting_measure(loaded.population, cls, epsilon, stat, spec, opts);
        fell_back = true;
    }

    RunResult out;
    out.payload = base_payload(sc, "counting_measure");
    nlohmann::json res = to_json(result);
    res["statistic"] = to_string(stat);
    res["epsilon"] = rational_to_json(epsilon);
    res["fallback_used"] = fell_back;
    out.payload["result"] = res;

    std::string csv = "statistic,epsilon,bad,total,proportion\n";
    csv += std::string(to_string(stat)) + "," + to_string(epsilon) + "," +
           std::to_string(result.bad) + "," + std::to_string(result.total) + "," +
           to_string(result.proportion) + "\n";
    out.tables.emplace_back("measure", csv);
    return out;
}

RunResult run_lemma(const Scenario& sc) {
    LoadedPopulation loaded = build_population(sc);
    HypothesisClass cls = build_class(sc);
    Rational epsilon = sc.require_rational("epsilon");
    std::size_t l = sc.require_u64("l");
    LemmaVersion version = lemma_version_from_string(sc.require("version"));
    RunOptions opts = run_options(sc);
    bool allow = sc.get_bool_or("allow_out_of_regime", false);

    const std::string& mode_name = sc.require("mode");
    DrawMode mode;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    if (mode_name == "exhaustive") {
        mode = DrawMode::Exhaustive;
    } else if (mode_name == "monte_carlo") {
        mode = DrawMode::MonteCarlo;
        trials = sc.require_u64("trials");
        seed = sc.require_u64("seed");
    } else {
        raise(ErrorKind::Schema, sc.origin + ": mode must be exhaustive or monte_carlo");
    }

    LemmaReport report;
    try {
        report = lemma_check(loaded.population, cls, epsilon, l, version, mode, opts, trials,
                             seed, allow);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Budget || mode != DrawMode::Exhaustive ||
            !monte_carlo_fallback_allowed(sc)) {
            throw;
        }
        report = lemma_check(loaded.population, cls, epsilon, l, version, DrawMode::MonteCarlo,
                             opts, sc.require_u64("fallback.trials"),
                             sc.require_u64("fallback.seed"), allow);
    }

    RunResult out;
    out.payload = base_payload(sc, "lemma_check");
    out.payload["result"] = to_json(report);

    std::string csv = "version,epsilon,l,k,lhs,rhs,rhs_threshold,holds,vacuous\n";
    csv += std::string(to_string(report.version)) + "," + to_string(report.epsilon) + "," +
           std::to_string(report.l) + "," + std::to_string(report.k) + "," +
           to_string(report.lhs) + "," + to_string(report.rhs) + "," +
           to_string(report.rhs_threshold) + "," + (report.holds ? "true" : "false") + "," +
           (report.vacuous ? "true" : "false") + "\n";
    out.tables.emplace_back("lemma", csv);

    if (!report.holds) {
        out.assertion_failed = true;
        out.assertion_message = "symmetrisation inequality violated: lhs " +
                                to_string(report.lhs) + " >= rhs " + to_string(report.rhs);
    }
    return out;
}

RunResult run_bound_sweep(const Scenario& sc) {
    std::uint64_t l = sc.require_u64("l");
    std::uint64_t k = sc.require_u64("k");
    int h = sc.require_int("h");
    const std::string& variant_name = sc.require("variant");
    std::vector<BoundVariant> variants;
    if (variant_name == "both") {
        variants = {BoundVariant::WholeSet, BoundVariant::Remainder};
    } else {
        variants = {bound_variant_from_string(variant_name)};
    }

    std::vector<double> epsilons;
    for (const std::string& item : split_list(sc.require("epsilons"), ',', "epsilons")) {
        double eps = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), eps);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            raise(ErrorKind::Schema, "epsilons item '" + item + "' is not a real number");
        }
        epsilons.push_back(eps);
    }

    nlohmann::json rows = nlohmann::json::array();
    std::string csv = "l,k,h,epsilon,variant,bound\n";
    for (double eps : epsilons) {
        BoundParams params{l, k, h, eps};
        for (BoundVariant variant : variants) {
            double bound = theorem_bound(params, variant);
            rows.push_back({
                {"l", l},
                {"k", k},
                {"h", h},
                {"epsilon", eps},
                {"variant", to_string(variant)},
                {"bound", bound},
            });
            csv += std::to_string(l) + "," + std::to_string(k) + "," + std::to_string(h) + "," +
                   format_double(eps) + "," + to_string(variant) + "," + format_double(bound) +
                   "\n";
        }
    }

    RunResult out;
    out.payload = base_payload(sc, "theorem_bound_sweep");
    out.payload["result"] = {{"rows", rows}};
    out.tables.emplace_back("bounds", csv);
    return out;
}

RunResult run_half_split(const Scenario& sc) {
    std::vector<int> labels;
    for (const std::string& item : split_list(sc.require("labels"), ',', "labels")) {
        if (item == "0") {
            labels.push_back(0);
        } else if (item == "1") {
            labels.push_back(1);
        } else {
            raise(ErrorKind::Schema, "labels items must be 0 or 1, got '" + item + "'");
        }
    }
    Rational epsilon = sc.require_rational("epsilon");
    Rational probability = half_split_concentration(labels, epsilon);

    RunResult out;
    out.payload = base_payload(sc, "half_split");
    out.payload["result"] = {
        {"m", labels.size() / 2},
        {"epsilon", rational_to_json(epsilon)},
        {"probability", rational_to_json(probability)},
    };
    std::string csv = "m,epsilon,probability\n";
    csv += std::to_string(labels.size() / 2) + "," + to_string(epsilon) + "," +
           to_string(probability) + "\n";
    out.tables.emplace_back("halfsplit", csv);
    return out;
}

InclusionScheme build_scheme(const Scenario& sc, const LoadedPopulation& loaded) {
    const std::string& kind = sc.require("scheme");
    if (kind == "fixed") {
        if (sc.has("scheme.indices")) {
            std::vector<std::size_t> indices;
            for (const std::string& item :
                 split_list(sc.require("scheme.indices"), ',', "scheme.indices")) {
                indices.push_back(parse_u64_item(item, "scheme.indices item"));
            }
            return InclusionScheme::fixed(
                InclusionVector::from_indices(indices, loaded.population.size()));
        }
        if (loaded.inclusion) {
            return InclusionScheme::fixed(*loaded.inclusion);
        }
        raise(ErrorKind::Schema,
              sc.origin + ": fixed scheme needs scheme.indices or a population file with an r column");
    }
    if (kind == "uniform") {
        return InclusionScheme::uniform_without_replacement(sc.require_u64("scheme.l"));
    }
    if (kind == "bernoulli") {
        double a = sc.require_double("scheme.a");
        double b = sc.require_double("scheme.b");
        std::size_t coord = sc.get_u64_or("scheme.coord", 0);
        return InclusionScheme::bernoulli_propensity(
            [a, b, coord](std::span<const double> x) {
                if (coord >= x.size()) {
                    raise(ErrorKind::Dimension, "propensity coordinate out of range");
                }
                return a + b * x[coord];
            });
    }
    raise(ErrorKind::Schema, sc.origin + ": scheme must be fixed, uniform or bernoulli");
}

RunResult run_meng(const Scenario& sc) {
    LoadedPopulation loaded = build_population(sc);
    ErrorVector errors = residuals(loaded.population, build_predictor(sc));
    InclusionScheme scheme = build_scheme(sc, loaded);

    bool wants_gap = sc.has("trials");
    std::uint64_t seed = 0;
    if (scheme.kind() != InclusionScheme::Kind::Fixed || wants_gap) {
        seed = sc.require_u64("seed");
    }

    InclusionVector r = sample_inclusion(scheme, loaded.population, seed);
    DecompositionReport report = meng_decomposition(errors, r);

    RunResult out;
    out.payload = base_payload(sc, "meng");
    nlohmann::json res = {{"decomposition", to_json(report)}};

    std::string csv = "rho,sigma_e,factor,gap,rhs,residual\n";
    csv += format_double(report.rho) + "," + format_double(report.sigma_e) + "," +
           format_double(report.quantity_factor) + "," +
           format_double(report.gap_sample_minus_pop) + "," +
           format_double(report.rhs_product) + "," + format_double(report.residual) + "\n";
    out.tables.emplace_back("meng", csv);

    if (wants_gap) {
        std::uint64_t trials = sc.require_u64("trials");
        int workers = run_options(sc).workers;
        std::vector<GapTraceRow> trace;
        bool wants_trace = sc.get_bool_or("trace", false);
        GapEstimate gap = mc_expected_gap(scheme, loaded.population, errors, trials, seed,
                                          workers, wants_trace ? &trace : nullptr);
        res["gap"] = to_json(gap);
        if (wants_trace) {
            std::string trace_csv = "trial,l_drawn,gap\n";
            for (const GapTraceRow& row : trace) {
                trace_csv += std::to_string(row.trial) + "," + std::to_string(row.l_drawn) +
                             "," + format_double(row.gap) + "\n";
            }
            out.tables.emplace_back("trace", trace_csv);
        }
    }
    out.payload["result"] = res;
    return out;
}

RunResult run_ht_unbiasedness(const Scenario& sc) {
    LoadedPopulation loaded = build_population(sc);
    const FinitePopulation& pop = loaded.population;
    auto predictor = build_predictor(sc);
    std::size_t n = pop.size();
    std::size_t l = sc.require_u64("l");
    RunOptions opts = run_options(sc);

    std::vector<Rational> values;
    values.reserve(n);
    Rational pop_sum(0);
    for (const LabeledPoint& p : pop.points()) {
        values.emplace_back(p.label - predictor(p));
        pop_sum += values.back();
    }
    Rational pop_mean = pop_sum / Rational(static_cast<unsigned long>(n));
    pop_mean.canonicalize();

    std::vector<Rational> probs(n, Rational(static_cast<unsigned long>(l),
                                            static_cast<unsigned long>(n)));
    for (Rational& q : probs) q.canonicalize();

    Rational estimate_sum(0);
    std::uint64_t draws = enumerate_draws(n, l, opts.budget, [&](std::span<const std::size_t> draw) {
        InclusionVector r = InclusionVector::from_indices(draw, n);
        estimate_sum += horvitz_thompson_exact(values, r, probs);
    });
    Rational estimate_mean = estimate_sum / Rational(draws);
    estimate_mean.canonicalize();
    bool unbiased = estimate_mean == pop_mean;

    RunResult out;
    out.payload = base_payload(sc, "ht_unbiasedness");
    out.payload["result"] = {
        {"l", l},
        {"draws", draws},
        {"estimate_mean", rational_to_json(estimate_mean)},
        {"population_mean", rational_to_json(pop_mean)},
        {"unbiased", unbiased},
    };
    std::string csv = "l,draws,estimate_mean,population_mean,unbiased\n";
    csv += std::to_string(l) + "," + std::to_string(draws) + "," + to_string(estimate_mean) +
           "," + to_string(pop_mean) + "," + (unbiased ? "true" : "false") + "\n";
    out.tables.emplace_back("ht", csv);

    if (!unbiased) {
        out.assertion_failed = true;
        out.assertion_message = "estimator average " + to_string(estimate_mean) +
                                " differs from population mean " + to_string(pop_mean);
    }
    return out;
}

RunResult run_growth(const Scenario& sc) {
    LoadedPopulation loaded = build_population(sc);
    HypothesisClass cls = build_class(sc);
    std::size_t l = sc.require_u64("l");

    GrowthOptions opts;
    opts.exhaustive_max_n = sc.get_u64_or("growth.max_n", opts.exhaustive_max_n);
    opts.sampled_subsets = sc.get_u64_or("growth.samples", opts.sampled_subsets);
    opts.seed = sc.get_u64_or("seed", 0);

    GrowthResult growth = growth_function(cls, l, loaded.population, opts);

    RunResult out;
    out.payload = base_payload(sc, "growth");
    nlohmann::json res = {
        {"l", l},
        {"value", growth.value},
        {"exact", growth.exact},
        {"class", cls.describe()},
    };
    if (cls.declared_vc()) {
        int h = *cls.declared_vc();
        Rational bound = growth_bound_exact(l, static_cast<std::uint64_t>(h));
        bool below = Rational(growth.value) < bound;
        res["h"] = h;
        res["bound"] = rational_to_json(bound);
        res["below_bound"] = below;
    }
    out.payload["result"] = res;
    return out;
}

} // namespace

RunResult run_scenario(const Scenario& sc) {
    const std::string& kind = sc.require("experiment");
    if (kind == "counting_measure") return run_counting(sc);
    if (kind == "lemma_check") return run_lemma(sc);
    if (kind == "theorem_bound_sweep") return run_bound_sweep(sc);
    if (kind == "half_split") return run_half_split(sc);
    if (kind == "meng") return run_meng(sc);
    if (kind == "ht_unbiasedness") return run_ht_unbiasedness(sc);
    if (kind == "growth") return run_growth(sc);
    raise(ErrorKind::Schema, sc.origin + ": unknown experiment kind '" + kind + "'");
}

} // namespace fplab::cli
