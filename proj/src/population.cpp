#include "fplab/population.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fplab/error.hpp"

namespace fplab {

namespace {

double parse_feature(std::string_view text, std::size_t row, const std::string& column) {
    double value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        raise(ErrorKind::Parse, "row " + std::to_string(row) + ": malformed value '" +
                                    std::string(text) + "' in column " + column);
    }
    if (!std::isfinite(value)) {
        raise(ErrorKind::Schema, "row " + std::to_string(row) + ": non-finite value in column " +
                                     column);
    }
    return value;
}

int parse_bit(std::string_view text, std::size_t row, const std::string& column) {
    if (text == "0") return 0;
    if (text == "1") return 1;
    raise(ErrorKind::Schema, "row " + std::to_string(row) + ": column " + column +
                                 " must be 0 or 1, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

void format_feature(std::string& out, double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec; // 64 bytes always suffice for a double
    out.append(buf, ptr);
}

} // namespace

FinitePopulation::FinitePopulation(std::vector<LabeledPoint> points)
    : points_(std::move(points)) {
    if (points_.empty()) {
        raise(ErrorKind::Schema, "population must contain at least one point");
    }
    dim_ = points_.front().features.size();
    labels_ = BitVec(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const LabeledPoint& p = points_[i];
        if (p.index != i) {
            raise(ErrorKind::Schema,
                  "point at position " + std::to_string(i) + " carries index " +
                      std::to_string(p.index) + "; indices must be 0..N-1 in order");
        }
        if (p.features.size() != dim_) {
            raise(ErrorKind::Dimension,
                  "point " + std::to_string(i) + " has " + std::to_string(p.features.size()) +
                      " features, expected " + std::to_string(dim_));
        }
        if (p.label != 0 && p.label != 1) {
            raise(ErrorKind::Schema,
                  "point " + std::to_string(i) + " has non-binary label " +
                      std::to_string(p.label));
        }
        for (double f : p.features) {
            if (!std::isfinite(f)) {
                raise(ErrorKind::Schema,
                      "point " + std::to_string(i) + " has a non-finite feature");
            }
        }
        if (p.label == 1) labels_.set(i);
    }
}

FinitePopulation FinitePopulation::from_rows(std::vector<std::vector<double>> features,
                                             std::vector<int> labels) {
    if (features.size() != labels.size()) {
        raise(ErrorKind::Dimension, "feature rows and labels differ in length");
    }
    std::vector<LabeledPoint> points;
    points.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        points.push_back(LabeledPoint{i, std::move(features[i]), labels[i]});
    }
    return FinitePopulation(std::move(points));
}

InclusionVector InclusionVector::from_indices(std::span<const std::size_t> indices,
                                              std::size_t n) {
    BitVec bits(n);
    for (std::size_t i : indices) {
        if (i >= n) {
            raise(ErrorKind::Dimension,
                  "index " + std::to_string(i) + " out of range for N = " + std::to_string(n));
        }
        bits.set(i);
    }
    return InclusionVector(std::move(bits));
}

std::vector<std::size_t> InclusionVector::indices() const {
    std::vector<std::size_t> out;
    out.reserve(ones());
    for (std::size_t i = 0; i < size(); ++i) {
        if (included(i)) out.push_back(i);
    }
    return out;
}

LoadedPopulation parse_population_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        raise(ErrorKind::Schema, origin + ": population must contain at least one point");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_csv_line(line);
    std::size_t dim = 0;
    while (dim < header.size() && header[dim] == "x" + std::to_string(dim)) ++dim;
    if (dim == 0) {
        raise(ErrorKind::Schema, origin + ": header must start with feature columns x0, x1, ...");
    }
    if (dim >= header.size() || header[dim] != "y") {
        raise(ErrorKind::Schema, origin + ": header must carry a 'y' column after the features");
    }
    bool has_r = false;
    if (header.size() == dim + 2) {
        if (header[dim + 1] != "r") {
            raise(ErrorKind::Schema, origin + ": trailing column must be 'r', got '" +
                                         std::string(header[dim + 1]) + "'");
        }
        has_r = true;
    } else if (header.size() != dim + 1) {
        raise(ErrorKind::Schema, origin + ": unexpected extra columns after 'y'");
    }

    std::vector<LabeledPoint> points;
    BitVec inclusion_bits;
    std::vector<int> inclusion;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            raise(ErrorKind::Parse, origin + ": row " + std::to_string(row) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(header.size()));
        }
        LabeledPoint p;
        p.index = points.size();
        p.features.reserve(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            p.features.push_back(parse_feature(fields[j], row, "x" + std::to_string(j)));
        }
        p.label = parse_bit(fields[dim], row, "y");
        if (has_r) inclusion.push_back(parse_bit(fields[dim + 1], row, "r"));
        points.push_back(std::move(p));
    }
    if (points.empty()) {
        raise(ErrorKind::Schema, origin + ": population must contain at least one point");
    }

    LoadedPopulation out{FinitePopulation(std::move(points)), std::nullopt};
    if (has_r) {
        BitVec bits(inclusion.size());
        for (std::size_t i = 0; i < inclusion.size(); ++i) {
            if (inclusion[i]) bits.set(i);
        }
        out.inclusion = InclusionVector(std::move(bits));
    }
    return out;
}

LoadedPopulation load_population(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorKind::Io, "cannot open population file " + path.string());
    }
    return parse_population_csv(in, path.filename().string());
}

std::string serialize_population(const FinitePopulation& pop,
                                 const std::optional<InclusionVector>& inclusion) {
    if (inclusion && inclusion->size() != pop.size()) {
        raise(ErrorKind::Dimension, "inclusion vector length differs from population size");
    }
    std::string out;
    for (std::size_t j = 0; j < pop.dim(); ++j) {
        out += "x" + std::to_string(j) + ",";
    }
    out += "y";
    if (inclusion) out += ",r";
    out += "\n";
    for (const LabeledPoint& p : pop.points()) {
        for (double f : p.features) {
            format_feature(out, f);
            out += ",";
        }
        out += p.label ? "1" : "0";
        if (inclusion) {
            out += inclusion->included(p.index) ? ",1" : ",0";
        }
        out += "\n";
    }
    return out;
}

void save_population(const FinitePopulation& pop, const std::filesystem::path& path,
                     const std::optional<InclusionVector>& inclusion) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        raise(ErrorKind::Io, "cannot write population file " + path.string());
    }
    out << serialize_population(pop, inclusion);
    if (!out) {
        raise(ErrorKind::Io, "failed while writing " + path.string());
    }
}

SplitResult split_by_inclusion(const FinitePopulation& pop, const InclusionVector& inc) {
    if (inc.size() != pop.size()) {
        raise(ErrorKind::Dimension, "inclusion vector length " + std::to_string(inc.size()) +
                                        " differs from population size " +
                                        std::to_string(pop.size()));
    }
    SplitResult result;
    result.sample.reserve(inc.ones());
    result.remainder.reserve(pop.size() - inc.ones());
    for (const LabeledPoint& p : pop.points()) {
        (inc.included(p.index) ? result.sample : result.remainder).push_back(p);
    }
    return result;
}

Rational conditional_rate(const FinitePopulation& pop, const CellPredicate& cell) {
    std::size_t in_cell = 0;
    std::size_t ones = 0;
    for (const LabeledPoint& p : pop.points()) {
        if (cell(p.features)) {
            ++in_cell;
            ones += p.label;
        }
    }
    if (in_cell == 0) {
        raise(ErrorKind::EmptyCell, "no point matches the cell; the rate is undefined");
    }
    Rational rate(static_cast<unsigned long>(ones), static_cast<unsigned long>(in_cell));
    rate.canonicalize();
    return rate;
}

} // namespace fplab
