#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cefs {

enum class ColumnKind { binary, integer, real };

const char* to_string(ColumnKind kind);

// Integer columns with more distinct values than this are treated as real.
inline constexpr std::size_t max_integer_levels = 32;

// binary if values lie in {0,1}; integer if integral with at most
// max_integer_levels distinct values; real otherwise.
ColumnKind infer_kind(std::span<const double> values);

struct Column {
    std::string name;
    std::vector<double> values;
    ColumnKind kind = ColumnKind::real;
};

// Column-oriented sample matrix plus class attribute. Immutable once built.
class Dataset {
public:
    Dataset() = default;

    // Validates shapes, name uniqueness and kind consistency.
    // Throws EmptyDataset, LengthMismatch or InvalidArgument.
    Dataset(std::string name, std::vector<Column> features, Column label);

    // Same, but infers every column kind from its values.
    static Dataset from_values(std::string name,
                               std::vector<std::pair<std::string, std::vector<double>>> features,
                               std::pair<std::string, std::vector<double>> label);

    const std::string& name() const noexcept { return name_; }
    std::size_t n() const noexcept { return label_.values.size(); }
    std::size_t m() const noexcept { return features_.size(); }

    const std::vector<Column>& features() const noexcept { return features_; }
    const Column& feature(std::size_t j) const { return features_.at(j); }
    const Column& label() const noexcept { return label_; }
    std::vector<std::string> feature_names() const;

    // Rows in the given order; column kinds are inherited.
    Dataset select_rows(std::span<const std::size_t> rows) const;

private:
    std::string name_;
    std::vector<Column> features_;
    Column label_;
};

struct CsvOptions {
    // Column name, or a 0-based index (negative counts from the end).
    std::string label;
    bool header = true;
    // Columns excluded from the feature set (names, or 0-based indices).
    std::vector<std::string> drop;
};

struct CsvLoad {
    Dataset dataset;
    std::size_t dropped_rows = 0;
};

// Empty cells and '?' are missing; rows with any missing value are dropped.
// Throws FileNotFound, ParseError, LabelColumnMissing, EmptyDataset.
CsvLoad load_csv(const std::filesystem::path& path, const CsvOptions& options);
CsvLoad parse_csv(const std::string& text, const CsvOptions& options, std::string name = "inline");

struct DiscretizeConfig {
    std::uint32_t bins = 10;
    std::uint32_t label_bins = 5;
};

// Integer-coded view of a Dataset for plug-in entropy estimation.
struct DiscretizedDataset {
    std::vector<std::vector<std::uint32_t>> codes;
    std::vector<std::uint32_t> cardinalities;
    std::vector<std::uint32_t> label_codes;
    std::uint32_t label_cardinality = 0;
    // Cut points of real columns; empty for binary/integer columns.
    std::vector<std::vector<double>> bin_edges;
    std::vector<double> label_edges;
    std::vector<std::string> names;

    std::size_t n() const noexcept { return label_codes.size(); }
    std::size_t m() const noexcept { return codes.size(); }
    std::span<const std::uint32_t> column(std::size_t j) const { return codes.at(j); }
    std::span<const std::uint32_t> label() const noexcept { return label_codes; }
};

// Mapping from raw values of one column to dense codes.
class ColumnEncoding {
public:
    // Discrete kinds relabel sorted distinct values to 0..B-1. Real columns are
    // equal-frequency binned with linear-interpolated quantile cuts; duplicated
    // cuts and cuts that leave a bin empty on the fitted data are merged.
    static ColumnEncoding fit(std::span<const double> values, ColumnKind kind, std::uint32_t bins);

    // Unseen discrete values map to the nearest fitted level (lower on ties).
    std::uint32_t encode(double value) const;
    std::vector<std::uint32_t> encode(std::span<const double> values) const;

    std::uint32_t cardinality() const noexcept { return cardinality_; }
    ColumnKind kind() const noexcept { return kind_; }
    const std::vector<double>& cuts() const noexcept { return cuts_; }
    const std::vector<double>& levels() const noexcept { return levels_; }

private:
    ColumnKind kind_ = ColumnKind::real;
    std::vector<double> levels_;
    std::vector<double> cuts_;
    std::uint32_t cardinality_ = 1;
};

// Encodings fitted on one dataset, applicable to others with the same columns.
class Discretizer {
public:
    // Throws InvalidArgument when bins < 2 is requested for a real column or label.
    static Discretizer fit(const Dataset& d, const DiscretizeConfig& config);

    DiscretizedDataset transform(const Dataset& d) const;

    // Class values for classifiers: raw label values for discrete labels,
    // bin codes for real labels.
    std::vector<double> class_labels(const Dataset& d) const;

    const ColumnEncoding& label_encoding() const noexcept { return label_; }
    const std::vector<ColumnEncoding>& feature_encodings() const noexcept { return features_; }

private:
    std::vector<ColumnEncoding> features_;
    ColumnEncoding label_;
};

DiscretizedDataset discretize(const Dataset& d, const DiscretizeConfig& config = {});

struct SplitSpec {
    double train_fraction = 0.9;
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

// |train| = round(train_fraction * n). Stratification uses distinct label
// values and allocates per-class quotas by largest remainder, so each class
// lands within one row of its proportional share. Rows keep their original order.
// Throws InvalidFraction; InvalidArgument when n < 2.
Split split(const Dataset& d, const SplitSpec& spec);

// Replaces the label values, keeping features. Label kind is re-inferred.
Dataset with_label(const Dataset& d, std::vector<double> label_values);

}  // namespace cefs
