#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cefs/baselines.hpp"
#include "cefs/ce_optimizer.hpp"
#include "cefs/data.hpp"

namespace cefs {

enum class ClassifierKind { gaussian_pooled, gaussian_diagonal, knn };

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::gaussian_diagonal;
    std::size_t k_neighbors = 3;

    friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

// "nb-pooled", "nb-diag", "knn".
const char* to_string(ClassifierKind kind);
ClassifierKind parse_classifier(const std::string& name);

// Trains on the selected columns of train and predicts a label value for each
// test row. Classes are the distinct train label values.
//   gaussian_pooled   shared within-class covariance; throws SingularCovariance
//   gaussian_diagonal per-class variances floored at 1e-9
//   knn               majority of k nearest rows in train z-scores; distance ties
//                     toward the lower train row, vote ties toward the smaller class
std::vector<double> fit_predict(const ClassifierSpec& spec, const Dataset& train,
                                const Dataset& test, const Mask& mask);

// Fraction of mismatches. Throws EmptyTestSet, LengthMismatch.
double mce(std::span<const double> predicted, std::span<const double> actual);

// Relative information gap of the mask on data; +infinity when I(U;y) = 0.
double delta_ir(const Mask& mask, const DiscretizedDataset& data);

struct MetricRecord {
    Method method = Method::ce;
    ClassifierSpec classifier;
    // Empty when the classifier is not evaluable on the selection.
    std::optional<double> mce;
    std::string note;
    double delta_ir = 0.0;
    double delta_t = 0.0;
    std::size_t cardinality = 0;
};

struct MethodSelection {
    Method method = Method::ce;
    std::vector<std::size_t> selected;
    std::vector<double> criterion_values;
    double delta_ir = 0.0;
    double delta_t = 0.0;
};

struct BenchmarkConfig {
    std::vector<Method> methods;
    std::vector<ClassifierSpec> classifiers;
    CEConfig ce;
    SplitSpec split;
    DiscretizeConfig discretize;
};

struct BenchmarkReport {
    std::string dataset;
    std::uint64_t seed = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::vector<std::string> feature_names;
    std::vector<MetricRecord> records;
    std::vector<MethodSelection> selections;
    std::optional<SelectionResult> ce;
};

// Fixed order in which methods and classifiers appear in a report.
std::vector<Method> canonical_methods(std::span<const Method> requested);
std::vector<ClassifierSpec> canonical_classifiers(std::span<const ClassifierSpec> requested);

// Splits, discretizes on the training rows, runs the cross-entropy search first
// to fix the cardinality, then every requested baseline at that cardinality.
// Information quantities come from the training split, MCE from the test split.
BenchmarkReport benchmark(const Dataset& d, const BenchmarkConfig& config);

struct SweepPoint {
    std::size_t k = 0;
    std::optional<double> mce;
    double delta_ir = 0.0;
    Bits mi = 0.0;
};

// Evaluates the first k entries of ranking for each k. train/test labels must be class values.
// Throws InvalidK when any k falls outside [1, ranking.size()].
std::vector<SweepPoint> sweep_cardinality(std::span<const std::size_t> ranking,
                                          const DiscretizedDataset& data, const Dataset& train,
                                          const Dataset& test, std::span<const std::size_t> k_values,
                                          const ClassifierSpec& spec);

struct SweepConfig {
    Method method = Method::ce;
    std::vector<std::size_t> k_values;
    ClassifierSpec classifier;
    CEConfig ce;
    SplitSpec split;
    DiscretizeConfig discretize;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<std::size_t> ranking;
    std::optional<SelectionResult> ce;
};

// Full pipeline: split, discretize, rank by the method (CE orders features by
// descending final p), then sweep.
SweepResult sweep(const Dataset& d, const SweepConfig& config);

}  // namespace cefs
