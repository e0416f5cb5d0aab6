#include "cefs/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cefs/error.hpp"
#include "cefs/random.hpp"

namespace cefs {

const char* to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::binary: return "binary";
        case ColumnKind::integer: return "integer";
        case ColumnKind::real: return "real";
    }
    return "real";
}

ColumnKind infer_kind(std::span<const double> values) {
    bool binary = true;
    bool integral = true;
    for (double v : values) {
        if (v != 0.0 && v != 1.0) binary = false;
        if (!std::isfinite(v) || v != std::floor(v)) {
            integral = false;
            break;
        }
    }
    if (binary && integral) return ColumnKind::binary;
    if (!integral) return ColumnKind::real;
    std::set<double> distinct;
    for (double v : values) {
        distinct.insert(v);
        if (distinct.size() > max_integer_levels) return ColumnKind::real;
    }
    return ColumnKind::integer;
}

namespace {

void check_kind(const Column& c) {
    if (c.kind == ColumnKind::binary) {
        for (double v : c.values)
            if (v != 0.0 && v != 1.0)
                throw InvalidArgument("column '" + c.name + "' is tagged binary but holds " +
                                      std::to_string(v));
    } else if (c.kind == ColumnKind::integer) {
        for (double v : c.values)
            if (v != std::floor(v))
                throw InvalidArgument("column '" + c.name + "' is tagged integer but holds " +
                                      std::to_string(v));
    }
}

}  // namespace

Dataset::Dataset(std::string name, std::vector<Column> features, Column label)
    : name_(std::move(name)), features_(std::move(features)), label_(std::move(label)) {
    if (label_.values.empty()) throw EmptyDataset();
    std::unordered_set<std::string> names;
    for (const auto& c : features_) {
        if (c.values.size() != label_.values.size())
            throw LengthMismatch(label_.values.size(), c.values.size());
        if (!names.insert(c.name).second)
            throw InvalidArgument("duplicate column name '" + c.name + "'");
        check_kind(c);
    }
    check_kind(label_);
}

Dataset Dataset::from_values(std::string name,
                             std::vector<std::pair<std::string, std::vector<double>>> features,
                             std::pair<std::string, std::vector<double>> label) {
    std::vector<Column> cols;
    cols.reserve(features.size());
    for (auto& [col_name, values] : features) {
        const auto kind = infer_kind(values);
        cols.push_back({std::move(col_name), std::move(values), kind});
    }
    const auto label_kind = infer_kind(label.second);
    return Dataset(std::move(name), std::move(cols),
                   Column{std::move(label.first), std::move(label.second), label_kind});
}

std::vector<std::string> Dataset::feature_names() const {
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& c : features_) out.push_back(c.name);
    return out;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
    auto pick = [&](const Column& c) {
        Column out{c.name, {}, c.kind};
        out.values.reserve(rows.size());
        for (auto r : rows) out.values.push_back(c.values.at(r));
        return out;
    };
    Dataset out;
    out.name_ = name_;
    out.features_.reserve(features_.size());
    for (const auto& c : features_) out.features_.push_back(pick(c));
    out.label_ = pick(label_);
    return out;
}

Dataset with_label(const Dataset& d, std::vector<double> label_values) {
    if (label_values.size() != d.n()) throw LengthMismatch(d.n(), label_values.size());
    const auto kind = infer_kind(label_values);
    return Dataset(d.name(), d.features(), Column{d.label().name, std::move(label_values), kind});
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<long> parse_index(const std::string& s) {
    long v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
    return v;
}

std::optional<std::size_t> resolve_column(const std::string& key,
                                          const std::vector<std::string>& names) {
    const auto it = std::find(names.begin(), names.end(), key);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    if (auto idx = parse_index(key)) {
        long i = *idx;
        if (i < 0) i += static_cast<long>(names.size());
        if (i >= 0 && static_cast<std::size_t>(i) < names.size()) return static_cast<std::size_t>(i);
    }
    return std::nullopt;
}

}  // namespace

CsvLoad parse_csv(const std::string& text, const CsvOptions& options, std::string name) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::size_t row_number = 0;
    std::size_t dropped = 0;
    bool have_width = false;

    auto set_width = [&](std::size_t width) {
        columns.resize(width);
        if (names.empty())
            for (std::size_t j = 0; j < width; ++j) names.push_back("x" + std::to_string(j));
        have_width = true;
    };

    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (options.header && names.empty() && !have_width) {
            for (auto& c : cells) names.push_back(trim(c));
            set_width(names.size());
            continue;
        }
        if (!have_width) set_width(cells.size());
        if (cells.size() != columns.size())
            throw ParseError(row_number, cells.size(),
                             "expected " + std::to_string(columns.size()) + " cells, found " +
                                 std::to_string(cells.size()));
        std::vector<double> parsed(cells.size());
        bool missing = false;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const auto cell = trim(cells[j]);
            if (cell.empty() || cell == "?") {
                missing = true;
                continue;
            }
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            if (*begin == '+') ++begin;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || ptr != end || !std::isfinite(v))
                throw ParseError(row_number, j + 1, "not a number: '" + cell + "'");
            parsed[j] = v;
        }
        if (missing) {
            ++dropped;
            continue;
        }
        for (std::size_t j = 0; j < parsed.size(); ++j) columns[j].push_back(parsed[j]);
    }

    const auto label_idx = resolve_column(options.label, names);
    if (options.label.empty() || !label_idx) throw LabelColumnMissing(options.label);
    if (columns.empty() || columns[*label_idx].empty()) throw EmptyDataset();

    std::vector<bool> dropped_col(names.size(), false);
    for (const auto& key : options.drop) {
        const auto idx = resolve_column(key, names);
        if (!idx) throw InvalidArgument("cannot drop unknown column '" + key + "'");
        dropped_col[*idx] = true;
    }

    std::vector<std::pair<std::string, std::vector<double>>> features;
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (j == *label_idx || dropped_col[j]) continue;
        features.emplace_back(names[j], std::move(columns[j]));
    }
    CsvLoad out{Dataset::from_values(std::move(name), std::move(features),
                                     {names[*label_idx], std::move(columns[*label_idx])}),
                dropped};
    return out;
}

CsvLoad load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), options, path.stem().string());
}

// ---------------------------------------------------------------------------
// Discretization

namespace {

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::uint32_t bin_of(const std::vector<double>& cuts, double v) {
    return static_cast<std::uint32_t>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

}  // namespace

ColumnEncoding ColumnEncoding::fit(std::span<const double> values, ColumnKind kind,
                                   std::uint32_t bins) {
    ColumnEncoding enc;
    enc.kind_ = kind;
    if (kind != ColumnKind::real) {
        enc.levels_.assign(values.begin(), values.end());
        std::sort(enc.levels_.begin(), enc.levels_.end());
        enc.levels_.erase(std::unique(enc.levels_.begin(), enc.levels_.end()), enc.levels_.end());
        enc.cardinality_ = static_cast<std::uint32_t>(std::max<std::size_t>(enc.levels_.size(), 1));
        return enc;
    }
    if (bins < 2) throw InvalidArgument("real columns need at least 2 bins");
    if (values.empty()) return enc;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    for (std::uint32_t k = 1; k < bins; ++k) {
        const double c = quantile_sorted(sorted, static_cast<double>(k) / bins);
        if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
    }
    // A cut at or below the minimum, or two cuts inside one gap, leaves an empty bin.
    std::vector<std::size_t> counts(cuts.size() + 1, 0);
    for (double v : sorted) ++counts[bin_of(cuts, v)];
    std::vector<double> kept;
    for (std::size_t b = 0; b < cuts.size(); ++b) {
        if (counts[b] == 0) {
            counts[b + 1] += counts[b];
            continue;
        }
        kept.push_back(cuts[b]);
    }
    // Last bin empty: drop the final cut so its rows merge downward.
    if (!kept.empty() && counts.back() == 0) kept.pop_back();
    enc.cuts_ = std::move(kept);
    enc.cardinality_ = static_cast<std::uint32_t>(enc.cuts_.size() + 1);
    return enc;
}

std::uint32_t ColumnEncoding::encode(double value) const {
    if (kind_ == ColumnKind::real) return bin_of(cuts_, value);
    if (levels_.empty()) return 0;
    const auto it = std::lower_bound(levels_.begin(), levels_.end(), value);
    if (it == levels_.end()) return static_cast<std::uint32_t>(levels_.size() - 1);
    const auto idx = static_cast<std::size_t>(it - levels_.begin());
    if (*it == value || idx == 0) return static_cast<std::uint32_t>(idx);
    // Between two levels: nearest, lower on ties.
    return (value - levels_[idx - 1] <= *it - value) ? static_cast<std::uint32_t>(idx - 1)
                                                     : static_cast<std::uint32_t>(idx);
}

std::vector<std::uint32_t> ColumnEncoding::encode(std::span<const double> values) const {
    std::vector<std::uint32_t> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(encode(v));
    return out;
}

Discretizer Discretizer::fit(const Dataset& d, const DiscretizeConfig& config) {
    Discretizer out;
    out.features_.reserve(d.m());
    for (const auto& c : d.features())
        out.features_.push_back(ColumnEncoding::fit(c.values, c.kind, config.bins));
    if (d.label().kind == ColumnKind::real && config.label_bins < 2)
        throw InvalidArgument("a real label needs at least 2 label bins");
    out.label_ = ColumnEncoding::fit(d.label().values, d.label().kind, config.label_bins);
    return out;
}

DiscretizedDataset Discretizer::transform(const Dataset& d) const {
    if (d.m() != features_.size()) throw LengthMismatch(features_.size(), d.m());
    DiscretizedDataset out;
    out.codes.reserve(d.m());
    for (std::size_t j = 0; j < d.m(); ++j) {
        out.codes.push_back(features_[j].encode(d.feature(j).values));
        out.cardinalities.push_back(features_[j].cardinality());
        out.bin_edges.push_back(features_[j].cuts());
        out.names.push_back(d.feature(j).name);
    }
    out.label_codes = label_.encode(d.label().values);
    out.label_cardinality = label_.cardinality();
    out.label_edges = label_.cuts();
    return out;
}

std::vector<double> Discretizer::class_labels(const Dataset& d) const {
    if (label_.kind() != ColumnKind::real) return d.label().values;
    std::vector<double> out;
    out.reserve(d.n());
    for (double v : d.label().values) out.push_back(static_cast<double>(label_.encode(v)));
    return out;
}

DiscretizedDataset discretize(const Dataset& d, const DiscretizeConfig& config) {
    return Discretizer::fit(d, config).transform(d);
}

// ---------------------------------------------------------------------------
// Splitting

Split split(const Dataset& d, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0))
        throw InvalidFraction(spec.train_fraction);
    const std::size_t n = d.n();
    if (n < 2) throw InvalidArgument("split needs at least 2 rows");
    const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * n));

    Rng rng(spec.seed);
    std::vector<std::size_t> train;

    if (!spec.stratified) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        shuffle(order.begin(), order.end(), rng);
        train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    } else {
        // Group rows by label value, classes ordered by value.
        const auto& y = d.label().values;
        std::vector<double> classes(y.begin(), y.end());
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        std::vector<std::vector<std::size_t>> groups(classes.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = std::lower_bound(classes.begin(), classes.end(), y[i]) - classes.begin();
            groups[static_cast<std::size_t>(c)].push_back(i);
        }
        // Largest-remainder quotas summing to n_train.
        std::vector<std::size_t> quota(groups.size());
        std::vector<std::pair<double, std::size_t>> remainders;
        std::size_t assigned = 0;
        for (std::size_t c = 0; c < groups.size(); ++c) {
            const double exact = spec.train_fraction * static_cast<double>(groups[c].size());
            quota[c] = static_cast<std::size_t>(std::floor(exact));
            assigned += quota[c];
            remainders.emplace_back(exact - std::floor(exact), c);
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t r = 0; assigned < n_train && r < remainders.size(); ++r) {
            const auto c = remainders[r].second;
            if (quota[c] < groups[c].size()) {
                ++quota[c];
                ++assigned;
            }
        }
        for (std::size_t c = 0; c < groups.size(); ++c) {
            shuffle(groups[c].begin(), groups[c].end(), rng);
            train.insert(train.end(), groups[c].begin(),
                         groups[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
        }
    }

    std::sort(train.begin(), train.end());
    std::vector<std::size_t> test;
    test.reserve(n - train.size());
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (t < train.size() && train[t] == i) {
            ++t;
            continue;
        }
        test.push_back(i);
    }
    Split out{d.select_rows(train), d.select_rows(test), std::move(train), std::move(test)};
    return out;
}

}  // namespace cefs
