#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>

#include "cefs/data.hpp"
#include "cefs/error.hpp"

using namespace cefs;

namespace {

CsvOptions label(const std::string& name) {
    CsvOptions o;
    o.label = name;
    return o;
}

std::filesystem::path data_file(const char* name) {
    return std::filesystem::path(CEFS_SOURCE_DIR) / "data" / name;
}

}  // namespace

TEST_CASE("load_csv builds a dataset from a small file") {
    const auto r = parse_csv("a,b,y\n1,0.5,0\n2,1.5,1\n3,2.5,0\n4,3.5,1\n", label("y"));
    CHECK(r.dataset.n() == 4);
    CHECK(r.dataset.m() == 2);
    CHECK(r.dropped_rows == 0);
    CHECK(r.dataset.feature_names() == std::vector<std::string>{"a", "b"});
    CHECK(r.dataset.feature(0).kind == ColumnKind::integer);
    CHECK(r.dataset.feature(1).kind == ColumnKind::real);
    CHECK(r.dataset.label().kind == ColumnKind::binary);
}

TEST_CASE("load_csv reads the bundled WDBC copy") {
    const auto r = load_csv(data_file("wdbc.csv"), label("diagnosis"));
    CHECK(r.dataset.n() == 569);
    CHECK(r.dataset.m() == 30);
    CHECK(r.dataset.m() <= 32);
    CHECK(r.dataset.label().kind == ColumnKind::binary);
    const auto& y = r.dataset.label().values;
    CHECK(std::count(y.begin(), y.end(), 1.0) == 212);  // malignant cases
}

TEST_CASE("load_csv reports the offending cell") {
    try {
        parse_csv("a,y\n1,0\nfoo,1\n", label("y"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(e.column() == 1);
    }
}

TEST_CASE("load_csv error paths") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", label("y")), FileNotFound);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", label("y")), LabelColumnMissing);
    CHECK_THROWS_AS(parse_csv("a,y\n?,1\n,0\n", label("y")), EmptyDataset);
}

TEST_CASE("missing values drop whole rows") {
    const auto r = parse_csv("a,b,y\n1,?,0\n2,3,1\n,4,1\n5,6,0\n", label("y"));
    CHECK(r.dataset.n() == 2);
    CHECK(r.dropped_rows == 2);
    CHECK(r.dataset.feature(0).values == std::vector<double>{2, 5});
}

TEST_CASE("label by index, headerless files and dropped columns") {
    CsvOptions o;
    o.label = "-1";
    o.header = false;
    o.drop = {"0"};
    const auto r = parse_csv("7,1,0\n8,0,1\n9,1,1\n", o);
    CHECK(r.dataset.m() == 1);
    CHECK(r.dataset.feature(0).name == "x1");
    CHECK(r.dataset.label().values == std::vector<double>{0, 1, 1});
}

TEST_CASE("kind inference thresholds") {
    std::vector<double> many(40);
    std::iota(many.begin(), many.end(), 0.0);
    CHECK(infer_kind(many) == ColumnKind::real);
    many.resize(32);
    CHECK(infer_kind(many) == ColumnKind::integer);
    CHECK(infer_kind(std::vector<double>{0, 1, 1}) == ColumnKind::binary);
    CHECK(infer_kind(std::vector<double>{0.5, 1}) == ColumnKind::real);
}

TEST_CASE("dataset invariants are enforced") {
    CHECK_THROWS_AS(Dataset("d", {{"a", {1, 2}, ColumnKind::real}}, {"y", {0}, ColumnKind::binary}),
                    LengthMismatch);
    CHECK_THROWS_AS(Dataset("d", {{"a", {1}, ColumnKind::real}, {"a", {2}, ColumnKind::real}},
                            {"y", {0}, ColumnKind::binary}),
                    InvalidArgument);
    CHECK_THROWS_AS(Dataset("d", {{"a", {2}, ColumnKind::binary}}, {"y", {0}, ColumnKind::binary}),
                    InvalidArgument);
}

TEST_CASE("discretize examples") {
    const auto d = Dataset::from_values(
        "t", {{"bin", {0, 1, 0, 1}}, {"real", {1.0, 2.0, 3.0, 4.5}}, {"const", {5, 5, 5, 5}}},
        {"y", {0, 1, 1, 0}});
    const auto dd = discretize(d, {2, 5});
    CHECK(dd.codes[0] == std::vector<std::uint32_t>{0, 1, 0, 1});
    CHECK(dd.cardinalities[0] == 2);
    // Median of {1,2,3,4.5} by linear interpolation is 2.5.
    CHECK(dd.codes[1] == std::vector<std::uint32_t>{0, 0, 1, 1});
    CHECK(dd.bin_edges[1] == std::vector<double>{2.5});
    CHECK(dd.codes[2] == std::vector<std::uint32_t>{0, 0, 0, 0});
    CHECK(dd.cardinalities[2] == 1);
    CHECK(dd.label_cardinality == 2);
}

TEST_CASE("the 1,2,3,4 median example") {
    const auto d = Dataset::from_values("t", {{"r", {1.0, 2.0, 3.0, 4.0}}}, {"y", {0, 1, 0, 1}});
    // [1,2,3,4] is detected as integer, so force the real path explicitly.
    const auto enc = ColumnEncoding::fit(d.feature(0).values, ColumnKind::real, 2);
    CHECK(enc.encode(d.feature(0).values) == std::vector<std::uint32_t>{0, 0, 1, 1});
    CHECK(enc.cardinality() == 2);
}

TEST_CASE("integer levels are relabelled densely in value order") {
    const auto enc = ColumnEncoding::fit(std::vector<double>{7, 3, 7, 11}, ColumnKind::integer, 10);
    CHECK(enc.encode(std::vector<double>{7, 3, 7, 11}) == std::vector<std::uint32_t>{1, 0, 1, 2});
    CHECK(enc.encode(4.0) == 0);   // nearest fitted level
    CHECK(enc.encode(100.0) == 2);
}

TEST_CASE("equal-frequency binning property") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint32_t bins = 2 + static_cast<std::uint32_t>(rng() % 9);
        const std::size_t per_bin = 1 + rng() % 20;
        std::vector<double> v(bins * per_bin);
        std::uniform_real_distribution<double> u(-100.0, 100.0);
        for (auto& x : v) x = u(rng);
        const auto enc = ColumnEncoding::fit(v, ColumnKind::real, bins);
        const auto codes = enc.encode(v);
        std::vector<std::size_t> counts(enc.cardinality(), 0);
        for (auto c : codes) ++counts[c];
        REQUIRE(enc.cardinality() == bins);
        for (auto c : counts) CHECK(c == per_bin);
    }
}

TEST_CASE("duplicated quantiles merge and codes stay in range") {
    const std::vector<double> v{1, 1, 1, 1, 1, 1, 2, 3.5};
    const auto enc = ColumnEncoding::fit(v, ColumnKind::real, 4);
    const auto codes = enc.encode(v);
    CHECK(enc.cardinality() < 4);
    for (auto c : codes) CHECK(c < enc.cardinality());
    std::set<std::uint32_t> used(codes.begin(), codes.end());
    CHECK(used.size() == enc.cardinality());
}

TEST_CASE("real labels need label bins") {
    const auto d = Dataset::from_values("t", {{"a", {0, 1, 0, 1}}}, {"y", {0.1, 0.7, 1.3, 2.2}});
    CHECK_THROWS_AS(discretize(d, {10, 1}), InvalidArgument);
    const auto dd = discretize(d, {10, 2});
    CHECK(dd.label_codes == std::vector<std::uint32_t>{0, 0, 1, 1});
}

TEST_CASE("discretization is deterministic") {
    const auto r = load_csv(data_file("wdbc.csv"), label("diagnosis"));
    const auto a = discretize(r.dataset);
    const auto b = discretize(load_csv(data_file("wdbc.csv"), label("diagnosis")).dataset);
    CHECK(a.codes == b.codes);
    CHECK(a.label_codes == b.label_codes);
    for (std::size_t j = 0; j < a.m(); ++j)
        for (auto c : a.codes[j]) REQUIRE(c < a.cardinalities[j]);
}

namespace {

Dataset labelled(std::size_t n, std::uint64_t seed, std::size_t classes) {
    std::mt19937_64 rng(seed);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(i);
        y[i] = static_cast<double>(rng() % classes);
    }
    return Dataset::from_values("s", {{"x", x}}, {"y", y});
}

}  // namespace

TEST_CASE("split sizes and determinism") {
    const auto d = labelled(10, 1, 2);
    const auto a = split(d, {0.9, 42, true});
    CHECK(a.train.n() == 9);
    CHECK(a.test.n() == 1);
    const auto b = split(d, {0.9, 42, true});
    CHECK(a.train_rows == b.train_rows);
    CHECK(a.test_rows == b.test_rows);

    const auto all = split(d, {1.0, 1, false});
    CHECK(all.train.n() == 10);
    CHECK(all.test.n() == 0);

    CHECK_THROWS_AS(split(d, {0.0, 1, true}), InvalidFraction);
    CHECK_THROWS_AS(split(d, {1.5, 1, true}), InvalidFraction);
}

TEST_CASE("split partition and stratification properties") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 300;
        const std::size_t classes = 1 + rng() % 5;
        const double fraction = 0.05 + 0.95 * static_cast<double>(rng() % 1000) / 1000.0;
        const auto d = labelled(n, rng(), classes);
        const bool stratified = trial % 2 == 0;
        const auto s = split(d, {fraction, rng(), stratified});

        std::vector<std::size_t> all = s.train_rows;
        all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expect(n);
        std::iota(expect.begin(), expect.end(), 0);
        REQUIRE(all == expect);
        CHECK(s.train_rows.size() == static_cast<std::size_t>(std::llround(fraction * n)));

        if (!stratified) continue;
        for (std::size_t c = 0; c < classes; ++c) {
            const auto& y = d.label().values;
            const double total = static_cast<double>(std::count(y.begin(), y.end(), double(c)));
            const double in_train = static_cast<double>(
                std::count(s.train.label().values.begin(), s.train.label().values.end(), double(c)));
            CHECK(std::abs(in_train - fraction * total) <= 1.0 + 1e-9);
        }
    }
}
