#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cefs/baselines.hpp"
#include "cefs/ce_optimizer.hpp"
#include "cefs/cli.hpp"
#include "cefs/data.hpp"
#include "cefs/error.hpp"
#include "cefs/eval.hpp"
#include "cefs/infotheory.hpp"
#include "cefs/report.hpp"

namespace py = pybind11;
using namespace cefs;

namespace {

JointStateColumn state_of(const std::vector<std::uint32_t>& codes) { return as_state(codes); }

JointStateColumn joint_of(const std::vector<std::vector<std::uint32_t>>& columns) {
    std::vector<CodeView> views(columns.begin(), columns.end());
    return joint_encode(views);
}

Dataset make_dataset(const std::vector<std::vector<double>>& columns,
                     const std::vector<double>& label, std::vector<std::string> names,
                     const std::string& label_name, const std::string& name) {
    if (names.empty())
        for (std::size_t j = 0; j < columns.size(); ++j) names.push_back("x" + std::to_string(j));
    if (names.size() != columns.size()) throw LengthMismatch(columns.size(), names.size());
    std::vector<std::pair<std::string, std::vector<double>>> features;
    for (std::size_t j = 0; j < columns.size(); ++j) features.emplace_back(names[j], columns[j]);
    return Dataset::from_values(name, std::move(features), {label_name, label});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cross-entropy feature subset search over discretized data";
    m.attr("__version__") = tool_version;

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<FileNotFound>(m, "FileNotFound", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<EmptyDataset>(m, "EmptyDataset", base.ptr());
    py::register_exception<LabelColumnMissing>(m, "LabelColumnMissing", base.ptr());
    py::register_exception<LengthMismatch>(m, "LengthMismatch", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<EmptyElite>(m, "EmptyElite", base.ptr());
    py::register_exception<SingularCovariance>(m, "SingularCovariance", base.ptr());
    py::register_exception<EmptyTestSet>(m, "EmptyTestSet", base.ptr());

    // data
    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("columns"), py::arg("label"),
             py::arg("names") = std::vector<std::string>{}, py::arg("label_name") = "y",
             py::arg("name") = "dataset")
        .def_property_readonly("n", &Dataset::n)
        .def_property_readonly("m", &Dataset::m)
        .def_property_readonly("name", &Dataset::name)
        .def_property_readonly("feature_names", &Dataset::feature_names)
        .def_property_readonly("label", [](const Dataset& d) { return d.label().values; })
        .def_property_readonly("column_kinds",
                               [](const Dataset& d) {
                                   std::vector<std::string> out;
                                   for (const auto& c : d.features()) out.emplace_back(to_string(c.kind));
                                   return out;
                               })
        .def("column", [](const Dataset& d, std::size_t j) { return d.feature(j).values; });

    m.def(
        "load_csv",
        [](const std::filesystem::path& path, const std::string& label, bool header,
           const std::vector<std::string>& drop) {
            auto r = load_csv(path, CsvOptions{label, header, drop});
            return py::make_tuple(std::move(r.dataset), r.dropped_rows);
        },
        py::arg("path"), py::arg("label"), py::arg("header") = true,
        py::arg("drop") = std::vector<std::string>{},
        "Load a CSV file; returns (dataset, dropped_row_count).");

    py::class_<DiscretizedDataset>(m, "DiscretizedDataset")
        .def_readonly("codes", &DiscretizedDataset::codes)
        .def_readonly("cardinalities", &DiscretizedDataset::cardinalities)
        .def_readonly("label_codes", &DiscretizedDataset::label_codes)
        .def_readonly("label_cardinality", &DiscretizedDataset::label_cardinality)
        .def_readonly("bin_edges", &DiscretizedDataset::bin_edges)
        .def_readonly("names", &DiscretizedDataset::names)
        .def_property_readonly("n", &DiscretizedDataset::n)
        .def_property_readonly("m", &DiscretizedDataset::m);

    m.def(
        "discretize",
        [](const Dataset& d, std::uint32_t bins, std::uint32_t label_bins) {
            return discretize(d, DiscretizeConfig{bins, label_bins});
        },
        py::arg("dataset"), py::arg("bins") = 10, py::arg("label_bins") = 5);

    m.def(
        "split",
        [](const Dataset& d, double train_fraction, std::uint64_t seed, bool stratified) {
            auto s = split(d, SplitSpec{train_fraction, seed, stratified});
            return py::make_tuple(std::move(s.train), std::move(s.test), s.train_rows, s.test_rows);
        },
        py::arg("dataset"), py::arg("train_fraction") = 0.9, py::arg("seed") = 0,
        py::arg("stratified") = true, "Returns (train, test, train_rows, test_rows).");

    // information theory over plain code lists
    m.def("entropy", [](const std::vector<std::uint32_t>& x) { return entropy(state_of(x)); });
    m.def("joint_encode", [](const std::vector<std::vector<std::uint32_t>>& cols) {
        auto s = joint_of(cols);
        return py::make_tuple(s.codes, s.cardinality);
    });
    m.def("mutual_information", [](const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& y) {
        return mutual_information(state_of(u), state_of(y));
    });
    m.def("conditional_entropy",
          [](const std::vector<std::uint32_t>& y, const std::vector<std::uint32_t>& u) {
              return conditional_entropy(state_of(y), state_of(u));
          });
    m.def(
        "conditional_mi",
        [](const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y,
           const std::vector<std::uint32_t>& u) {
            return conditional_mi(state_of(x), state_of(y), u.empty() ? JointStateColumn{} : state_of(u));
        },
        py::arg("x"), py::arg("y"), py::arg("u") = std::vector<std::uint32_t>{});

    // cross-entropy search
    py::enum_<ExtractPolicy>(m, "ExtractPolicy")
        .value("threshold", ExtractPolicy::threshold)
        .value("sample", ExtractPolicy::sample);

    py::class_<CEConfig>(m, "CEConfig")
        .def(py::init<>())
        .def_readwrite("s_min", &CEConfig::s_min)
        .def_readwrite("s_max", &CEConfig::s_max)
        .def_readwrite("rho_coefficient", &CEConfig::rho_coefficient)
        .def_readwrite("epsilon", &CEConfig::epsilon)
        .def_readwrite("lag", &CEConfig::lag)
        .def_readwrite("max_iters", &CEConfig::max_iters)
        .def_readwrite("seed", &CEConfig::seed)
        .def_readwrite("smoothing_alpha", &CEConfig::smoothing_alpha)
        .def_readwrite("p_init", &CEConfig::p_init)
        .def_readwrite("extract_policy", &CEConfig::extract_policy)
        .def_readwrite("adaptive_s", &CEConfig::adaptive_s)
        .def_readwrite("size_penalty", &CEConfig::size_penalty)
        .def_readwrite("threads", &CEConfig::threads);

    py::class_<SelectionResult>(m, "SelectionResult")
        .def_property_readonly("selected_indices", [](const SelectionResult& r) { return r.mask.indices(); })
        .def_property_readonly("final_p", [](const SelectionResult& r) { return r.final_p.p; })
        .def_readonly("gamma_trace", &SelectionResult::gamma_trace)
        .def_readonly("sample_sizes", &SelectionResult::sample_sizes)
        .def_readonly("iterations", &SelectionResult::iterations)
        .def_readonly("objective", &SelectionResult::objective)
        .def_readonly("entropy_y", &SelectionResult::entropy_y)
        .def_readonly("delta_ir", &SelectionResult::delta_ir)
        .def_readonly("elapsed_seconds", &SelectionResult::elapsed_seconds)
        .def_readonly("converged", &SelectionResult::converged);

    m.def("run", &run, py::arg("data"), py::arg("config") = CEConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "score",
        [](const std::vector<std::size_t>& selected, const DiscretizedDataset& d) {
            return score(Mask::from_indices(d.m(), selected), d);
        },
        py::arg("selected"), py::arg("data"));
    m.def("elite_threshold", [](const std::vector<double>& scores, double rho) {
        auto e = elite_threshold(scores, rho);
        return py::make_tuple(e.gamma, e.indices);
    });
    m.def(
        "update_probabilities",
        [](const std::vector<std::vector<std::uint8_t>>& elite, const std::vector<double>& previous,
           double alpha) {
            std::vector<Mask> masks;
            for (const auto& bits : elite) masks.emplace_back(bits);
            return update_probabilities(masks, BernoulliModel{previous}, alpha).p;
        },
        py::arg("elite"), py::arg("previous"), py::arg("alpha") = 1.0);

    // baselines
    py::class_<RankedSelection>(m, "RankedSelection")
        .def_readonly("order", &RankedSelection::order)
        .def_readonly("criterion_values", &RankedSelection::criterion_values);
    m.def("rank_mim", &rank_mim);
    m.def("select_cmim", &select_cmim);
    m.def("select_mrmr", &select_mrmr);
    m.def("select_disr", &select_disr);

    // evaluation
    m.def(
        "fit_predict",
        [](const std::string& classifier, const Dataset& train, const Dataset& test,
           const std::vector<std::size_t>& selected, std::size_t k_neighbors) {
            return fit_predict(ClassifierSpec{parse_classifier(classifier), k_neighbors}, train, test,
                               Mask::from_indices(train.m(), selected));
        },
        py::arg("classifier"), py::arg("train"), py::arg("test"), py::arg("selected"),
        py::arg("k_neighbors") = 3);
    m.def("mce", [](const std::vector<double>& p, const std::vector<double>& a) { return mce(p, a); });
    m.def(
        "delta_ir",
        [](const std::vector<std::size_t>& selected, const DiscretizedDataset& d) {
            return delta_ir(Mask::from_indices(d.m(), selected), d);
        },
        py::arg("selected"), py::arg("data"));

    m.def(
        "benchmark_json",
        [](const Dataset& d, const std::vector<std::string>& methods,
           const std::vector<std::string>& classifiers, const CEConfig& ce, double train_fraction,
           bool stratified, std::uint32_t bins, std::uint32_t label_bins) {
            BenchmarkConfig cfg;
            for (const auto& name : methods) cfg.methods.push_back(parse_method(name));
            for (const auto& name : classifiers) cfg.classifiers.push_back({parse_classifier(name), 3});
            cfg.ce = ce;
            cfg.split = SplitSpec{train_fraction, ce.seed, stratified};
            cfg.discretize = DiscretizeConfig{bins, label_bins};
            py::gil_scoped_release release;
            return to_json(benchmark(d, cfg)).dump();
        },
        py::arg("dataset"), py::arg("methods"), py::arg("classifiers"), py::arg("config") = CEConfig{},
        py::arg("train_fraction") = 0.9, py::arg("stratified") = true, py::arg("bins") = 10,
        py::arg("label_bins") = 5);

    m.def(
        "cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "cefs");
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command line; returns (exit_code, stdout, stderr).");
}
