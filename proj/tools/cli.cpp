#include "cefs/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cefs/baselines.hpp"
#include "cefs/ce_optimizer.hpp"
#include "cefs/data.hpp"
#include "cefs/error.hpp"
#include "cefs/eval.hpp"
#include "cefs/report.hpp"

namespace cefs::cli {

namespace {

struct DataOptions {
    std::string path;
    std::string label;
    bool no_header = false;
    std::vector<std::string> drop;
    DiscretizeConfig discretize;
};

struct SplitOptions {
    double train_fraction = 0.9;
    bool no_stratify = false;
};

struct CeOptions {
    CEConfig config;
    std::string extract = "threshold";
    bool static_s = false;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
    cmd->add_option("--data", d.path, "CSV dataset (relative paths also searched in $CEFS_DATA_DIR)")
        ->required();
    cmd->add_option("--label", d.label, "Label column name or 0-based index")->required();
    cmd->add_flag("--no-header", d.no_header, "The first row holds data, not column names");
    cmd->add_option("--drop", d.drop, "Columns excluded from the features (repeatable)")
        ->delimiter(',');
    cmd->add_option("--bins", d.discretize.bins, "Equal-frequency bins for real features")
        ->capture_default_str();
    cmd->add_option("--label-bins", d.discretize.label_bins, "Bins for a real-valued label")
        ->capture_default_str();
}

void add_split_options(CLI::App* cmd, SplitOptions& s) {
    cmd->add_option("--train-fraction", s.train_fraction, "Training share of the rows")
        ->capture_default_str();
    cmd->add_flag("--no-stratify", s.no_stratify, "Split without preserving class proportions");
}

void add_ce_options(CLI::App* cmd, CeOptions& o) {
    auto& c = o.config;
    cmd->add_option("--seed", c.seed, "Random seed for splitting and sampling")->capture_default_str();
    cmd->add_option("--max-iters", c.max_iters, "Iteration cap")->capture_default_str();
    cmd->add_option("--epsilon", c.epsilon, "Stopping tolerance on gamma")->capture_default_str();
    cmd->add_option("--lag", c.lag, "Gamma lag d of the stopping rule")->capture_default_str();
    cmd->add_option("--alpha", c.smoothing_alpha, "Smoothing of the probability update")
        ->capture_default_str();
    cmd->add_option("--penalty", c.size_penalty, "Bits subtracted per selected feature")
        ->capture_default_str();
    cmd->add_option("--rho-coef", c.rho_coefficient, "rho = coef * m / S")->capture_default_str();
    cmd->add_option("--p-init", c.p_init, "Initial inclusion probability")->capture_default_str();
    cmd->add_option("--s-min", c.s_min, "Smallest sample size (0: m)")->capture_default_str();
    cmd->add_option("--s-max", c.s_max, "Largest sample size (0: 20 * s_min)")->capture_default_str();
    cmd->add_flag("--static-s", o.static_s, "Always draw s_max samples");
    cmd->add_option("--extract", o.extract, "Final subset rule")
        ->check(CLI::IsMember({"threshold", "sample"}))
        ->capture_default_str();
    cmd->add_option("--threads", c.threads, "Scoring threads")->capture_default_str();
}

CEConfig resolve(const CeOptions& o) {
    CEConfig c = o.config;
    c.adaptive_s = !o.static_s;
    c.extract_policy = o.extract == "sample" ? ExtractPolicy::sample : ExtractPolicy::threshold;
    return c;
}

std::filesystem::path resolve_data_path(const std::string& p) {
    std::filesystem::path path(p);
    if (std::filesystem::exists(path) || path.is_absolute()) return path;
    if (const char* dir = std::getenv(data_dir_env)) {
        auto alt = std::filesystem::path(dir) / path;
        if (std::filesystem::exists(alt)) return alt;
    }
    return path;
}

struct Loaded {
    CsvLoad csv;
    std::filesystem::path path;
};

Loaded load(const DataOptions& d) {
    CsvOptions opts;
    opts.label = d.label;
    opts.header = !d.no_header;
    opts.drop = d.drop;
    auto path = resolve_data_path(d.path);
    return Loaded{load_csv(path, opts), path};
}

json data_config(const DataOptions& d, const Loaded& l) {
    return json{
        {"data", d.path},
        {"label", d.label},
        {"header", !d.no_header},
        {"drop", d.drop},
        {"bins", d.discretize.bins},
        {"label_bins", d.discretize.label_bins},
        {"n", l.csv.dataset.n()},
        {"m", l.csv.dataset.m()},
        {"dropped_rows", l.csv.dropped_rows},
    };
}

json ce_config(const CEConfig& c, std::size_t m) {
    return json{
        {"seed", c.seed},
        {"s_min", c.resolved_s_min(m)},
        {"s_max", c.resolved_s_max(m)},
        {"rho_coefficient", c.rho_coefficient},
        {"epsilon", c.epsilon},
        {"lag", c.lag},
        {"max_iters", c.max_iters},
        {"smoothing_alpha", c.smoothing_alpha},
        {"p_init", c.p_init},
        {"size_penalty", c.size_penalty},
        {"adaptive_s", c.adaptive_s},
        {"extract_policy", c.extract_policy == ExtractPolicy::sample ? "sample" : "threshold"},
        {"threads", c.threads},
    };
}

RunManifest make_manifest(const std::vector<std::string>& args, const Loaded& l, std::uint64_t seed,
                          json config, const std::string& started) {
    RunManifest m;
    m.command_line = args;
    m.config = std::move(config);
    m.seed = seed;
    m.dataset_checksum = file_checksum(l.path);
    m.started_at = started;
    m.finished_at = utc_timestamp();
    return m;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + out_path);
    f << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::size_t parse_size(const std::string& s, const std::string& whole) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidArgument("malformed k list '" + whole + "'");
    return v;
}

}  // namespace

std::vector<std::size_t> parse_k_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& part : split_list(text)) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_size(part, text));
            continue;
        }
        const auto lo = parse_size(part.substr(0, dots), text);
        const auto hi = parse_size(part.substr(dots + 2), text);
        if (lo > hi) throw InvalidArgument("empty k range '" + part + "'");
        for (auto k = lo; k <= hi; ++k) out.push_back(k);
    }
    if (out.empty()) throw InvalidArgument("malformed k list '" + text + "'");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-entropy search for information-maximising feature subsets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    DataOptions data;
    SplitOptions split_opts;
    CeOptions ce_opts;
    std::string out_path;

    auto* select_cmd = app.add_subcommand("select", "Run the cross-entropy search on a whole dataset");
    add_data_options(select_cmd, data);
    add_ce_options(select_cmd, ce_opts);
    select_cmd->add_option("--out", out_path, "Write JSON here instead of standard output");

    std::string methods_text = "ce,mim,cmim,mrmr,disr";
    std::string classifiers_text = "nb-pooled,nb-diag,knn";
    std::size_t k_neighbors = 3;
    auto* bench_cmd = app.add_subcommand("benchmark", "Compare selectors on a held-out split");
    add_data_options(bench_cmd, data);
    add_split_options(bench_cmd, split_opts);
    add_ce_options(bench_cmd, ce_opts);
    bench_cmd->add_option("--methods", methods_text, "Comma list of ce, mim, cmim, mrmr, disr")
        ->capture_default_str();
    bench_cmd->add_option("--classifiers", classifiers_text, "Comma list of nb-pooled, nb-diag, knn")
        ->capture_default_str();
    bench_cmd->add_option("--k-neighbors", k_neighbors, "Neighbours for knn")->capture_default_str();
    bench_cmd->add_option("--out", out_path, "Write JSON here instead of standard output");

    std::string method_text = "ce";
    std::string ks_text;
    std::string classifier_text = "nb-diag";
    std::string manifest_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "MCE and information gap against subset size");
    add_data_options(sweep_cmd, data);
    add_split_options(sweep_cmd, split_opts);
    add_ce_options(sweep_cmd, ce_opts);
    sweep_cmd->add_option("--method", method_text, "ce, mim, cmim, mrmr or disr")->capture_default_str();
    sweep_cmd->add_option("--ks", ks_text, "Subset sizes, e.g. 1..10 or 1,3,5")->required();
    sweep_cmd->add_option("--classifier", classifier_text, "nb-pooled, nb-diag or knn")
        ->capture_default_str();
    sweep_cmd->add_option("--k-neighbors", k_neighbors, "Neighbours for knn")->capture_default_str();
    sweep_cmd->add_option("--out", out_path, "Write CSV here instead of standard output");
    sweep_cmd->add_option("--manifest", manifest_path,
                          "Manifest path (default: <out>.manifest.json, or standard error)");

    std::string in_path;
    std::string format = "csv";
    auto* report_cmd = app.add_subcommand("report", "Convert a benchmark JSON report to a table");
    report_cmd->add_option("--in", in_path, "Benchmark JSON file")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--format", format, "csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    report_cmd->add_option("--out", out_path, "Write the table here instead of standard output");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }

    const std::string started = utc_timestamp();
    try {
        if (report_cmd->parsed()) {
            std::ifstream in(in_path);
            const auto report = json::parse(in);
            emit(format == "csv" ? records_csv(report) : records_markdown(report), out_path, out);
            return exit_ok;
        }

        const auto loaded = load(data);
        const auto& d = loaded.csv.dataset;
        const CEConfig ce = resolve(ce_opts);
        SplitSpec split_spec{split_opts.train_fraction, ce.seed, !split_opts.no_stratify};

        if (select_cmd->parsed()) {
            const auto ddata = discretize(d, data.discretize);
            const auto result = run(ddata, ce);
            json doc = to_json(result, d.feature_names());
            doc["dataset"] = d.name();
            doc["manifest"] =
                make_manifest(args, loaded, ce.seed,
                              json{{"data", data_config(data, loaded)}, {"ce", ce_config(ce, d.m())}},
                              started)
                    .to_json();
            emit(doc.dump(2) + "\n", out_path, out);
            return result.converged ? exit_ok : exit_not_converged;
        }

        if (bench_cmd->parsed()) {
            BenchmarkConfig cfg;
            for (const auto& name : split_list(methods_text)) cfg.methods.push_back(parse_method(name));
            for (const auto& name : split_list(classifiers_text))
                cfg.classifiers.push_back({parse_classifier(name), k_neighbors});
            cfg.ce = ce;
            cfg.split = split_spec;
            cfg.discretize = data.discretize;
            const auto report = benchmark(d, cfg);
            json doc = to_json(report);
            json methods = json::array();
            for (auto m : canonical_methods(cfg.methods)) methods.push_back(to_string(m));
            json classifiers = json::array();
            for (const auto& c : canonical_classifiers(cfg.classifiers))
                classifiers.push_back(to_string(c.kind));
            doc["manifest"] =
                make_manifest(args, loaded, ce.seed,
                              json{{"data", data_config(data, loaded)},
                                   {"ce", ce_config(ce, d.m())},
                                   {"split", {{"train_fraction", split_spec.train_fraction},
                                              {"stratified", split_spec.stratified}}},
                                   {"methods", methods},
                                   {"classifiers", classifiers},
                                   {"k_neighbors", k_neighbors}},
                              started)
                    .to_json();
            emit(doc.dump(2) + "\n", out_path, out);
            return report.ce && !report.ce->converged ? exit_not_converged : exit_ok;
        }

        if (sweep_cmd->parsed()) {
            SweepConfig cfg;
            cfg.method = parse_method(method_text);
            cfg.k_values = parse_k_list(ks_text);
            for (auto k : cfg.k_values)
                if (k < 1 || k > d.m())
                    throw InvalidArgument("k=" + std::to_string(k) + " outside [1, m] with m=" +
                                          std::to_string(d.m()));
            cfg.classifier = {parse_classifier(classifier_text), k_neighbors};
            cfg.ce = ce;
            cfg.split = split_spec;
            cfg.discretize = data.discretize;
            const auto result = sweep(d, cfg);
            emit(sweep_csv(result.points), out_path, out);
            const auto manifest =
                make_manifest(args, loaded, ce.seed,
                              json{{"data", data_config(data, loaded)},
                                   {"ce", ce_config(ce, d.m())},
                                   {"split", {{"train_fraction", split_spec.train_fraction},
                                              {"stratified", split_spec.stratified}}},
                                   {"method", to_string(cfg.method)},
                                   {"ks", cfg.k_values},
                                   {"classifier", to_string(cfg.classifier.kind)},
                                   {"ranking", result.ranking}},
                              started)
                    .to_json()
                    .dump();
            if (manifest_path.empty() && !out_path.empty()) manifest_path = out_path + ".manifest.json";
            if (manifest_path.empty()) err << "manifest: " << manifest << '\n';
            else emit(manifest + "\n", manifest_path, out);
            return result.ce && !result.ce->converged ? exit_not_converged : exit_ok;
        }
    } catch (const InvalidK& e) {
        err << "error: " << e.what() << " (m=" << e.m() << ")\n";
        return exit_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}

}  // namespace cefs::cli
