#include "cefs/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "cefs/error.hpp"

namespace cefs {

json number_or_sentinel(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

json to_json(const SelectionResult& r, const std::vector<std::string>& names) {
    const auto idx = r.mask.indices();
    json selected_names = json::array();
    for (auto i : idx) selected_names.push_back(i < names.size() ? names[i] : std::to_string(i));
    return json{
        {"selected_indices", idx},
        {"selected_names", selected_names},
        {"final_p", r.final_p.p},
        {"gamma_trace", r.gamma_trace},
        {"sample_sizes", r.sample_sizes},
        {"rho_trace", r.rho_trace},
        {"iterations", r.iterations},
        {"objective_bits", r.objective},
        {"entropy_y_bits", r.entropy_y},
        {"delta_ir", number_or_sentinel(r.delta_ir)},
        {"elapsed_seconds", r.elapsed_seconds},
        {"converged", r.converged},
    };
}

json to_json(const MetricRecord& r) {
    return json{
        {"method", to_string(r.method)},
        {"classifier", to_string(r.classifier.kind)},
        {"k_neighbors", r.classifier.k_neighbors},
        {"evaluable", r.mce.has_value()},
        {"mce", r.mce ? json(*r.mce) : json(nullptr)},
        {"note", r.note},
        {"delta_ir", number_or_sentinel(r.delta_ir)},
        {"delta_t", r.delta_t},
        {"cardinality", r.cardinality},
    };
}

json to_json(const BenchmarkReport& r) {
    json records = json::array();
    for (const auto& rec : r.records) records.push_back(to_json(rec));
    json selections = json::array();
    for (const auto& s : r.selections) {
        json names = json::array();
        for (auto i : s.selected) names.push_back(r.feature_names.at(i));
        selections.push_back(json{
            {"method", to_string(s.method)},
            {"variant", s.method == Method::mrmr ? "difference" : ""},
            {"selected_indices", s.selected},
            {"selected_names", names},
            {"criterion_values", s.criterion_values},
            {"delta_ir", number_or_sentinel(s.delta_ir)},
            {"delta_t", s.delta_t},
        });
    }
    return json{
        {"dataset", r.dataset},
        {"seed", r.seed},
        {"n_train", r.n_train},
        {"n_test", r.n_test},
        {"records", records},
        {"selections", selections},
        {"ce", r.ce ? to_json(*r.ce, r.feature_names) : json(nullptr)},
    };
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::ostringstream out;
    out << "k,mce,delta_ir\n";
    for (const auto& p : points)
        out << p.k << ',' << (p.mce ? format_number(*p.mce) : "nan") << ','
            << format_number(p.delta_ir) << '\n';
    return out.str();
}

namespace {

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_number(v.get<double>());
    return v.dump();
}

const char* record_columns[] = {"method", "classifier", "cardinality", "mce",
                                "delta_ir", "delta_t", "evaluable"};

}  // namespace

std::string records_csv(const json& report) {
    if (!report.contains("records")) throw InvalidArgument("not a benchmark report: no records");
    std::ostringstream out;
    for (std::size_t i = 0; i < std::size(record_columns); ++i)
        out << (i ? "," : "") << record_columns[i];
    out << '\n';
    for (const auto& rec : report["records"]) {
        for (std::size_t i = 0; i < std::size(record_columns); ++i)
            out << (i ? "," : "") << cell(rec.value(record_columns[i], json()));
        out << '\n';
    }
    return out.str();
}

std::string records_markdown(const json& report) {
    if (!report.contains("records")) throw InvalidArgument("not a benchmark report: no records");
    std::ostringstream out;
    out << '|';
    for (const char* c : record_columns) out << ' ' << c << " |";
    out << "\n|";
    for (std::size_t i = 0; i < std::size(record_columns); ++i) out << " --- |";
    out << '\n';
    for (const auto& rec : report["records"]) {
        out << '|';
        for (const char* c : record_columns) {
            auto v = cell(rec.value(c, json()));
            out << ' ' << (v.empty() ? "//" : v) << " |";
        }
        out << '\n';
    }
    return out.str();
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

json RunManifest::to_json() const {
    return json{
        {"command_line", command_line},
        {"config", config},
        {"seed", seed},
        {"dataset_checksum", dataset_checksum},
        {"tool_version", version},
        {"started_at", started_at},
        {"finished_at", finished_at},
    };
}

json mask_timing(const json& j) {
    if (j.is_object()) {
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) {
            const bool timing =
                std::find(timing_fields.begin(), timing_fields.end(), it.key()) != timing_fields.end();
            out[it.key()] = timing ? json(nullptr) : mask_timing(it.value());
        }
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (const auto& v : j) out.push_back(mask_timing(v));
        return out;
    }
    return j;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace cefs
