#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cefs/ce_optimizer.hpp"
#include "cefs/eval.hpp"
#include "json.hpp"

namespace cefs {

using json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "0.3.0";

// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
json number_or_sentinel(double v);

json to_json(const SelectionResult& r, const std::vector<std::string>& names);
json to_json(const MetricRecord& r);
json to_json(const BenchmarkReport& r);

std::string format_number(double v);

// Header "k,mce,delta_ir"; classifiers that cannot be evaluated give "nan".
std::string sweep_csv(const std::vector<SweepPoint>& points);

// Flat table of a benchmark report's records.
std::string records_csv(const json& report);
std::string records_markdown(const json& report);

// Hex FNV-1a 64 of the file bytes.
std::string file_checksum(const std::filesystem::path& path);

struct RunManifest {
    std::vector<std::string> command_line;
    json config;
    std::uint64_t seed = 0;
    std::string dataset_checksum;
    std::string version = tool_version;
    std::string started_at;
    std::string finished_at;

    json to_json() const;
};

// Wall-clock fields that differ between otherwise identical runs.
inline const std::vector<std::string> timing_fields = {"elapsed_seconds", "delta_t", "started_at",
                                                       "finished_at"};

// Copy of j with every timing field replaced by null, recursively.
json mask_timing(const json& j);

std::string utc_timestamp();

}  // namespace cefs
