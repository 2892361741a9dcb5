#pragma once

#include "colexforge/error.hpp"
#include "colexforge/select.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace colexforge {

struct PipelineConfig {
    std::filesystem::path dataset_dir;
    std::optional<std::filesystem::path> replacement_table;
    SelectionConfig selection;
    std::size_t min_families = 3;
    std::uint64_t seed = 42;
    std::filesystem::path output_dir = "out";
    int threads = 0;

    /// Relative paths in the file are resolved against `base_dir`.
    static PipelineConfig from_json(const nlohmann::json& json, const std::filesystem::path& base_dir = {});
    static PipelineConfig load(const std::filesystem::path& path);
};

/// An error raised inside one pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error(cause.kind(), "stage '" + stage + "': " + cause.what()), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct StageRecord {
    std::string name;
    double seconds = 0.0;
    nlohmann::json counts;
};

struct RunResult {
    std::vector<StageRecord> stages;
    nlohmann::json manifest;
};

/// Runs ingest, expand, select, colexify, network, communities and export,
/// writing every artifact plus manifest.json into config.output_dir.
RunResult run_all(const PipelineConfig& config);

}  // namespace colexforge
