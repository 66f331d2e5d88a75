#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace thzra::app {

std::string version_string();

struct RunManifest
{
    std::string command;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string version = version_string();
    std::string out_dir;
    std::vector<std::string> files;  // relative to out_dir
    std::map<std::string, double> timings_s;
    std::string status = "complete";  // or "partial"
    std::string note;
};

nlohmann::json to_json(const RunManifest& m);

/// Always the last file a command writes.
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

}  // namespace thzra::app
