#include "thzra/app/manifest.hpp"

#include "thzra/app/csv.hpp"

#ifndef THZRA_VERSION
#define THZRA_VERSION "unknown"
#endif

namespace thzra::app {

std::string version_string()
{
    return THZRA_VERSION;
}

nlohmann::json to_json(const RunManifest& m)
{
    nlohmann::json j;
    j["command"] = m.command;
    j["config"] = m.config_path;
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["out_dir"] = m.out_dir;
    j["files"] = m.files;
    j["timings_s"] = m.timings_s;
    j["status"] = m.status;
    if (!m.note.empty())
        j["note"] = m.note;
    return j;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path)
{
    write_atomic(path, to_json(m).dump(2) + "\n");
}

}  // namespace thzra::app
