#include "tsforge/harness/manifest.hpp"

#include <algorithm>

#include "json_io.hpp"
#include "tsforge/common/hash.hpp"

namespace tsforge {

using detail::Json;

namespace {

bool is_temporary(const std::filesystem::path& p) { return p.extension() == ".tmp"; }

}  // namespace

bool RunManifest::stage_complete(const std::string& stage) const {
    return std::find(completed_stages.begin(), completed_stages.end(), stage) !=
           completed_stages.end();
}

void RunManifest::mark_complete(const std::string& stage) {
    if (!stage_complete(stage)) {
        completed_stages.push_back(stage);
    }
}

void RunManifest::clear_failures(const std::string& stage) {
    std::erase_if(failures, [&](const TaskFailure& f) { return f.stage == stage; });
}

std::string manifest_to_json(const RunManifest& m) {
    Json j;
    j["config_hash"] = m.config_hash;
    j["completed_stages"] = m.completed_stages;
    Json failures = Json::array();
    for (const auto& f : m.failures) {
        failures.push_back({{"stage", f.stage}, {"task", f.task}, {"message", f.message}});
    }
    j["failures"] = failures;
    Json files = Json::array();
    for (const auto& f : m.files) {
        files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    }
    j["files"] = files;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    RunManifest m;
    try {
        const auto j = Json::parse(text);
        m.config_hash = j.at("config_hash").get<std::string>();
        m.completed_stages = j.at("completed_stages").get<std::vector<std::string>>();
        for (const auto& f : j.at("failures")) {
            m.failures.push_back({f.at("stage").get<std::string>(), f.at("task").get<std::string>(),
                                  f.at("message").get<std::string>()});
        }
        for (const auto& f : j.at("files")) {
            m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                               f.at("bytes").get<std::uintmax_t>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    return m;
}

std::vector<FileEntry> scan_inventory(const std::filesystem::path& dir) {
    std::vector<FileEntry> out;
    if (!std::filesystem::is_directory(dir)) {
        return out;
    }
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file() || is_temporary(entry.path())) {
            continue;
        }
        const auto rel = std::filesystem::relative(entry.path(), dir).generic_string();
        if (rel == kManifestFile) {
            continue;
        }
        out.push_back({rel, sha256_file(entry.path()), entry.file_size()});
    }
    std::sort(out.begin(), out.end(),
              [](const FileEntry& a, const FileEntry& b) { return a.path < b.path; });
    return out;
}

bool inventory_matches(const std::filesystem::path& dir, const RunManifest& manifest) {
    for (const auto& f : manifest.files) {
        const auto p = dir / f.path;
        if (!std::filesystem::is_regular_file(p) || sha256_file(p) != f.sha256) {
            return false;
        }
    }
    return true;
}

std::optional<RunManifest> load_manifest(const std::filesystem::path& dir) {
    const auto p = dir / kManifestFile;
    if (!std::filesystem::is_regular_file(p)) {
        return std::nullopt;
    }
    return manifest_from_json(read_text_file(p));
}

void save_manifest(const std::filesystem::path& dir, RunManifest& manifest) {
    manifest.files = scan_inventory(dir);
    const auto p = dir / kManifestFile;
    auto tmp = p;
    tmp += ".tmp";
    write_text_file(tmp, manifest_to_json(manifest));
    std::filesystem::rename(tmp, p);
}

}  // namespace tsforge
