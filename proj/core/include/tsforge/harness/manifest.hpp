#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tsforge {

inline constexpr const char* kManifestFile = "manifest.json";

struct TaskFailure {
    std::string stage;
    std::string task;
    std::string message;

    friend bool operator==(const TaskFailure&, const TaskFailure&) = default;
};

struct FileEntry {
    std::string path;  ///< relative to the output directory, '/' separated
    std::string sha256;
    std::uintmax_t bytes = 0;

    friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

struct RunManifest {
    std::string config_hash;
    /// In completion order.
    std::vector<std::string> completed_stages;
    std::vector<TaskFailure> failures;
    /// Every file under the output directory except the manifest, sorted by path.
    std::vector<FileEntry> files;

    [[nodiscard]] bool stage_complete(const std::string& stage) const;
    void mark_complete(const std::string& stage);
    /// Drops earlier failures of `stage` (it is about to run again).
    void clear_failures(const std::string& stage);
};

[[nodiscard]] std::string manifest_to_json(const RunManifest& manifest);
[[nodiscard]] RunManifest manifest_from_json(const std::string& text);

/// Sorted inventory with checksums of `dir`, skipping the manifest and temporaries.
[[nodiscard]] std::vector<FileEntry> scan_inventory(const std::filesystem::path& dir);

/// True when every inventoried file exists with its recorded checksum.
[[nodiscard]] bool inventory_matches(const std::filesystem::path& dir,
                                     const RunManifest& manifest);

[[nodiscard]] std::optional<RunManifest> load_manifest(const std::filesystem::path& dir);
/// Refreshes the inventory and writes the manifest atomically.
void save_manifest(const std::filesystem::path& dir, RunManifest& manifest);

}  // namespace tsforge
