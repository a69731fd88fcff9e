#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tsforge/forecasters/forecaster.hpp"

namespace tsforge {

inline constexpr int kArtifactSchemaVersion = 1;

struct Provenance {
    /// Corpus id for global models, "target:<series id>" for per-series models.
    std::string corpus;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
    std::string timestamp = "1970-01-01T00:00:00Z";
};

/// A neural forecaster with its configuration, scaler, training metadata and
/// provenance. Doubles are written in shortest round-trip form.
struct ModelArtifact {
    int schema_version = kArtifactSchemaVersion;
    TrainedForecaster forecaster;
    Provenance provenance;
};

/// UTC timestamp for artifacts and reports: SOURCE_DATE_EPOCH when set, else the
/// epoch itself, so repeated runs produce identical bytes.
[[nodiscard]] std::string reproducible_timestamp();

[[nodiscard]] std::string artifact_to_json(const ModelArtifact& artifact);
/// ParseError for malformed or truncated text, MigrationError for another schema.
[[nodiscard]] ModelArtifact artifact_from_json(const std::string& text);

/// Writes to a temporary file and renames it into place.
void persist_model(const std::filesystem::path& path, const ModelArtifact& artifact);
[[nodiscard]] ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace tsforge
