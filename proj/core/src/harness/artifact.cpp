#include "tsforge/harness/artifact.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <limits>

#include "json_io.hpp"
#include "tsforge/common/hash.hpp"

namespace tsforge {

using detail::get_as;
using detail::Json;

namespace {

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double from_nullable(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string reproducible_timestamp() {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != nullptr && *end == '\0' && v >= 0) {
            t = static_cast<std::time_t>(v);
        }
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string artifact_to_json(const ModelArtifact& artifact) {
    const auto& f = artifact.forecaster;
    if (!f.neural()) {
        throw InvalidArgument("only neural forecasters are persisted as artifacts");
    }
    const auto& state = f.neural_state();
    Json j;
    j["schema_version"] = artifact.schema_version;
    j["family"] = to_string(f.config.family);
    j["config"] = detail::to_json(f.config);
    Json params = Json::array();
    for (const auto& [name, p] : state.network.parameters()) {
        Json e;
        e["name"] = name;
        e["shape"] = p.value.shape();
        e["trainable"] = p.trainable;
        e["data"] = p.value.values();
        params.push_back(std::move(e));
    }
    j["parameters"] = std::move(params);
    j["scaler"] = {{"min", state.scaler.min}, {"max", state.scaler.max}};
    const auto& m = state.metadata;
    Json history = Json::array();
    for (const double v : m.validation_history) {
        history.push_back(nullable(v));
    }
    j["training"] = {{"epochs_run", m.epochs_run},
                     {"best_epoch", m.best_epoch},
                     {"best_validation_loss", nullable(m.best_validation_loss)},
                     {"seed", m.seed},
                     {"validation_history", history}};
    j["provenance"] = {{"corpus", artifact.provenance.corpus},
                       {"seed", artifact.provenance.seed},
                       {"epochs", artifact.provenance.epochs},
                       {"timestamp", artifact.provenance.timestamp}};
    return j.dump(1) + "\n";
}

ModelArtifact artifact_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("artifact: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version")) {
        throw ParseError("artifact: missing schema_version");
    }
    const int version = get_as<int>(j, "schema_version", "artifact");
    if (version != kArtifactSchemaVersion) {
        throw MigrationError("artifact schema_version " + std::to_string(version) +
                             " is not supported (this build reads version " +
                             std::to_string(kArtifactSchemaVersion) + ")");
    }
    detail::reject_unknown_keys(j, {"schema_version", "family", "config", "parameters", "scaler",
                                    "training", "provenance"},
                                "artifact");
    ModelArtifact a;
    a.schema_version = version;
    try {
        a.forecaster.config = detail::forecaster_config_from_json(j.at("config"));
        if (to_string(a.forecaster.config.family) != j.at("family").get<std::string>()) {
            throw ParseError("artifact: family does not match its config");
        }
        ad::ParameterSet params;
        for (const auto& e : j.at("parameters")) {
            auto shape = e.at("shape").get<std::vector<std::size_t>>();
            auto data = e.at("data").get<std::vector<double>>();
            params.add(e.at("name").get<std::string>(), ad::Tensor(std::move(shape), std::move(data)),
                       e.at("trainable").get<bool>());
        }
        NeuralState state;
        state.network = NeuralNetwork(a.forecaster.config, std::move(params));
        state.scaler.min = j.at("scaler").at("min").get<double>();
        state.scaler.max = j.at("scaler").at("max").get<double>();
        const auto& t = j.at("training");
        state.metadata.epochs_run = t.at("epochs_run").get<std::size_t>();
        state.metadata.best_epoch = t.at("best_epoch").get<std::size_t>();
        state.metadata.best_validation_loss = from_nullable(t.at("best_validation_loss"));
        state.metadata.seed = t.at("seed").get<std::uint64_t>();
        for (const auto& v : t.at("validation_history")) {
            state.metadata.validation_history.push_back(from_nullable(v));
        }
        a.forecaster.model = std::move(state);
        const auto& p = j.at("provenance");
        a.provenance.corpus = p.at("corpus").get<std::string>();
        a.provenance.seed = p.at("seed").get<std::uint64_t>();
        a.provenance.epochs = p.at("epochs").get<std::size_t>();
        a.provenance.timestamp = p.at("timestamp").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("artifact: ") + e.what());
    } catch (const ShapeError& e) {
        throw ParseError(std::string("artifact: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("artifact: ") + e.what());
    }
    return a;
}

void persist_model(const std::filesystem::path& path, const ModelArtifact& artifact) {
    const auto text = artifact_to_json(artifact);
    auto tmp = path;
    tmp += ".tmp";
    write_text_file(tmp, text);
    std::filesystem::rename(tmp, path);
}

ModelArtifact load_model(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw InvalidArgument("artifact " + path.string() + " does not exist");
    }
    return artifact_from_json(read_text_file(path));
}

}  // namespace tsforge
