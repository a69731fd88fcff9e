#include "tsforge/harness/experiment_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json_io.hpp"
#include "tsforge/common/hash.hpp"

namespace tsforge {

using detail::get_as;
using detail::get_or;
using detail::Json;

namespace {

CorpusSource parse_corpus(const Json& j, const std::string& where,
                          const std::filesystem::path& base_dir) {
    detail::reject_unknown_keys(j, {"path", "format", "synthetic"}, where);
    CorpusSource src;
    if (j.contains("path") == j.contains("synthetic")) {
        throw ParseError(where + ": give exactly one of 'path' or 'synthetic'");
    }
    if (j.contains("path")) {
        std::filesystem::path p = get_as<std::string>(j, "path", where);
        src.path = p.is_absolute() ? p : base_dir / p;
        try {
            src.format = parse_series_format(get_or<std::string>(j, "format", "m4", where));
        } catch (const InvalidArgument& e) {
            throw ParseError(where + ": " + e.what());
        }
    } else {
        const auto& s = j.at("synthetic");
        const std::string sw = where + ".synthetic";
        detail::reject_unknown_keys(s, {"count", "length", "seed", "families"}, sw);
        CorpusSource::Synthetic syn;
        syn.count = get_as<std::size_t>(s, "count", sw);
        syn.length = get_or<std::size_t>(s, "length", syn.length, sw);
        syn.seed = get_or<std::uint64_t>(s, "seed", syn.seed, sw);
        for (const auto& name : get_or<std::vector<std::string>>(s, "families", {}, sw)) {
            try {
                syn.families.push_back(synthetic::parse_family(name));
            } catch (const InvalidArgument& e) {
                throw ParseError(sw + ": " + e.what());
            }
        }
        if (j.contains("format")) {
            throw ParseError(where + ": 'format' only applies to file corpora");
        }
        src.synthetic = syn;
    }
    return src;
}

Json corpus_to_json(const CorpusSource& src, bool for_hash) {
    Json j;
    if (src.path) {
        if (for_hash) {
            j["sha256"] = sha256_file(*src.path);
        } else {
            j["path"] = src.path->string();
        }
        j["format"] = src.format == SeriesFormat::m4 ? "m4" : "m3";
    } else if (src.synthetic) {
        Json s;
        s["count"] = src.synthetic->count;
        s["length"] = src.synthetic->length;
        s["seed"] = src.synthetic->seed;
        std::vector<std::string> names;
        for (const auto f : src.synthetic->families) {
            names.push_back(synthetic::to_string(f));
        }
        s["families"] = names;
        j["synthetic"] = s;
    }
    return j;
}

void validate_config(const ExperimentConfig& c) {
    if (c.horizons.empty()) {
        throw InvalidArgument("config: horizons must not be empty");
    }
    std::set<std::size_t> seen_h;
    for (const std::size_t h : c.horizons) {
        if (h != 1 && h != 3 && h != 6 && h != 12) {
            throw InvalidArgument("config: horizon " + std::to_string(h) +
                                  " not in {1, 3, 6, 12}");
        }
        if (!seen_h.insert(h).second) {
            throw InvalidArgument("config: duplicate horizon " + std::to_string(h));
        }
    }
    if (c.models.empty()) {
        throw InvalidArgument("config: at least one model is required");
    }
    std::set<std::string> names;
    for (const auto& m : c.models) {
        const bool neural = is_neural(m.family);
        if (neural == (m.mode == TrainingMode::classical)) {
            throw InvalidArgument("config: model " + to_string(m.family) + " cannot use mode " +
                                  to_string(m.mode));
        }
        if (!names.insert(m.name()).second) {
            throw InvalidArgument("config: model " + m.name() + " listed twice");
        }
        if (!neural) {
            continue;
        }
        for (const std::size_t h : c.horizons) {
            for (const std::size_t w : input_sizes_for_horizon(h)) {
                validate(c.forecaster_config(m.family, w, h), c.grid);
            }
        }
        if (m.mode == TrainingMode::transfer &&
            !(c.fine_tune.learning_rate <
              c.forecaster_config(m.family, c.horizons.front(), c.horizons.front())
                  .learning_rate())) {
            throw InvalidArgument("config: fine-tune learning rate must be below the " +
                                  to_string(m.family) + " pre-training rate");
        }
    }
    for (const auto* src : {&c.source, &c.target}) {
        if (src->path && !std::filesystem::is_regular_file(*src->path)) {
            throw InvalidArgument("config: series file " + src->path->string() +
                                  " does not exist");
        }
        if (src->synthetic && src->synthetic->count == 0) {
            throw InvalidArgument("config: synthetic corpus needs count >= 1");
        }
    }
    for (const auto& p : c.external_forecasts) {
        if (!std::filesystem::is_regular_file(p)) {
            throw InvalidArgument("config: external forecast file " + p.string() +
                                  " does not exist");
        }
    }
    if (c.jobs == 0) {
        throw InvalidArgument("config: jobs must be at least 1");
    }
    if (c.validation_length == 0) {
        throw InvalidArgument("config: validation_length must be positive");
    }
    if (c.training.patience == 0 || c.fine_tune.patience == 0) {
        throw InvalidArgument("config: patience must be positive");
    }
    if (c.cluster_k < 2) {
        throw InvalidArgument("config: cluster_k must be at least 2");
    }
    for (const std::size_t k : c.quality_k) {
        if (k < 2) {
            throw InvalidArgument("config: quality_k entries must be at least 2");
        }
    }
    if (std::abs(c.alpha - 0.05) > 1e-12 && std::abs(c.alpha - 0.10) > 1e-12) {
        throw InvalidArgument("config: alpha must be 0.05 or 0.10");
    }
}

Json config_to_json(const ExperimentConfig& c, bool for_hash) {
    Json j;
    j["source"] = corpus_to_json(c.source, for_hash);
    j["target"] = corpus_to_json(c.target, for_hash);
    j["corpus_id"] = to_string(c.corpus_id);
    if (!for_hash) {
        j["output_dir"] = c.output_dir.string();
        j["jobs"] = c.jobs;
    }
    Json ext = Json::array();
    for (const auto& p : c.external_forecasts) {
        ext.push_back(for_hash ? sha256_file(p) : p.string());
    }
    j["external_forecasts"] = ext;
    j["horizons"] = c.horizons;
    Json models = Json::array();
    for (const auto& m : c.models) {
        models.push_back({{"family", to_string(m.family)}, {"mode", to_string(m.mode)}});
    }
    j["models"] = models;
    j["seed"] = c.seed;
    j["validation_length"] = c.validation_length;
    j["training"] = {{"patience", c.training.patience}, {"max_epochs", c.training.max_epochs}};
    j["fine_tune"] = {{"learning_rate", c.fine_tune.learning_rate},
                      {"patience", c.fine_tune.patience},
                      {"max_epochs", c.fine_tune.max_epochs}};
    j["networks"] = {{"cnn", detail::to_json(c.cnn)},
                     {"lstm", detail::to_json(c.lstm)},
                     {"tcn", detail::to_json(c.tcn)}};
    j["grid_policy"] = c.grid == GridPolicy::strict ? "strict" : "relaxed";
    j["cluster_k"] = c.cluster_k;
    j["quality_k"] = c.quality_k;
    j["alpha"] = c.alpha;
    return j;
}

}  // namespace

std::string to_string(TrainingMode mode) {
    switch (mode) {
        case TrainingMode::transfer:
            return "transfer";
        case TrainingMode::scratch:
            return "scratch";
        case TrainingMode::classical:
            return "classical";
    }
    return "unknown";
}

std::string ModelSpec::name() const {
    switch (mode) {
        case TrainingMode::transfer:
            return to_string(family) + "_transfer";
        case TrainingMode::scratch:
            return to_string(family) + "_scratch";
        case TrainingMode::classical:
            break;
    }
    return to_string(family);
}

ForecasterConfig ExperimentConfig::forecaster_config(Family family, std::size_t input_size,
                                                     std::size_t horizon) const {
    ForecasterConfig c;
    c.family = family;
    c.input_size = input_size;
    c.horizon = horizon;
    c.cnn = cnn;
    c.lstm = lstm;
    c.tcn = tcn;
    return c;
}

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    const std::string where = "config";
    detail::reject_unknown_keys(
        j,
        {"source", "target", "corpus_id", "output_dir", "external_forecasts", "horizons",
         "models", "seed", "jobs", "validation_length", "training", "fine_tune", "networks",
         "grid_policy", "cluster_k", "quality_k", "alpha"},
        where);
    for (const char* key : {"source", "target", "models"}) {
        if (!j.contains(key)) {
            throw ParseError("config: missing required key '" + std::string(key) + "'");
        }
    }
    ExperimentConfig c;
    c.source = parse_corpus(j.at("source"), "config.source", base_dir);
    c.target = parse_corpus(j.at("target"), "config.target", base_dir);
    try {
        c.corpus_id = parse_corpus_id(get_or<std::string>(j, "corpus_id", "synthetic", where));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    const auto resolve = [&](const std::filesystem::path& p) {
        return p.is_absolute() ? p : base_dir / p;
    };
    c.output_dir = resolve(get_or<std::string>(j, "output_dir", c.output_dir.string(), where));
    for (const auto& p : get_or<std::vector<std::string>>(j, "external_forecasts", {}, where)) {
        c.external_forecasts.push_back(resolve(p));
    }
    c.horizons = get_or(j, "horizons", c.horizons, where);
    for (const auto& m : j.at("models")) {
        detail::reject_unknown_keys(m, {"family", "mode"}, "config.models[]");
        ModelSpec spec;
        try {
            spec.family = parse_family(get_as<std::string>(m, "family", "config.models[]"));
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what());
        }
        const auto mode = get_or<std::string>(m, "mode", is_neural(spec.family) ? "transfer"
                                                                                : "classical",
                                              "config.models[]");
        if (mode == "transfer") {
            spec.mode = TrainingMode::transfer;
        } else if (mode == "scratch") {
            spec.mode = TrainingMode::scratch;
        } else if (mode == "classical") {
            spec.mode = TrainingMode::classical;
        } else {
            throw ParseError("config.models[]: unknown mode '" + mode + "'");
        }
        c.models.push_back(spec);
    }
    c.seed = get_or(j, "seed", c.seed, where);
    c.jobs = get_or(j, "jobs", c.jobs, where);
    c.validation_length = get_or(j, "validation_length", c.validation_length, where);
    if (j.contains("training")) {
        const auto& t = j.at("training");
        detail::reject_unknown_keys(t, {"patience", "max_epochs"}, "config.training");
        c.training.patience = get_or(t, "patience", c.training.patience, "config.training");
        c.training.max_epochs = get_or(t, "max_epochs", c.training.max_epochs, "config.training");
    }
    if (j.contains("fine_tune")) {
        const auto& f = j.at("fine_tune");
        detail::reject_unknown_keys(f, {"learning_rate", "patience", "max_epochs"},
                                    "config.fine_tune");
        c.fine_tune.learning_rate =
            get_or(f, "learning_rate", c.fine_tune.learning_rate, "config.fine_tune");
        c.fine_tune.patience = get_or(f, "patience", c.fine_tune.patience, "config.fine_tune");
        c.fine_tune.max_epochs =
            get_or(f, "max_epochs", c.fine_tune.max_epochs, "config.fine_tune");
    }
    if (j.contains("networks")) {
        const auto& n = j.at("networks");
        detail::reject_unknown_keys(n, {"cnn", "lstm", "tcn"}, "config.networks");
        if (n.contains("cnn")) {
            c.cnn = detail::cnn_from_json(n.at("cnn"), c.cnn);
        }
        if (n.contains("lstm")) {
            c.lstm = detail::lstm_from_json(n.at("lstm"), c.lstm);
        }
        if (n.contains("tcn")) {
            c.tcn = detail::tcn_from_json(n.at("tcn"), c.tcn);
        }
    }
    const auto grid = get_or<std::string>(j, "grid_policy", "strict", where);
    if (grid == "strict") {
        c.grid = GridPolicy::strict;
    } else if (grid == "relaxed") {
        c.grid = GridPolicy::relaxed;
    } else {
        throw ParseError("config.grid_policy: expected 'strict' or 'relaxed'");
    }
    c.cluster_k = get_or(j, "cluster_k", c.cluster_k, where);
    c.quality_k = get_or(j, "quality_k", c.quality_k, where);
    c.alpha = get_or(j, "alpha", c.alpha, where);
    validate_config(c);
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw InvalidArgument("config file " + path.string() + " does not exist");
    }
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return parse_experiment_config(read_text_file(path), base);
}

std::string canonical_config_json(const ExperimentConfig& config) {
    return config_to_json(config, false).dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& config) {
    return sha256_hex(config_to_json(config, true).dump());
}

}  // namespace tsforge
