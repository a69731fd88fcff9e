#include "json_io.hpp"

namespace tsforge::detail {

void reject_unknown_keys(const Json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!object.is_object()) {
        throw ParseError(where + ": expected a JSON object");
    }
    for (const auto& item : object.items()) {
        if (allowed.count(item.key()) == 0) {
            throw ParseError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

Json activation_to_json(ad::Activation a) {
    switch (a) {
        case ad::Activation::identity:
            return "linear";
        case ad::Activation::tanh:
            return "tanh";
        case ad::Activation::relu:
            return "relu";
    }
    return "linear";
}

ad::Activation activation_from_json(const Json& j) {
    if (!j.is_string()) {
        throw ParseError("activation must be a string");
    }
    try {
        return ad::parse_activation(j.get<std::string>());
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

Json to_json(const CnnSettings& s) {
    Json j;
    j["layers"] = s.layers;
    j["filters"] = s.filters;
    j["kernels"] = s.kernels;
    j["max_pooling"] = s.max_pooling;
    j["activation"] = activation_to_json(s.activation);
    j["learning_rate"] = s.learning_rate;
    return j;
}

Json to_json(const LstmSettings& s) {
    Json j;
    j["units"] = s.units;
    j["activation"] = activation_to_json(s.activation);
    j["return_sequences"] = s.return_sequences;
    j["learning_rate"] = s.learning_rate;
    return j;
}

Json to_json(const TcnSettings& s) {
    Json j;
    j["filters"] = s.filters;
    j["kernel"] = s.kernel;
    j["dilations"] = s.dilations;
    j["activation"] = activation_to_json(s.activation);
    j["return_sequences"] = s.return_sequences;
    j["learning_rate"] = s.learning_rate;
    return j;
}

CnnSettings cnn_from_json(const Json& j, CnnSettings s) {
    const std::string where = "cnn";
    reject_unknown_keys(j, {"layers", "filters", "kernels", "max_pooling", "activation",
                            "learning_rate"},
                        where);
    s.layers = get_or(j, "layers", s.layers, where);
    s.filters = get_or(j, "filters", s.filters, where);
    s.kernels = get_or(j, "kernels", s.kernels, where);
    s.max_pooling = get_or(j, "max_pooling", s.max_pooling, where);
    if (j.contains("activation")) {
        s.activation = activation_from_json(j.at("activation"));
    }
    s.learning_rate = get_or(j, "learning_rate", s.learning_rate, where);
    return s;
}

LstmSettings lstm_from_json(const Json& j, LstmSettings s) {
    const std::string where = "lstm";
    reject_unknown_keys(j, {"units", "activation", "return_sequences", "learning_rate"}, where);
    s.units = get_or(j, "units", s.units, where);
    if (j.contains("activation")) {
        s.activation = activation_from_json(j.at("activation"));
    }
    s.return_sequences = get_or(j, "return_sequences", s.return_sequences, where);
    s.learning_rate = get_or(j, "learning_rate", s.learning_rate, where);
    return s;
}

TcnSettings tcn_from_json(const Json& j, TcnSettings s) {
    const std::string where = "tcn";
    reject_unknown_keys(j, {"filters", "kernel", "dilations", "activation", "return_sequences",
                            "learning_rate"},
                        where);
    s.filters = get_or(j, "filters", s.filters, where);
    s.kernel = get_or(j, "kernel", s.kernel, where);
    s.dilations = get_or(j, "dilations", s.dilations, where);
    if (j.contains("activation")) {
        s.activation = activation_from_json(j.at("activation"));
    }
    s.return_sequences = get_or(j, "return_sequences", s.return_sequences, where);
    s.learning_rate = get_or(j, "learning_rate", s.learning_rate, where);
    return s;
}

Json to_json(const ForecasterConfig& c) {
    Json j;
    j["family"] = to_string(c.family);
    j["input_size"] = c.input_size;
    j["horizon"] = c.horizon;
    switch (c.family) {
        case Family::cnn:
            j["cnn"] = to_json(c.cnn);
            break;
        case Family::lstm:
            j["lstm"] = to_json(c.lstm);
            break;
        case Family::tcn:
            j["tcn"] = to_json(c.tcn);
            break;
        default:
            break;
    }
    return j;
}

ForecasterConfig forecaster_config_from_json(const Json& j) {
    const std::string where = "config";
    reject_unknown_keys(j, {"family", "input_size", "horizon", "cnn", "lstm", "tcn"}, where);
    ForecasterConfig c;
    try {
        c.family = parse_family(get_as<std::string>(j, "family", where));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    c.input_size = get_as<std::size_t>(j, "input_size", where);
    c.horizon = get_as<std::size_t>(j, "horizon", where);
    if (j.contains("cnn")) {
        c.cnn = cnn_from_json(j.at("cnn"));
    }
    if (j.contains("lstm")) {
        c.lstm = lstm_from_json(j.at("lstm"));
    }
    if (j.contains("tcn")) {
        c.tcn = tcn_from_json(j.at("tcn"));
    }
    return c;
}

}  // namespace tsforge::detail
