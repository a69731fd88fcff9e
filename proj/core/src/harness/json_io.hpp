#pragma once

// JSON conversions shared by the harness sources (not part of the public API).

#include <set>
#include <string>

#include "json.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/forecasters/config.hpp"

namespace tsforge::detail {

using Json = nlohmann::ordered_json;

/// Throws ParseError naming the first key of `object` outside `allowed`.
void reject_unknown_keys(const Json& object, const std::set<std::string>& allowed,
                         const std::string& where);

[[nodiscard]] Json activation_to_json(ad::Activation a);
[[nodiscard]] ad::Activation activation_from_json(const Json& j);

[[nodiscard]] Json to_json(const CnnSettings& s);
[[nodiscard]] Json to_json(const LstmSettings& s);
[[nodiscard]] Json to_json(const TcnSettings& s);
/// Fields present in `j` override `base`; unknown keys are rejected.
[[nodiscard]] CnnSettings cnn_from_json(const Json& j, CnnSettings base = {});
[[nodiscard]] LstmSettings lstm_from_json(const Json& j, LstmSettings base = {});
[[nodiscard]] TcnSettings tcn_from_json(const Json& j, TcnSettings base = {});

[[nodiscard]] Json to_json(const ForecasterConfig& c);
[[nodiscard]] ForecasterConfig forecaster_config_from_json(const Json& j);

/// Fetches `key` as T, converting type errors into ParseError with context.
template <typename T>
T get_as(const Json& object, const std::string& key, const std::string& where) {
    try {
        return object.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + "." + key + ": " + e.what());
    }
}

template <typename T>
T get_or(const Json& object, const std::string& key, T fallback, const std::string& where) {
    if (!object.contains(key)) {
        return fallback;
    }
    return get_as<T>(object, key, where);
}

}  // namespace tsforge::detail
