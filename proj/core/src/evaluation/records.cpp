#include "tsforge/evaluation/records.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "tsforge/common/csv.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/evaluation/metrics.hpp"

namespace tsforge {

namespace {

const csv::Row kRecordHeader{"series_id", "model",  "horizon", "input_size",
                             "origin",    "step",   "y_true",  "y_pred"};

std::size_t parse_index(const std::string& text, const char* column) {
    const auto t = csv::trim(text);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ParseError(std::string("column ") + column + ": '" + text +
                         "' is not a non-negative integer");
    }
    return static_cast<std::size_t>(std::stoull(std::string(t)));
}

double parse_finite(const std::string& text, const char* column) {
    double v = 0.0;
    if (!csv::parse_double(csv::trim(text), v) || !std::isfinite(v)) {
        throw ParseError(std::string("column ") + column + ": '" + text +
                         "' is not a finite number");
    }
    return v;
}

std::map<std::string, std::size_t> column_index(const csv::Row& header,
                                                const std::vector<std::string>& required,
                                                const std::filesystem::path& path) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        index.emplace(std::string(csv::trim(header[i])), i);
    }
    for (const auto& name : required) {
        if (index.count(name) == 0) {
            throw ParseError(path.string() + ": missing column '" + name + "'");
        }
    }
    return index;
}

const std::string& cell(const csv::Row& row, std::size_t index) {
    static const std::string empty;
    return index < row.size() ? row[index] : empty;
}

}  // namespace

std::vector<std::size_t> rolling_origins(IndexRange range, std::size_t horizon) {
    if (horizon == 0) {
        throw InvalidArgument("horizon must be positive");
    }
    std::vector<std::size_t> origins;
    for (std::size_t o = range.begin; o + horizon <= range.end; ++o) {
        origins.push_back(o);
    }
    return origins;
}

std::vector<EvaluationRecord> evaluate_on_test_block(const ForecastFn& forecast,
                                                     const TimeSeries& series,
                                                     std::size_t horizon,
                                                     const std::string& model,
                                                     std::size_t input_size) {
    const std::size_t n = series.size();
    if (n < kTestLength) {
        throw InvalidArgument("series " + series.id + " is shorter than the test block");
    }
    if (horizon == 0 || horizon > kTestLength) {
        throw InvalidArgument("horizon must be in [1, " + std::to_string(kTestLength) + "]");
    }
    const std::span<const double> values(series.values);
    std::vector<EvaluationRecord> out;
    for (const std::size_t origin : rolling_origins({n - kTestLength, n}, horizon)) {
        std::vector<double> pred;
        const auto where = [&] {
            return series.id + "/" + model + " at origin " + std::to_string(origin) + ": ";
        };
        try {
            pred = forecast(values, origin);
        } catch (const NumericError& e) {
            throw NumericError(where() + e.what());
        } catch (const Error& e) {
            throw InvalidArgument(where() + e.what());
        }
        if (pred.size() != horizon) {
            throw InvalidArgument(where() + "forecast has " + std::to_string(pred.size()) +
                                  " values, expected " + std::to_string(horizon));
        }
        for (std::size_t s = 0; s < horizon; ++s) {
            if (!std::isfinite(pred[s])) {
                throw NumericError(where() + "non-finite forecast at step " +
                                   std::to_string(s + 1));
            }
            out.push_back({series.id, model, horizon, input_size, origin, s + 1,
                           values[origin + s], pred[s]});
        }
    }
    return out;
}

std::vector<EvaluationRecord> evaluate_forecaster_on_series(const TrainedForecaster& forecaster,
                                                            const TimeSeries& series,
                                                            std::size_t horizon,
                                                            const std::string& model) {
    if (forecaster.config.horizon != horizon) {
        throw InvalidArgument("forecaster horizon " + std::to_string(forecaster.config.horizon) +
                              " differs from requested " + std::to_string(horizon));
    }
    const ForecastFn fn = [&forecaster](std::span<const double> values, std::size_t origin) {
        return forecaster.forecast_at(values, origin);
    };
    return evaluate_on_test_block(fn, series, horizon, model, forecaster.config.input_size);
}

void write_records_csv(const std::filesystem::path& path,
                       std::span<const EvaluationRecord> records) {
    std::vector<csv::Row> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        rows.push_back({r.series_id, r.model, std::to_string(r.horizon),
                        std::to_string(r.input_size), std::to_string(r.origin),
                        std::to_string(r.step), csv::format_double(r.y_true),
                        csv::format_double(r.y_pred)});
    }
    csv::write_file(path, kRecordHeader, rows);
}

std::vector<EvaluationRecord> read_records_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw ParseError(path.string() + ": missing header");
    }
    const auto col = column_index(rows[0], kRecordHeader, path);
    std::vector<EvaluationRecord> out;
    out.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        try {
            EvaluationRecord r;
            r.series_id = std::string(csv::trim(cell(row, col.at("series_id"))));
            r.model = std::string(csv::trim(cell(row, col.at("model"))));
            r.horizon = parse_index(cell(row, col.at("horizon")), "horizon");
            r.input_size = parse_index(cell(row, col.at("input_size")), "input_size");
            r.origin = parse_index(cell(row, col.at("origin")), "origin");
            r.step = parse_index(cell(row, col.at("step")), "step");
            r.y_true = parse_finite(cell(row, col.at("y_true")), "y_true");
            r.y_pred = parse_finite(cell(row, col.at("y_pred")), "y_pred");
            out.push_back(std::move(r));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + " line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

ExternalIngestResult ingest_external_forecasts(const std::filesystem::path& path,
                                               std::span<const TimeSeries> corpus) {
    static const std::vector<std::string> required{"series_id", "model", "horizon",
                                                   "origin",    "step",  "y_pred"};
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw ParseError(path.string() + ": missing header");
    }
    const auto col = column_index(rows[0], required, path);
    std::unordered_map<std::string, const TimeSeries*> by_id;
    for (const auto& ts : corpus) {
        by_id.emplace(ts.id, &ts);
    }
    ExternalIngestResult result;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        try {
            EvaluationRecord r;
            r.series_id = std::string(csv::trim(cell(row, col.at("series_id"))));
            r.model = std::string(csv::trim(cell(row, col.at("model"))));
            if (r.model.empty()) {
                throw ParseError("empty model name");
            }
            r.horizon = parse_index(cell(row, col.at("horizon")), "horizon");
            r.origin = parse_index(cell(row, col.at("origin")), "origin");
            r.step = parse_index(cell(row, col.at("step")), "step");
            r.y_pred = parse_finite(cell(row, col.at("y_pred")), "y_pred");
            const auto it = by_id.find(r.series_id);
            if (it == by_id.end()) {
                throw InvalidArgument("unknown series '" + r.series_id + "'");
            }
            const std::size_t n = it->second->size();
            if (r.horizon == 0 || r.horizon > kTestLength) {
                throw InvalidArgument("horizon " + std::to_string(r.horizon) + " out of range");
            }
            if (r.step == 0 || r.step > r.horizon) {
                throw InvalidArgument("step " + std::to_string(r.step) + " outside 1.." +
                                      std::to_string(r.horizon));
            }
            if (n < kTestLength || r.origin < n - kTestLength || r.origin + r.horizon > n) {
                throw InvalidArgument("origin " + std::to_string(r.origin) +
                                      " outside the test block of " + r.series_id);
            }
            r.y_true = it->second->values[r.origin + r.step - 1];
            result.records.push_back(std::move(r));
        } catch (const Error& e) {
            result.rejected.push_back({i + 1, e.what()});
        }
    }
    return result;
}

std::vector<SeriesScore> score_per_series(std::span<const EvaluationRecord> records) {
    using Key = std::tuple<std::string, std::string, std::size_t, std::size_t>;
    std::map<Key, SeriesScore> cells;
    for (const auto& r : records) {
        auto& s = cells[Key{r.model, r.series_id, r.horizon, r.input_size}];
        if (s.count == 0) {
            s.series_id = r.series_id;
            s.model = r.model;
            s.horizon = r.horizon;
            s.input_size = r.input_size;
        }
        s.mape += ape(r.y_true, r.y_pred);
        s.smape += sape(r.y_true, r.y_pred);
        s.count += 1;
    }
    std::vector<SeriesScore> out;
    out.reserve(cells.size());
    for (auto& [key, s] : cells) {
        s.mape /= static_cast<double>(s.count);
        s.smape /= static_cast<double>(s.count);
        out.push_back(std::move(s));
    }
    return out;
}

const PerformanceCell* PerformanceTable::find(const std::string& model,
                                              std::size_t horizon) const {
    for (const auto& c : cells) {
        if (c.model == model && c.horizon == horizon) {
            return &c;
        }
    }
    return nullptr;
}

PerformanceTable aggregate_performance_table(std::span<const EvaluationRecord> records) {
    if (records.empty()) {
        throw InvalidArgument("no records to aggregate");
    }
    // Per series first (pooling any input sizes present), then across series.
    using SeriesKey = std::tuple<std::string, std::size_t, std::string>;
    struct Acc {
        double mape = 0.0;
        double smape = 0.0;
        std::size_t count = 0;
    };
    std::map<SeriesKey, Acc> per_series;
    for (const auto& r : records) {
        auto& a = per_series[SeriesKey{r.model, r.horizon, r.series_id}];
        a.mape += ape(r.y_true, r.y_pred);
        a.smape += sape(r.y_true, r.y_pred);
        a.count += 1;
    }
    std::map<std::pair<std::string, std::size_t>, PerformanceCell> cells;
    for (const auto& [key, a] : per_series) {
        auto& c = cells[{std::get<0>(key), std::get<1>(key)}];
        c.model = std::get<0>(key);
        c.horizon = std::get<1>(key);
        c.mape += a.mape / static_cast<double>(a.count);
        c.smape += a.smape / static_cast<double>(a.count);
        c.series_count += 1;
    }
    PerformanceTable table;
    for (auto& [key, c] : cells) {
        c.mape /= static_cast<double>(c.series_count);
        c.smape /= static_cast<double>(c.series_count);
        table.cells.push_back(std::move(c));
    }
    return table;
}

void write_summary_csv(const std::filesystem::path& path, const PerformanceTable& table) {
    std::vector<csv::Row> rows;
    for (const auto& c : table.cells) {
        rows.push_back({c.model, std::to_string(c.horizon), csv::format_double(c.mape),
                        csv::format_double(c.smape), std::to_string(c.series_count)});
    }
    csv::write_file(path, {"model", "horizon", "mape", "smape", "series_count"}, rows);
}

InputSizeSelection select_best_input_size(std::span<const ValidationScore> scores) {
    using Key = std::tuple<std::string, std::size_t, std::string>;  // model, h, series
    std::map<Key, std::map<std::size_t, double>> cells;
    for (const auto& s : scores) {
        auto& by_w = cells[Key{s.model, s.horizon, s.series_id}];
        if (!by_w.emplace(s.input_size, s.smape).second) {
            throw InvalidArgument("duplicate validation score for " + s.series_id + "/" +
                                  s.model + " h=" + std::to_string(s.horizon) +
                                  " w=" + std::to_string(s.input_size));
        }
    }
    std::string missing;
    for (const auto& [key, by_w] : cells) {
        for (const std::size_t w : input_sizes_for_horizon(std::get<1>(key))) {
            if (by_w.count(w) == 0) {
                missing += " (" + std::get<2>(key) + ", " + std::get<0>(key) +
                           ", w=" + std::to_string(w) + ")";
            }
        }
    }
    if (!missing.empty()) {
        throw InvalidArgument("incomplete input-size candidates:" + missing);
    }

    InputSizeSelection out;
    std::map<std::pair<std::string, std::size_t>, std::map<std::size_t, std::size_t>> counts;
    for (const auto& [key, by_w] : cells) {
        const auto& [model, h, series] = key;
        const auto candidates = input_sizes_for_horizon(h);
        // Candidates are ascending, so strict < keeps the smallest w on ties.
        std::size_t best_w = candidates.front();
        double best = by_w.at(best_w);
        for (const std::size_t w : candidates) {
            const double v = by_w.at(w);
            if (v < best || (std::isnan(best) && !std::isnan(v))) {
                best = v;
                best_w = w;
            }
        }
        out.choices.push_back({series, model, h, best_w, best});
        auto& c = counts[{model, h}];
        for (const std::size_t w : candidates) {
            c.emplace(w, 0);
        }
        c[best_w] += 1;
    }
    for (const auto& [cell_key, by_w] : counts) {
        std::size_t total = 0;
        for (const auto& [w, n] : by_w) {
            total += n;
        }
        for (const auto& [w, n] : by_w) {
            out.distribution.push_back({cell_key.first, cell_key.second, w, n,
                                        100.0 * static_cast<double>(n) /
                                            static_cast<double>(total)});
        }
    }
    return out;
}

}  // namespace tsforge
