#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tsforge/dataset.hpp"
#include "tsforge/forecasters/forecaster.hpp"

namespace tsforge {

/// One scored forecast step. `origin` is the absolute index of the first
/// forecast step; `step` runs 1..h.
struct EvaluationRecord {
    std::string series_id;
    std::string model;
    std::size_t horizon = 0;
    std::size_t input_size = 0;
    std::size_t origin = 0;
    std::size_t step = 0;
    double y_true = 0.0;
    double y_pred = 0.0;

    friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

/// Produces h forecasts for the first forecast index `origin` of `values`.
using ForecastFn = std::function<std::vector<double>(std::span<const double> values,
                                                     std::size_t origin)>;

/// Rolling origins over the 18-point test block: 18 - h + 1 forecasts, one record
/// per (origin, step). Failures are rethrown with the origin in the message.
[[nodiscard]] std::vector<EvaluationRecord> evaluate_on_test_block(
    const ForecastFn& forecast, const TimeSeries& series, std::size_t horizon,
    const std::string& model, std::size_t input_size);

[[nodiscard]] std::vector<EvaluationRecord> evaluate_forecaster_on_series(
    const TrainedForecaster& forecaster, const TimeSeries& series, std::size_t horizon,
    const std::string& model);

/// Origins of the rolling forecasts inside an arbitrary target range.
[[nodiscard]] std::vector<std::size_t> rolling_origins(IndexRange range, std::size_t horizon);

void write_records_csv(const std::filesystem::path& path,
                       std::span<const EvaluationRecord> records);
[[nodiscard]] std::vector<EvaluationRecord> read_records_csv(const std::filesystem::path& path);

struct RowError {
    std::size_t line = 0;  ///< 1-based line in the input file
    std::string message;
};

struct ExternalIngestResult {
    std::vector<EvaluationRecord> records;
    std::vector<RowError> rejected;
};

/// Reads (series_id, model, horizon, origin, step, y_pred) rows and joins y_true
/// from `corpus`. Rows with unknown series, origins outside the test block or
/// malformed cells are reported per row; a missing column throws ParseError.
[[nodiscard]] ExternalIngestResult ingest_external_forecasts(
    const std::filesystem::path& path, std::span<const TimeSeries> corpus);

/// Metrics of one (series, model, h, w) cell, averaged over its records.
struct SeriesScore {
    std::string series_id;
    std::string model;
    std::size_t horizon = 0;
    std::size_t input_size = 0;
    double mape = 0.0;
    double smape = 0.0;
    std::size_t count = 0;
};

[[nodiscard]] std::vector<SeriesScore> score_per_series(std::span<const EvaluationRecord> records);

struct PerformanceCell {
    std::string model;
    std::size_t horizon = 0;
    double mape = 0.0;
    double smape = 0.0;
    std::size_t series_count = 0;
};

/// Rows sorted by (model, horizon); only cells with records appear.
struct PerformanceTable {
    std::vector<PerformanceCell> cells;

    [[nodiscard]] const PerformanceCell* find(const std::string& model,
                                              std::size_t horizon) const;
};

/// Two-stage mean: per-series metric over that series' records, then the mean
/// across series.
[[nodiscard]] PerformanceTable aggregate_performance_table(
    std::span<const EvaluationRecord> records);

void write_summary_csv(const std::filesystem::path& path, const PerformanceTable& table);

struct ValidationScore {
    std::string series_id;
    std::string model;
    std::size_t horizon = 0;
    std::size_t input_size = 0;
    double smape = 0.0;
};

struct InputSizeChoice {
    std::string series_id;
    std::string model;
    std::size_t horizon = 0;
    std::size_t input_size = 0;
    double smape = 0.0;
};

struct InputSizeShare {
    std::string model;
    std::size_t horizon = 0;
    std::size_t input_size = 0;
    std::size_t count = 0;
    double percent = 0.0;
};

struct InputSizeSelection {
    std::vector<InputSizeChoice> choices;
    /// Relative frequency of each chosen w per (model, h); sums to 100 per cell.
    std::vector<InputSizeShare> distribution;
};

/// argmin validation sMAPE per (series, model, h); ties go to the smallest w. Every
/// candidate from input_sizes_for_horizon must be present, otherwise InvalidArgument
/// lists the missing (series, w) pairs.
[[nodiscard]] InputSizeSelection select_best_input_size(std::span<const ValidationScore> scores);

}  // namespace tsforge
