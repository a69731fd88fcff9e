#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tsforge/evaluation/records.hpp"

namespace tsforge {

/// Rows are series, columns models; lower is better. NaN marks a missing cell.
struct MetricMatrix {
    std::vector<std::string> series;
    std::vector<std::string> models;
    std::vector<std::vector<double>> values;
};

enum class RankMetric { mape, smape };

[[nodiscard]] std::string to_string(RankMetric metric);

/// Collects one metric at horizon h for the given models (all models found when
/// `models` is empty) over the series that have every model. Series missing a
/// model are dropped when `drop_incomplete`, otherwise left as NaN cells.
[[nodiscard]] MetricMatrix build_metric_matrix(std::span<const SeriesScore> scores,
                                               RankMetric metric, std::size_t horizon,
                                               std::vector<std::string> models = {},
                                               bool drop_incomplete = true);

/// 1-based ranks, ties receiving the mean of the positions they span.
[[nodiscard]] std::vector<double> midranks(std::span<const double> values);

struct FriedmanResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    std::vector<double> mean_ranks;
    std::size_t series_count = 0;
};

/// chi^2 = 12N / (k(k+1)) * (sum_j Rbar_j^2 - k(k+1)^2 / 4) over per-series midranks
/// (1 = lowest metric). Non-finite cells are rejected.
[[nodiscard]] FriedmanResult friedman_statistic(const std::vector<std::vector<double>>& matrix);

/// Studentized-range quantile divided by sqrt(2); alpha in {0.05, 0.10}, 2 <= k <= 20.
[[nodiscard]] double nemenyi_q(std::size_t k, double alpha = 0.05);

/// q_alpha(k) * sqrt(k (k + 1) / (6 N)).
[[nodiscard]] double nemenyi_critical_difference(std::size_t k, std::size_t n,
                                                 double alpha = 0.05);

struct RankingReport {
    std::string metric;
    std::size_t horizon = 0;
    std::string scope = "all";
    /// Models in ascending mean-rank order.
    std::vector<std::string> models;
    std::vector<double> mean_ranks;
    double statistic = 0.0;
    std::size_t dof = 0;
    double critical_difference = 0.0;
    double alpha = 0.05;
    std::size_t series_count = 0;
    /// Maximal runs of models whose mean ranks lie within the critical difference.
    std::vector<std::vector<std::string>> groups;
};

/// Indices (into the sorted ranks) of each maximal group with gap <= cd;
/// `sorted_ranks` must be ascending.
[[nodiscard]] std::vector<std::vector<std::size_t>> cd_groups(
    std::span<const double> sorted_ranks, double cd);

[[nodiscard]] RankingReport build_cd_report(std::span<const std::string> models,
                                            std::span<const double> mean_ranks, double cd);

/// Friedman + Nemenyi over a complete matrix.
[[nodiscard]] RankingReport rank_models(const MetricMatrix& matrix, double alpha = 0.05);

[[nodiscard]] std::string ranking_to_json(std::span<const RankingReport> reports);
[[nodiscard]] std::vector<RankingReport> ranking_from_json(const std::string& text);

}  // namespace tsforge
