#include "tsforge/evaluation/ranking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"
#include "tsforge/common/error.hpp"

namespace tsforge {

namespace {

// Critical values of the studentized range statistic divided by sqrt(2), for
// k = 2..20 models and infinite degrees of freedom. k <= 10 are the commonly
// tabulated values; the rest were computed from the studentized range quantile.
constexpr std::array<double, 19> kQ05{1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031,
                                      3.102, 3.164, 3.219, 3.268, 3.313, 3.354, 3.391,
                                      3.426, 3.458, 3.489, 3.517, 3.544};
constexpr std::array<double, 19> kQ10{1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780,
                                      2.855, 2.920, 2.978, 3.030, 3.077, 3.120, 3.159,
                                      3.196, 3.230, 3.261, 3.291, 3.319};

}  // namespace

std::string to_string(RankMetric metric) {
    return metric == RankMetric::mape ? "mape" : "smape";
}

MetricMatrix build_metric_matrix(std::span<const SeriesScore> scores, RankMetric metric,
                                 std::size_t horizon, std::vector<std::string> models,
                                 bool drop_incomplete) {
    std::map<std::string, std::map<std::string, double>> by_series;
    std::set<std::string> seen;
    for (const auto& s : scores) {
        if (s.horizon != horizon) {
            continue;
        }
        const double v = metric == RankMetric::mape ? s.mape : s.smape;
        if (!by_series[s.series_id].emplace(s.model, v).second) {
            throw InvalidArgument("several scores for " + s.series_id + "/" + s.model +
                                  " at h=" + std::to_string(horizon) +
                                  "; select one input size first");
        }
        seen.insert(s.model);
    }
    if (models.empty()) {
        models.assign(seen.begin(), seen.end());
    }
    MetricMatrix m;
    m.models = models;
    for (const auto& [series, cells] : by_series) {
        std::vector<double> row;
        bool complete = true;
        for (const auto& model : models) {
            const auto it = cells.find(model);
            if (it == cells.end()) {
                complete = false;
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                row.push_back(it->second);
            }
        }
        if (!complete && drop_incomplete) {
            continue;
        }
        m.series.push_back(series);
        m.values.push_back(std::move(row));
    }
    return m;
}

std::vector<double> midranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) {
            ranks[order[t]] = r;
        }
        i = j;
    }
    return ranks;
}

FriedmanResult friedman_statistic(const std::vector<std::vector<double>>& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) {
        throw InvalidArgument("friedman: needs at least 2 series, got " + std::to_string(n));
    }
    const std::size_t k = matrix.front().size();
    if (k < 2) {
        throw InvalidArgument("friedman: needs at least 2 models");
    }
    FriedmanResult r;
    r.mean_ranks.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != k) {
            throw InvalidArgument("friedman: row " + std::to_string(i) + " has " +
                                  std::to_string(matrix[i].size()) + " cells, expected " +
                                  std::to_string(k));
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(matrix[i][j])) {
                throw InvalidArgument("friedman: missing cell at series " + std::to_string(i) +
                                      ", model " + std::to_string(j));
            }
        }
        const auto ranks = midranks(matrix[i]);
        for (std::size_t j = 0; j < k; ++j) {
            r.mean_ranks[j] += ranks[j];
        }
    }
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    // Centered rank-sum form; equal to the textbook expression and exactly zero
    // when every mean rank is (k + 1) / 2.
    const double centre = (kk + 1.0) / 2.0;
    double sum_sq = 0.0;
    for (auto& v : r.mean_ranks) {
        v /= nn;
        sum_sq += (v - centre) * (v - centre);
    }
    r.statistic = 12.0 * nn / (kk * (kk + 1.0)) * sum_sq;
    r.dof = k - 1;
    r.series_count = n;
    return r;
}

double nemenyi_q(std::size_t k, double alpha) {
    if (k < 2 || k > 20) {
        throw InvalidArgument("nemenyi: k = " + std::to_string(k) + " outside the table (2..20)");
    }
    if (std::abs(alpha - 0.05) < 1e-12) {
        return kQ05[k - 2];
    }
    if (std::abs(alpha - 0.10) < 1e-12) {
        return kQ10[k - 2];
    }
    throw InvalidArgument("nemenyi: alpha must be 0.05 or 0.10");
}

double nemenyi_critical_difference(std::size_t k, std::size_t n, double alpha) {
    if (n < 2) {
        throw InvalidArgument("nemenyi: needs at least 2 series");
    }
    const double kk = static_cast<double>(k);
    return nemenyi_q(k, alpha) * std::sqrt(kk * (kk + 1.0) / (6.0 * static_cast<double>(n)));
}

std::vector<std::vector<std::size_t>> cd_groups(std::span<const double> sorted_ranks, double cd) {
    std::vector<std::vector<std::size_t>> groups;
    std::size_t last_end = 0;
    for (std::size_t i = 0; i < sorted_ranks.size(); ++i) {
        std::size_t j = i;
        while (j + 1 < sorted_ranks.size() && sorted_ranks[j + 1] - sorted_ranks[i] <= cd) {
            ++j;
        }
        // A run ending where the previous one ended is contained in it.
        if (i == 0 || j + 1 > last_end) {
            std::vector<std::size_t> g(j - i + 1);
            std::iota(g.begin(), g.end(), i);
            groups.push_back(std::move(g));
            last_end = j + 1;
        }
    }
    return groups;
}

RankingReport build_cd_report(std::span<const std::string> models,
                              std::span<const double> mean_ranks, double cd) {
    if (models.size() != mean_ranks.size()) {
        throw InvalidArgument("cd report: " + std::to_string(models.size()) + " models vs " +
                              std::to_string(mean_ranks.size()) + " ranks");
    }
    std::vector<std::size_t> order(models.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return mean_ranks[a] < mean_ranks[b];
    });
    RankingReport report;
    report.critical_difference = cd;
    for (const std::size_t i : order) {
        report.models.push_back(models[i]);
        report.mean_ranks.push_back(mean_ranks[i]);
    }
    for (const auto& g : cd_groups(report.mean_ranks, cd)) {
        std::vector<std::string> names;
        names.reserve(g.size());
        for (const std::size_t i : g) {
            names.push_back(report.models[i]);
        }
        report.groups.push_back(std::move(names));
    }
    return report;
}

RankingReport rank_models(const MetricMatrix& matrix, double alpha) {
    const auto fr = friedman_statistic(matrix.values);
    const double cd = nemenyi_critical_difference(matrix.models.size(), fr.series_count, alpha);
    auto report = build_cd_report(matrix.models, fr.mean_ranks, cd);
    report.statistic = fr.statistic;
    report.dof = fr.dof;
    report.alpha = alpha;
    report.series_count = fr.series_count;
    return report;
}

std::string ranking_to_json(std::span<const RankingReport> reports) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["metric"] = r.metric;
        j["horizon"] = r.horizon;
        j["scope"] = r.scope;
        j["models"] = r.models;
        j["mean_ranks"] = r.mean_ranks;
        j["friedman_statistic"] = r.statistic;
        j["dof"] = r.dof;
        j["critical_difference"] = r.critical_difference;
        j["alpha"] = r.alpha;
        j["series_count"] = r.series_count;
        j["groups"] = r.groups;
        doc.push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::vector<RankingReport> ranking_from_json(const std::string& text) {
    std::vector<RankingReport> out;
    try {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& j : doc) {
            RankingReport r;
            r.metric = j.at("metric").get<std::string>();
            r.horizon = j.at("horizon").get<std::size_t>();
            r.scope = j.at("scope").get<std::string>();
            r.models = j.at("models").get<std::vector<std::string>>();
            r.mean_ranks = j.at("mean_ranks").get<std::vector<double>>();
            r.statistic = j.at("friedman_statistic").get<double>();
            r.dof = j.at("dof").get<std::size_t>();
            r.critical_difference = j.at("critical_difference").get<double>();
            r.alpha = j.at("alpha").get<double>();
            r.series_count = j.at("series_count").get<std::size_t>();
            r.groups = j.at("groups").get<std::vector<std::vector<std::string>>>();
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ranking json: ") + e.what());
    }
    return out;
}

}  // namespace tsforge
