#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tsforge {

using PointMatrix = std::vector<std::vector<double>>;

struct ClusterAssignment {
    std::size_t k = 0;
    /// Ascending point indices; cluster c is the one around medoids[c].
    std::vector<std::size_t> medoids;
    std::vector<std::size_t> labels;
    /// Sum of Euclidean distances from each point to its medoid.
    double total_cost = 0.0;
    /// Cost after BUILD followed by the cost after each accepted swap.
    std::vector<double> cost_history;
};

[[nodiscard]] double euclidean(std::span<const double> a, std::span<const double> b);

/// Nearest-medoid labels, ties to the lowest medoid index; returns the total cost.
double assign_to_medoids(const PointMatrix& points, std::span<const std::size_t> medoids,
                         std::vector<std::size_t>& labels);

/// Partitioning around medoids: greedy BUILD, then best-improvement SWAP until no
/// exchange lowers the cost. Requires 2 <= k < n.
[[nodiscard]] ClusterAssignment pam_cluster(const PointMatrix& points, std::size_t k);

struct ClusterQuality {
    std::size_t k = 0;
    double silhouette = 0.0;
    double calinski_harabasz = 0.0;
};

/// Mean silhouette (singletons score 0) and Calinski-Harabasz index. Throws for
/// k < 2, n <= k, an empty cluster or zero within-cluster dispersion.
[[nodiscard]] ClusterQuality cluster_quality(const PointMatrix& points,
                                             const ClusterAssignment& assignment);

/// profile[feature][cluster] = mean of that feature over the cluster's rows.
[[nodiscard]] std::vector<std::vector<double>> cluster_profiles(
    const PointMatrix& raw_features, std::span<const std::size_t> labels, std::size_t k);

void write_assignment_csv(const std::filesystem::path& path,
                          std::span<const std::string> series_ids,
                          const ClusterAssignment& assignment);

/// One row per feature, one column per cluster ("cluster1".."clusterK").
void write_profiles_csv(const std::filesystem::path& path,
                        std::span<const std::string> feature_names,
                        const std::vector<std::vector<double>>& profiles);

}  // namespace tsforge
