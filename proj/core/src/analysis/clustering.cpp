#include "tsforge/analysis/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsforge/common/csv.hpp"
#include "tsforge/common/error.hpp"

namespace tsforge {

namespace {

std::vector<double> distance_matrix(const PointMatrix& points) {
    const std::size_t n = points.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d[i * n + j] = d[j * n + i] = euclidean(points[i], points[j]);
        }
    }
    return d;
}

void check_points(const PointMatrix& points) {
    if (points.empty()) {
        throw InvalidArgument("clustering: no points");
    }
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw InvalidArgument("clustering: points differ in dimension");
        }
        for (const double v : p) {
            if (!std::isfinite(v)) {
                throw NumericError("clustering: non-finite coordinate");
            }
        }
    }
}

double cost_with(const std::vector<double>& d, std::size_t n,
                 const std::vector<std::size_t>& medoids) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (const std::size_t m : medoids) {
            best = std::min(best, d[j * n + m]);
        }
        total += best;
    }
    return total;
}

}  // namespace

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

double assign_to_medoids(const PointMatrix& points, std::span<const std::size_t> medoids,
                         std::vector<std::size_t>& labels) {
    labels.assign(points.size(), 0);
    double total = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < medoids.size(); ++c) {
            const double dist = euclidean(points[j], points[medoids[c]]);
            if (dist < best || (dist == best && medoids[c] < medoids[best_c])) {
                best = dist;
                best_c = c;
            }
        }
        labels[j] = best_c;
        total += best;
    }
    return total;
}

ClusterAssignment pam_cluster(const PointMatrix& points, std::size_t k) {
    check_points(points);
    const std::size_t n = points.size();
    if (k < 2 || k >= n) {
        throw InvalidArgument("pam: k = " + std::to_string(k) + " outside [2, " +
                              std::to_string(n - 1) + "]");
    }
    const auto d = distance_matrix(points);

    // BUILD: start from the most central point, then add the point with the
    // largest cost reduction.
    std::vector<std::size_t> medoids;
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    {
        std::size_t best_i = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s += d[i * n + j];
            }
            if (s < best) {
                best = s;
                best_i = i;
            }
        }
        medoids.push_back(best_i);
        for (std::size_t j = 0; j < n; ++j) {
            nearest[j] = d[j * n + best_i];
        }
    }
    while (medoids.size() < k) {
        std::size_t best_i = n;
        double best_gain = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(medoids.begin(), medoids.end(), i) != medoids.end()) {
                continue;
            }
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                gain += std::max(nearest[j] - d[j * n + i], 0.0);
            }
            if (gain > best_gain) {
                best_gain = gain;
                best_i = i;
            }
        }
        medoids.push_back(best_i);
        for (std::size_t j = 0; j < n; ++j) {
            nearest[j] = std::min(nearest[j], d[j * n + best_i]);
        }
    }

    ClusterAssignment out;
    out.k = k;
    double cost = cost_with(d, n, medoids);
    out.cost_history.push_back(cost);

    // SWAP: take the best strictly improving (medoid, non-medoid) exchange.
    for (;;) {
        double best_cost = cost;
        std::size_t best_slot = k;
        std::size_t best_point = n;
        for (std::size_t slot = 0; slot < k; ++slot) {
            for (std::size_t o = 0; o < n; ++o) {
                if (std::find(medoids.begin(), medoids.end(), o) != medoids.end()) {
                    continue;
                }
                auto trial = medoids;
                trial[slot] = o;
                const double c = cost_with(d, n, trial);
                if (c < best_cost - 1e-12 * std::max(1.0, cost)) {
                    best_cost = c;
                    best_slot = slot;
                    best_point = o;
                }
            }
        }
        if (best_slot == k) {
            break;
        }
        medoids[best_slot] = best_point;
        cost = best_cost;
        out.cost_history.push_back(cost);
    }

    std::sort(medoids.begin(), medoids.end());
    out.medoids = medoids;
    out.total_cost = assign_to_medoids(points, out.medoids, out.labels);
    return out;
}

ClusterQuality cluster_quality(const PointMatrix& points, const ClusterAssignment& assignment) {
    check_points(points);
    const std::size_t n = points.size();
    const std::size_t k = assignment.k;
    if (k < 2) {
        throw InvalidArgument("cluster quality needs k >= 2");
    }
    if (n <= k) {
        throw InvalidArgument("cluster quality needs more points than clusters");
    }
    if (assignment.labels.size() != n) {
        throw InvalidArgument("assignment does not cover every point");
    }
    std::vector<std::size_t> size(k, 0);
    for (const std::size_t l : assignment.labels) {
        if (l >= k) {
            throw InvalidArgument("label out of range");
        }
        size[l] += 1;
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (size[c] == 0) {
            throw InvalidArgument("cluster " + std::to_string(c) + " is empty");
        }
    }
    const auto d = distance_matrix(points);

    double silhouette = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = assignment.labels[i];
        if (size[own] == 1) {
            continue;
        }
        std::vector<double> sum(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                sum[assignment.labels[j]] += d[i * n + j];
            }
        }
        const double a = sum[own] / static_cast<double>(size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own) {
                b = std::min(b, sum[c] / static_cast<double>(size[c]));
            }
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) {
            silhouette += (b - a) / denom;
        }
    }

    const std::size_t dim = points.front().size();
    std::vector<double> global(dim, 0.0);
    std::vector<std::vector<double>> centroid(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < dim; ++f) {
            global[f] += points[i][f];
            centroid[assignment.labels[i]][f] += points[i][f];
        }
    }
    for (auto& g : global) {
        g /= static_cast<double>(n);
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (auto& v : centroid[c]) {
            v /= static_cast<double>(size[c]);
        }
    }
    double between = 0.0;
    double within = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const double dist = euclidean(centroid[c], global);
        between += static_cast<double>(size[c]) * dist * dist;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double dist = euclidean(points[i], centroid[assignment.labels[i]]);
        within += dist * dist;
    }
    if (!(within > 0.0)) {
        throw NumericError("Calinski-Harabasz undefined: zero within-cluster dispersion");
    }
    ClusterQuality q;
    q.k = k;
    q.silhouette = silhouette / static_cast<double>(n);
    q.calinski_harabasz = (between / static_cast<double>(k - 1)) /
                          (within / static_cast<double>(n - k));
    return q;
}

std::vector<std::vector<double>> cluster_profiles(const PointMatrix& raw_features,
                                                  std::span<const std::size_t> labels,
                                                  std::size_t k) {
    if (raw_features.size() != labels.size()) {
        throw InvalidArgument("profiles: labels do not cover every row");
    }
    if (raw_features.empty()) {
        return {};
    }
    const std::size_t dim = raw_features.front().size();
    std::vector<std::vector<double>> profile(dim, std::vector<double>(k, 0.0));
    std::vector<std::size_t> size(k, 0);
    for (std::size_t i = 0; i < raw_features.size(); ++i) {
        if (labels[i] >= k) {
            throw InvalidArgument("profiles: label out of range");
        }
        size[labels[i]] += 1;
        for (std::size_t f = 0; f < dim; ++f) {
            profile[f][labels[i]] += raw_features[i][f];
        }
    }
    for (std::size_t f = 0; f < dim; ++f) {
        for (std::size_t c = 0; c < k; ++c) {
            profile[f][c] = size[c] > 0 ? profile[f][c] / static_cast<double>(size[c])
                                        : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return profile;
}

void write_assignment_csv(const std::filesystem::path& path,
                          std::span<const std::string> series_ids,
                          const ClusterAssignment& assignment) {
    if (series_ids.size() != assignment.labels.size()) {
        throw InvalidArgument("assignment csv: ids and labels differ in length");
    }
    std::vector<csv::Row> rows;
    for (std::size_t i = 0; i < series_ids.size(); ++i) {
        const std::size_t c = assignment.labels[i];
        rows.push_back({series_ids[i], std::to_string(c + 1),
                        assignment.medoids[c] == i ? "1" : "0"});
    }
    csv::write_file(path, {"series_id", "cluster", "is_medoid"}, rows);
}

void write_profiles_csv(const std::filesystem::path& path,
                        std::span<const std::string> feature_names,
                        const std::vector<std::vector<double>>& profiles) {
    const std::size_t k = profiles.empty() ? 0 : profiles.front().size();
    csv::Row header{"feature"};
    for (std::size_t c = 0; c < k; ++c) {
        header.push_back("cluster" + std::to_string(c + 1));
    }
    std::vector<csv::Row> rows;
    for (std::size_t f = 0; f < profiles.size(); ++f) {
        csv::Row row{f < feature_names.size() ? feature_names[f] : std::to_string(f)};
        for (const double v : profiles[f]) {
            row.push_back(csv::format_double(v));
        }
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows);
}

}  // namespace tsforge
