#include "sam/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sam/error.hpp"

namespace sam {

namespace {

using Point = std::array<double, 2>;

double squared_distance(const Point& a, const Point& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct RunResult {
    std::vector<Point> centroids;
    std::vector<int> assignments;
    std::vector<double> wcss_trace;
    double wcss = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

std::vector<Point> seed_plus_plus(const std::vector<Point>& data, int k, std::mt19937_64& rng) {
    const std::size_t n = data.size();
    std::vector<Point> centers;
    centers.reserve(static_cast<std::size_t>(k));

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    centers.push_back(data[pick(rng)]);

    std::vector<double> best(n);
    for (std::size_t i = 0; i < n; ++i) best[i] = squared_distance(data[i], centers[0]);

    while (centers.size() < static_cast<std::size_t>(k)) {
        const double total = std::accumulate(best.begin(), best.end(), 0.0);
        std::size_t chosen = 0;
        if (total <= 0.0) {
            chosen = pick(rng);
        } else {
            std::uniform_real_distribution<double> unit(0.0, total);
            const double target = unit(rng);
            double cumulative = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += best[i];
                if (best[i] > 0.0 && target < cumulative) {
                    chosen = i;
                    break;
                }
            }
        }
        centers.push_back(data[chosen]);
        for (std::size_t i = 0; i < n; ++i) {
            best[i] = std::min(best[i], squared_distance(data[i], centers.back()));
        }
    }
    return centers;
}

int nearest(const Point& p, const std::vector<Point>& centers) {
    int best_index = 0;
    double best_distance = squared_distance(p, centers[0]);
    for (std::size_t c = 1; c < centers.size(); ++c) {
        const double d = squared_distance(p, centers[c]);
        if (d < best_distance) {
            best_distance = d;
            best_index = static_cast<int>(c);
        }
    }
    return best_index;
}

// Moves the point farthest from its centroid (taken from a cluster that can
// spare one) into each empty cluster.
void repair_empty_clusters(const std::vector<Point>& data, const std::vector<Point>& centers,
                           std::vector<int>& assignments, std::vector<std::size_t>& counts) {
    const int k = static_cast<int>(counts.size());
    std::vector<bool> moved(data.size(), false);
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] != 0) continue;
        std::size_t donor = data.size();
        double farthest = -1.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto from = static_cast<std::size_t>(assignments[i]);
            if (moved[i] || counts[from] < 2) continue;
            const double d = squared_distance(data[i], centers[from]);
            if (d > farthest) {
                farthest = d;
                donor = i;
            }
        }
        if (donor == data.size()) continue;
        --counts[static_cast<std::size_t>(assignments[donor])];
        assignments[donor] = c;
        ++counts[static_cast<std::size_t>(c)];
        moved[donor] = true;
    }
}

double within_cluster_ss(const std::vector<Point>& data, const std::vector<Point>& centers,
                         const std::vector<int>& assignments) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        total += squared_distance(data[i], centers[static_cast<std::size_t>(assignments[i])]);
    }
    return total;
}

RunResult lloyd(const std::vector<Point>& data, const ClusterConfig& config,
                std::mt19937_64& rng) {
    const auto k = static_cast<std::size_t>(config.k);
    RunResult run;
    run.centroids = seed_plus_plus(data, config.k, rng);
    run.assignments.assign(data.size(), 0);

    std::vector<std::size_t> counts(k);
    std::vector<Point> sums(k);
    for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < data.size(); ++i) {
            run.assignments[i] = nearest(data[i], run.centroids);
            ++counts[static_cast<std::size_t>(run.assignments[i])];
        }
        repair_empty_clusters(data, run.centroids, run.assignments, counts);

        std::fill(sums.begin(), sums.end(), Point{0.0, 0.0});
        for (std::size_t i = 0; i < data.size(); ++i) {
            auto& sum = sums[static_cast<std::size_t>(run.assignments[i])];
            sum[0] += data[i][0];
            sum[1] += data[i][1];
        }
        double max_shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            Point updated{sums[c][0] / static_cast<double>(counts[c]),
                          sums[c][1] / static_cast<double>(counts[c])};
            max_shift = std::max(max_shift, std::sqrt(squared_distance(updated, run.centroids[c])));
            run.centroids[c] = updated;
        }

        run.wcss = within_cluster_ss(data, run.centroids, run.assignments);
        run.wcss_trace.push_back(run.wcss);
        run.iterations = iteration + 1;
        if (max_shift <= config.convergence_tolerance) break;
    }
    return run;
}

}  // namespace

void ClusterConfig::validate() const {
    if (k < 2) throw ConfigError("k must be at least 2");
    if (restarts < 1) throw ConfigError("restarts must be at least 1");
    if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    if (!(convergence_tolerance >= 0.0)) {
        throw ConfigError("convergence_tolerance must be non-negative");
    }
}

int ClusterModel::cluster_of(const std::string& client_id) const {
    auto it = std::lower_bound(client_ids.begin(), client_ids.end(), client_id);
    if (it == client_ids.end() || *it != client_id) {
        throw std::out_of_range("client '" + client_id + "' is not in the cluster model");
    }
    return assignments[static_cast<std::size_t>(it - client_ids.begin())];
}

AccessLabel ClusterModel::label_of(const std::string& client_id) const {
    if (label_map.empty()) throw PreconditionError("cluster labels have not been mapped");
    return label_map[static_cast<std::size_t>(cluster_of(client_id))];
}

ClusterModel fit_kmeans(std::span<const FeaturePoint> points, const ClusterConfig& config) {
    config.validate();
    if (points.size() < static_cast<std::size_t>(config.k)) {
        throw ConfigError("k-means needs at least k=" + std::to_string(config.k) +
                          " clients, got " + std::to_string(points.size()));
    }

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points[a].client_id < points[b].client_id;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (points[order[i]].client_id == points[order[i - 1]].client_id) {
            throw ConfigError("duplicate client_id '" + points[order[i]].client_id +
                              "' in clustering features");
        }
    }

    const std::size_t n = points.size();
    std::vector<Point> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        raw[i] = {points[order[i]].stays, points[order[i]].episodes};
    }

    std::vector<Point> data = raw;
    if (config.standardize) {
        for (std::size_t dim = 0; dim < 2; ++dim) {
            double mean = 0.0;
            for (const auto& p : raw) mean += p[dim];
            mean /= static_cast<double>(n);
            double variance = 0.0;
            for (const auto& p : raw) variance += (p[dim] - mean) * (p[dim] - mean);
            double sd = std::sqrt(variance / static_cast<double>(n));
            if (!(sd > 0.0)) sd = 1.0;
            for (std::size_t i = 0; i < n; ++i) data[i][dim] = (raw[i][dim] - mean) / sd;
        }
    }

    RunResult best;
    for (int restart = 0; restart < config.restarts; ++restart) {
        std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(restart))));
        RunResult run = lloyd(data, config, rng);
        if (run.wcss < best.wcss) best = std::move(run);
    }

    ClusterModel model;
    model.k = config.k;
    model.standardized = config.standardize;
    model.wcss = best.wcss;
    model.wcss_trace = std::move(best.wcss_trace);
    model.iterations = best.iterations;
    model.assignments = std::move(best.assignments);
    model.client_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) model.client_ids.push_back(points[order[i]].client_id);

    const auto k = static_cast<std::size_t>(config.k);
    model.sizes.assign(k, 0);
    model.centroids.assign(k, Centroid{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(model.assignments[i]);
        ++model.sizes[c];
        model.centroids[c][0] += raw[i][0];
        model.centroids[c][1] += raw[i][1];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (model.sizes[c] == 0) continue;
        model.centroids[c][0] /= static_cast<double>(model.sizes[c]);
        model.centroids[c][1] /= static_cast<double>(model.sizes[c]);
    }
    return model;
}

ClusterModel fit_kmeans(std::span<const EpisodeSummary> features, const ClusterConfig& config) {
    std::vector<FeaturePoint> points;
    points.reserve(features.size());
    for (const auto& f : features) {
        points.push_back({f.client_id, static_cast<double>(f.total_stays),
                          static_cast<double>(f.total_episodes)});
    }
    return fit_kmeans(std::span<const FeaturePoint>(points), config);
}

ClusterModel map_clusters_to_labels(ClusterModel model) {
    if (model.k != 3 || model.centroids.size() != 3) {
        throw ConfigError("cluster-to-label mapping requires k = 3, got k = " +
                          std::to_string(model.k));
    }

    // Prefers higher value, then smaller cluster, then lower index.
    auto pick = [&](const std::vector<std::size_t>& candidates, std::size_t dim) {
        std::size_t best = candidates.front();
        for (std::size_t c : candidates) {
            const double value = model.centroids[c][dim];
            const double best_value = model.centroids[best][dim];
            if (value > best_value ||
                (value == best_value && model.sizes[c] < model.sizes[best])) {
                best = c;
            }
        }
        return best;
    };

    std::vector<std::size_t> remaining{0, 1, 2};
    const std::size_t chronic = pick(remaining, 0);
    std::erase(remaining, chronic);
    const std::size_t episodic = pick(remaining, 1);
    std::erase(remaining, episodic);

    model.label_map.assign(3, AccessLabel::Transitional);
    model.label_map[chronic] = AccessLabel::Chronic;
    model.label_map[episodic] = AccessLabel::Episodic;
    return model;
}

}  // namespace sam
