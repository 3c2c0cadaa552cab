#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sam/episodes.hpp"
#include "sam/labels.hpp"

namespace sam {

struct ClusterConfig {
    int k = 3;
    std::uint64_t seed = 0;
    int restarts = 50;
    int max_iterations = 300;
    /// Stop once no centroid moves farther than this (Euclidean, fitting space).
    double convergence_tolerance = 1e-9;
    /// z-score each feature before fitting.
    bool standardize = true;

    void validate() const;
};

/// A point in (total stays, total episodes) feature space.
struct FeaturePoint {
    std::string client_id;
    double stays = 0.0;
    double episodes = 0.0;
};

using Centroid = std::array<double, 2>;  // {stays, episodes}

struct ClusterModel {
    int k = 0;
    /// In original (unstandardized) feature units.
    std::vector<Centroid> centroids;
    std::vector<std::size_t> sizes;
    /// Sorted ascending; parallel to assignments.
    std::vector<std::string> client_ids;
    std::vector<int> assignments;
    /// Within-cluster sum of squares of the winning run, in fitting space.
    double wcss = 0.0;
    /// WCSS after each Lloyd iteration of the winning run.
    std::vector<double> wcss_trace;
    int iterations = 0;
    bool standardized = false;
    /// Filled by map_clusters_to_labels; indexed by cluster.
    std::vector<AccessLabel> label_map;

    /// Cluster index of `client_id`; throws std::out_of_range if unknown.
    int cluster_of(const std::string& client_id) const;
    /// Label of `client_id` through label_map; throws if labels are not mapped.
    AccessLabel label_of(const std::string& client_id) const;
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` by WCSS.
/// Input order does not matter: points are processed sorted by client_id.
/// Throws ConfigError when there are fewer points than k.
ClusterModel fit_kmeans(std::span<const FeaturePoint> points, const ClusterConfig& config);
ClusterModel fit_kmeans(std::span<const EpisodeSummary> features, const ClusterConfig& config);

/// Names the three clusters: largest mean stays is Chronic, then the largest
/// mean episodes among the other two is Episodic, the remaining one is
/// Transitional. Ties go to the smaller cluster, then the lower index.
/// Throws ConfigError unless k == 3.
ClusterModel map_clusters_to_labels(ClusterModel model);

}  // namespace sam
