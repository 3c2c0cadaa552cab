#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sam/cluster.hpp"
#include "sam/episodes.hpp"
#include "sam/ingest.hpp"
#include "sam/labels.hpp"
#include "sam/metrics.hpp"

namespace sam {

enum class LabelSource { Sam, Cluster, Truth };

std::string_view to_string(LabelSource source);

struct LabeledCohort {
    std::map<std::string, AccessLabel> labels;
    LabelSource source = LabelSource::Sam;
};

/// SAM labels at the evaluation horizon for every timeline.
LabeledCohort label_with_sam(const std::vector<ClientTimeline>& timelines,
                             const SamConfig& config);
/// Labels from a fitted model whose label_map is set.
LabeledCohort label_with_clusters(const ClusterModel& model);

/// Fraction of clients carrying the same label in both cohorts. Throws
/// ConfigError listing the symmetric difference when the client sets differ.
double accuracy(const LabeledCohort& truth, const LabeledCohort& predicted);

struct SweepPoint {
    double alpha_percent = 0.0;
    double accuracy = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    /// Index into points of the first (smallest alpha) maximum.
    std::size_t best_index = 0;

    const SweepPoint& best() const { return points.at(best_index); }
};

/// 5, 10, ..., 95.
std::vector<double> default_alpha_grid();

/// Relabels the cohort with SAM at every alpha in `grid` and scores each
/// labeling against `truth`. Other config fields are held fixed.
SweepResult sweep_alpha(const std::vector<ClientTimeline>& cohort, const LabeledCohort& truth,
                        const std::vector<double>& grid, const SamConfig& config);

/// Summary of one integer-valued feature within a group.
struct FeatureStats {
    double mean = 0.0;
    /// Lower central value for even-sized groups.
    std::int64_t median = 0;
    /// Nearest-rank 90th percentile: value at rank ceil(0.9 n) of the ascending sort.
    std::int64_t upper_decile = 0;
};

struct GroupStats {
    AccessLabel label = AccessLabel::Transitional;
    std::size_t n = 0;
    double share_percent = 0.0;
    /// Absent when n == 0.
    std::optional<FeatureStats> stays;
    std::optional<FeatureStats> episodes;
};

/// Nearest-rank statistics of a non-empty sample. Takes the sample by value
/// since it sorts it.
FeatureStats feature_stats(std::vector<std::int64_t> values);

/// Per-label group statistics, in Transitional/Episodic/Chronic order. Throws
/// ConfigError if a labeled client has no features.
std::vector<GroupStats> group_stats(const LabeledCohort& labels,
                                    const std::vector<EpisodeSummary>& features);

}  // namespace sam
