#include "sam/evaluation.hpp"

#include <algorithm>
#include <unordered_map>

#include "sam/error.hpp"

namespace sam {

std::string_view to_string(LabelSource source) {
    switch (source) {
        case LabelSource::Sam: return "sam";
        case LabelSource::Cluster: return "cluster";
        case LabelSource::Truth: return "truth";
    }
    return "unknown";
}

LabeledCohort label_with_sam(const std::vector<ClientTimeline>& timelines,
                             const SamConfig& config) {
    config.validate();
    LabeledCohort cohort{{}, LabelSource::Sam};
    for (const auto& timeline : timelines) {
        cohort.labels.emplace(timeline.client_id, evaluate_client(timeline, config).second);
    }
    return cohort;
}

LabeledCohort label_with_clusters(const ClusterModel& model) {
    if (model.label_map.empty()) throw PreconditionError("cluster labels have not been mapped");
    LabeledCohort cohort{{}, LabelSource::Cluster};
    for (std::size_t i = 0; i < model.client_ids.size(); ++i) {
        cohort.labels.emplace_hint(
            cohort.labels.end(), model.client_ids[i],
            model.label_map[static_cast<std::size_t>(model.assignments[i])]);
    }
    return cohort;
}

double accuracy(const LabeledCohort& truth, const LabeledCohort& predicted) {
    std::vector<std::string> only_truth;
    std::vector<std::string> only_predicted;
    std::size_t agree = 0;

    auto a = truth.labels.begin();
    auto b = predicted.labels.begin();
    while (a != truth.labels.end() || b != predicted.labels.end()) {
        if (b == predicted.labels.end() || (a != truth.labels.end() && a->first < b->first)) {
            only_truth.push_back(a->first);
            ++a;
        } else if (a == truth.labels.end() || b->first < a->first) {
            only_predicted.push_back(b->first);
            ++b;
        } else {
            if (a->second == b->second) ++agree;
            ++a;
            ++b;
        }
    }

    if (!only_truth.empty() || !only_predicted.empty()) {
        auto list = [](const std::vector<std::string>& ids) {
            std::string out;
            const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
            for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + ids[i];
            if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
            return out;
        };
        std::string message = "labeled cohorts cover different clients;";
        if (!only_truth.empty()) message += " only in " + std::string(to_string(truth.source)) + ": [" + list(only_truth) + "]";
        if (!only_predicted.empty()) message += " only in " + std::string(to_string(predicted.source)) + ": [" + list(only_predicted) + "]";
        throw ConfigError(message);
    }
    if (truth.labels.empty()) throw ConfigError("accuracy of an empty cohort is undefined");
    return static_cast<double>(agree) / static_cast<double>(truth.labels.size());
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int alpha = 5; alpha <= 95; alpha += 5) grid.push_back(alpha);
    return grid;
}

SweepResult sweep_alpha(const std::vector<ClientTimeline>& cohort, const LabeledCohort& truth,
                        const std::vector<double>& grid, const SamConfig& config) {
    if (grid.empty()) throw ConfigError("alpha grid is empty");
    for (double alpha : grid) {
        if (!(alpha > 0.0 && alpha < 100.0)) {
            throw ConfigError("alpha grid value " + std::to_string(alpha) + " outside (0, 100)");
        }
    }
    config.validate();

    // Metrics do not depend on alpha; compute once and relabel per grid point.
    std::vector<std::pair<const std::string*, SamMetrics>> metrics;
    metrics.reserve(cohort.size());
    for (const auto& timeline : cohort) {
        metrics.emplace_back(&timeline.client_id, evaluate_client(timeline, config).first);
    }

    SweepResult result;
    for (double alpha : grid) {
        SamConfig relabel = config;
        relabel.alpha_percent = alpha;
        LabeledCohort predicted{{}, LabelSource::Sam};
        for (const auto& [id, m] : metrics) predicted.labels.emplace(*id, classify(m, relabel));
        result.points.push_back({alpha, accuracy(truth, predicted)});
        if (result.points.back().accuracy > result.points[result.best_index].accuracy) {
            result.best_index = result.points.size() - 1;
        }
    }
    return result;
}

FeatureStats feature_stats(std::vector<std::int64_t> values) {
    if (values.empty()) throw PreconditionError("feature_stats: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    double sum = 0.0;
    for (auto v : values) sum += static_cast<double>(v);

    FeatureStats stats;
    stats.mean = sum / static_cast<double>(n);
    stats.median = values[(n + 1) / 2 - 1];
    stats.upper_decile = values[(9 * n + 9) / 10 - 1];
    return stats;
}

std::vector<GroupStats> group_stats(const LabeledCohort& labels,
                                    const std::vector<EpisodeSummary>& features) {
    std::unordered_map<std::string_view, const EpisodeSummary*> by_client;
    by_client.reserve(features.size());
    for (const auto& f : features) by_client.emplace(f.client_id, &f);

    PerLabel<std::vector<std::int64_t>> stays;
    PerLabel<std::vector<std::int64_t>> episodes;
    for (const auto& [client, label] : labels.labels) {
        auto it = by_client.find(client);
        if (it == by_client.end()) {
            throw ConfigError("no episode features for labeled client '" + client + "'");
        }
        stays[index_of(label)].push_back(it->second->total_stays);
        episodes[index_of(label)].push_back(it->second->total_episodes);
    }

    const auto total = static_cast<double>(labels.labels.size());
    std::vector<GroupStats> out;
    for (auto label : kAllLabels) {
        GroupStats group;
        group.label = label;
        group.n = stays[index_of(label)].size();
        group.share_percent = total > 0 ? 100.0 * static_cast<double>(group.n) / total : 0.0;
        if (group.n > 0) {
            group.stays = feature_stats(std::move(stays[index_of(label)]));
            group.episodes = feature_stats(std::move(episodes[index_of(label)]));
        }
        out.push_back(group);
    }
    return out;
}

}  // namespace sam
