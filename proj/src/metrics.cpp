#include "sam/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "sam/error.hpp"

namespace sam {

std::optional<AccessLabel> parse_label(std::string_view text) {
    std::string lower;
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (auto label : kAllLabels) {
        if (lower == to_string(label)) return label;
    }
    return std::nullopt;
}

void SamConfig::validate() const {
    if (active_threshold_days <= 0) throw ConfigError("active_threshold_days must be positive");
    if (evaluation_horizon_days <= 0) {
        throw ConfigError("evaluation_horizon_days must be positive");
    }
    if (!(alpha_percent > 0.0 && alpha_percent < 100.0)) {
        throw ConfigError("alpha_percent must lie in (0, 100), got " +
                          std::to_string(alpha_percent));
    }
}

SamMetrics compute_sam_metrics(const ClientTimeline& timeline, Date as_of,
                               const SamConfig& config) {
    if (timeline.dates.empty()) {
        throw PreconditionError("compute_sam_metrics: empty timeline for client '" +
                                timeline.client_id + "'");
    }
    const Date first = timeline.first_date();
    if (as_of < first) {
        throw PreconditionError("compute_sam_metrics: as_of " + as_of.to_string() +
                                " precedes first stay " + first.to_string() + " of client '" +
                                timeline.client_id + "'");
    }

    auto window_end = std::upper_bound(timeline.dates.begin(), timeline.dates.end(), as_of);
    const auto stays = static_cast<std::int32_t>(window_end - timeline.dates.begin());
    const Date last = *(window_end - 1);

    SamMetrics metrics;
    metrics.as_of = as_of;
    metrics.duration_days = std::max<std::int32_t>(1, as_of - first);
    metrics.stays_in_window = stays;
    metrics.in_shelter_percent = 100.0 * stays / metrics.duration_days;
    metrics.days_since_last = as_of - last;
    metrics.active = metrics.days_since_last < config.active_threshold_days;
    return metrics;
}

AccessLabel classify(const SamMetrics& metrics, const SamConfig& config) {
    if (!metrics.active) return AccessLabel::Transitional;
    const double lhs = 100.0 * static_cast<double>(metrics.stays_in_window);
    const double rhs = config.alpha_percent * static_cast<double>(metrics.duration_days);
    return lhs > rhs ? AccessLabel::Chronic : AccessLabel::Episodic;
}

std::pair<SamMetrics, AccessLabel> evaluate_client(const ClientTimeline& timeline,
                                                   const SamConfig& config) {
    if (timeline.dates.empty()) {
        throw PreconditionError("evaluate_client: empty timeline for client '" +
                                timeline.client_id + "'");
    }
    auto metrics = compute_sam_metrics(
        timeline, timeline.first_date() + config.evaluation_horizon_days, config);
    return {metrics, classify(metrics, config)};
}

}  // namespace sam
