#include "sam/episodes.hpp"

#include "sam/error.hpp"

namespace sam {

EpisodeSummary count_episodes(const ClientTimeline& timeline, std::int32_t gap_days) {
    if (timeline.dates.empty()) {
        throw PreconditionError("count_episodes: empty timeline for client '" +
                                timeline.client_id + "'");
    }
    if (gap_days <= 0) throw PreconditionError("count_episodes: gap_days must be positive");

    EpisodeSummary summary{timeline.client_id,
                           static_cast<std::int64_t>(timeline.dates.size()), 1};
    for (std::size_t i = 1; i < timeline.dates.size(); ++i) {
        if (timeline.dates[i] - timeline.dates[i - 1] >= gap_days) ++summary.total_episodes;
    }
    return summary;
}

}  // namespace sam
