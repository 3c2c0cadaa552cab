#pragma once

#include <cstdint>
#include <string>

#include "sam/ingest.hpp"

namespace sam {

/// Clustering features of one client's full record.
struct EpisodeSummary {
    std::string client_id;
    std::int64_t total_stays = 0;
    std::int64_t total_episodes = 0;

    bool operator==(const EpisodeSummary&) const = default;
};

inline constexpr std::int32_t kDefaultEpisodeGapDays = 30;

/// Consecutive stays fewer than `gap_days` apart share an episode; a gap of
/// exactly `gap_days` or more starts a new one. Throws PreconditionError on an
/// empty timeline or non-positive gap.
EpisodeSummary count_episodes(const ClientTimeline& timeline,
                              std::int32_t gap_days = kDefaultEpisodeGapDays);

}  // namespace sam
