#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sam/date.hpp"
#include "sam/evaluation.hpp"
#include "sam/ingest.hpp"
#include "sam/labels.hpp"

namespace sam {

/// Default series start (mid-2013).
inline const Date kDefaultTimelineOrigin = Date::from_ymd(2013, 7, 1);

/// One calendar quarter.
struct TimelineBin {
    Date start;
    /// Clients whose first stay falls in this quarter, by label.
    PerLabel<std::int64_t> counts{};
    /// Stay-days falling in this quarter, by the client's label.
    PerLabel<std::int64_t> stay_days{};
    std::int64_t total_stay_days = 0;

    /// Percentage of total_stay_days per label; nullopt for an empty bin.
    std::optional<PerLabel<double>> occupancy_shares() const;
};

struct TimelineSeries {
    Date origin;
    /// Exclusive.
    Date end;
    std::vector<TimelineBin> bins;
};

/// Contiguous quarter bins covering [origin, end). `origin` must be the first
/// day of a calendar quarter and precede `end`; otherwise ConfigError.
TimelineSeries make_quarter_bins(Date origin, Date end);

/// Counts each client once, in the quarter of their first stay. Clients first
/// seen outside [origin, end) are skipped. Throws ConfigError for an unlabeled
/// client that would be counted.
TimelineSeries bin_clients(const std::vector<ClientTimeline>& timelines,
                           const LabeledCohort& labels, Date origin, Date end);

/// Attributes every stay-day in [origin, end) to its client's label. Clients
/// first seen before origin still occupy beds and are counted.
TimelineSeries occupancy_share(const std::vector<ClientTimeline>& timelines,
                               const LabeledCohort& labels, Date origin, Date end);

/// bin_clients and occupancy_share in one pass over the data.
TimelineSeries build_timeline(const std::vector<ClientTimeline>& timelines,
                              const LabeledCohort& labels, Date origin, Date end);

/// 100 * (count_t - count_0) / count_0 per label. A label with zero clients in
/// the first bin gets nullopt. Throws PreconditionError on an empty series.
PerLabel<std::optional<std::vector<double>>> percent_change(const TimelineSeries& series);

}  // namespace sam
