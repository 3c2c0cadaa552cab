#pragma once

#include <cstdint>
#include <utility>

#include "sam/date.hpp"
#include "sam/ingest.hpp"
#include "sam/labels.hpp"

namespace sam {

struct SamConfig {
    /// A client is active while days since last access is strictly below this.
    std::int32_t active_threshold_days = 30;
    /// Days after first access at which evaluate_client assigns a label.
    std::int32_t evaluation_horizon_days = 90;
    /// In-shelter percentage above which an active client is chronic.
    double alpha_percent = 85.0;

    /// Throws ConfigError on non-positive fields or alpha outside (0, 100).
    void validate() const;
};

/// Shelter duration, in-shelter percentage and active status at `as_of`.
struct SamMetrics {
    Date as_of;
    std::int32_t duration_days = 1;
    std::int32_t stays_in_window = 0;
    double in_shelter_percent = 0.0;
    bool active = false;
    /// Whole days between the last stay on or before as_of and as_of.
    std::int32_t days_since_last = 0;
};

/// Only stays on or before `as_of` are considered. Duration is the plain date
/// difference from the first stay, floored at 1 day. Throws PreconditionError
/// when the timeline is empty or as_of precedes its first date.
SamMetrics compute_sam_metrics(const ClientTimeline& timeline, Date as_of,
                               const SamConfig& config);

/// Inactive -> Transitional. Active clients are Chronic when
/// stays / duration exceeds alpha, else Episodic. The comparison is done on
/// stays * 100 vs alpha * duration so percent == alpha always lands on Episodic.
AccessLabel classify(const SamMetrics& metrics, const SamConfig& config);

/// Metrics and label at first_date + evaluation_horizon_days.
std::pair<SamMetrics, AccessLabel> evaluate_client(const ClientTimeline& timeline,
                                                   const SamConfig& config);

}  // namespace sam
