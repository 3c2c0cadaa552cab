#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "sam/date.hpp"

namespace sam {

/// One client-day of shelter access.
struct StayRecord {
    std::string client_id;
    Date date;

    bool operator==(const StayRecord&) const = default;
};

/// All distinct stay dates of one client, ascending. Never empty.
struct ClientTimeline {
    std::string client_id;
    std::vector<Date> dates;

    Date first_date() const { return dates.front(); }
    Date last_date() const { return dates.back(); }

    bool operator==(const ClientTimeline&) const = default;
};

enum class Era { HousingReady, HousingFirst, Covid19 };

std::string_view to_string(Era era);
/// Accepts "housing-ready", "housing_ready", "HousingReady" and the like.
Era parse_era(std::string_view text);

/// Era boundaries. Eras are half-open: HousingReady is (-inf, housing_ready_end),
/// HousingFirst is [housing_ready_end, housing_first_end), Covid19 is the rest.
struct EraConfig {
    Date housing_ready_end = Date::from_ymd(2017, 8, 1);
    Date housing_first_end = Date::from_ymd(2020, 3, 1);

    /// Throws ConfigError unless housing_ready_end < housing_first_end.
    void validate() const;
    Era era_of(Date date) const;
};

enum class ParseMode { Strict, Lenient };

struct ParseDiagnostic {
    std::size_t line;
    std::string message;
};

struct ParseResult {
    std::vector<StayRecord> records;
    std::vector<ParseDiagnostic> diagnostics;
    /// Data rows seen (excluding header and blank lines).
    std::size_t rows_read = 0;
};

/// Reads `client_id,date` CSV with a header row. Extra columns are ignored and
/// column order is free. A missing required column throws ConfigError; a bad
/// row throws RecordError in strict mode and becomes a diagnostic in lenient mode.
ParseResult parse_records(std::istream& source, ParseMode mode = ParseMode::Lenient);

/// Groups by client, collapses duplicate client-days, sorts dates. Output is
/// ordered by client_id.
std::vector<ClientTimeline> build_timelines(const std::vector<StayRecord>& records);

/// Timelines whose first and last dates both fall inside `era`.
std::vector<ClientTimeline> select_era_cohort(const std::vector<ClientTimeline>& timelines,
                                              Era era, const EraConfig& config);

/// Total number of stay dates across all timelines.
std::size_t total_stays(const std::vector<ClientTimeline>& timelines);

}  // namespace sam
