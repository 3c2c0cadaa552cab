#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "sam/ingest.hpp"

namespace sam {

/// Fixed two-decimal rendering used for every percentage in CSV output.
std::string format_fixed2(double value);

/// Writes `content` to `path` byte-for-byte, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);

struct IngestSummary {
    std::size_t rows_read = 0;
    std::size_t records = 0;
    std::size_t diagnostics = 0;
    std::size_t clients = 0;
    /// Distinct client-days after duplicate collapse.
    std::size_t unique_client_days = 0;
};

struct LoadedInput {
    std::vector<ClientTimeline> timelines;
    IngestSummary summary;
};

/// Parses one or more CSV files and builds timelines. Lenient-mode
/// diagnostics are written to `diag` as `path:line: message`.
LoadedInput load_timelines(const std::vector<std::filesystem::path>& paths, ParseMode mode,
                           std::ostream& diag);

/// Renders records as the standard `client_id,date` CSV.
std::string render_records_csv(const std::vector<StayRecord>& records);

}  // namespace sam
