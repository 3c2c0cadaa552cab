#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sam/cluster.hpp"
#include "sam/date.hpp"
#include "sam/ingest.hpp"
#include "sam/metrics.hpp"
#include "sam/timeline.hpp"

namespace sam {

/// Effective configuration of one CLI invocation.
struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path output_dir = ".";
    SamConfig sam;
    ClusterConfig cluster;
    EraConfig eras;
    Era era = Era::HousingReady;
    Date origin = kDefaultTimelineOrigin;
    /// Exclusive timeline end; defaults to the day after the last stay.
    std::optional<Date> end;
    /// Snapshot date for `metrics`; defaults to each client's evaluation horizon.
    std::optional<Date> as_of;
    bool include_labels = true;
    ParseMode parse_mode = ParseMode::Lenient;
    std::filesystem::path scenario;
    /// Overrides the scenario file's seed when set.
    std::optional<std::uint64_t> scenario_seed;

    /// Checks flag combinations and that every input exists. Throws ConfigError.
    void validate(bool needs_inputs) const;
};

/// Output files written by a command, relative to the output directory.
struct CommandResult {
    std::vector<std::string> files;
};

/// Writes metrics.csv: one row per client with first_date, as_of, duration,
/// stays, in-shelter percentage, active flag and (unless suppressed) label.
CommandResult cmd_metrics(const RunConfig& config, std::ostream& diag);

/// Era cohort selection, SAM labels, K-means baseline, accuracy, alpha sweep
/// and group statistics. Writes alpha_sweep.csv, group_stats.csv,
/// cluster_model.json and comparison.json.
CommandResult cmd_compare(const RunConfig& config, std::ostream& diag);

/// Writes percent_change.csv and occupancy_share.csv.
CommandResult cmd_timeline(const RunConfig& config, std::ostream& diag);

/// Writes records.csv and truth.csv from a scenario file.
CommandResult cmd_generate(const RunConfig& config, std::ostream& diag);

inline constexpr const char* kManifestFile = "manifest.json";

}  // namespace sam
