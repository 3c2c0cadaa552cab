#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sam/date.hpp"
#include "sam/ingest.hpp"
#include "sam/labels.hpp"

namespace sam {

/// Day-count distribution: 1 + NegativeBinomial(shape, mean - 1). shape = 1
/// gives a geometric draw; larger shapes concentrate around the mean.
struct DayCountModel {
    double mean_days = 1.0;
    int shape = 1;

    std::int32_t sample(std::mt19937_64& rng) const;
    /// `field` names the config path used in error messages.
    void validate(const std::string& field) const;
};

/// Alternating in-shelter episodes and absences. Without one, a client's
/// tenure is a single episode.
struct GapModel {
    DayCountModel episode_length{14.0, 2};
    DayCountModel gap_length{45.0, 2};
};

struct ArchetypeSpec {
    AccessLabel label = AccessLabel::Transitional;
    double weight = 0.0;
    /// Attendance probability on each day inside an episode. The first day of
    /// every episode is always attended.
    double stay_probability_per_day = 1.0;
    /// Span from first to last possible stay.
    double mean_tenure_days = 1.0;
    int tenure_shape = 1;
    std::optional<GapModel> gap_model;
};

struct ScenarioSpec {
    Date start = Date::from_ymd(2013, 7, 1);
    /// Exclusive; no stay is generated on or after this date.
    Date end = Date::from_ymd(2022, 4, 1);
    int arrivals_per_quarter = 100;
    EraConfig eras;
    /// Per-era weight multipliers; a missing entry means 1.
    std::map<Era, PerLabel<double>> era_modifiers;
    std::uint64_t seed = 1;
};

struct Population {
    /// Client-major, dates ascending within a client.
    std::vector<StayRecord> records;
    /// Generating archetype per client.
    std::map<std::string, AccessLabel> truth;
};

/// Throws ConfigError naming the offending field (e.g. `archetypes[1].weight`).
void validate_scenario(const ScenarioSpec& scenario, const std::vector<ArchetypeSpec>& archetypes);

/// Archetype weights in effect for `era`, renormalized to sum to 1.
PerLabel<double> effective_weights(const ScenarioSpec& scenario,
                                   const std::vector<ArchetypeSpec>& archetypes, Era era);

/// Deterministic for a given seed. Each client draws an arrival date uniformly
/// within its quarter, an archetype from the weights of the arrival era, then a
/// stay pattern from that archetype using a per-client sub-seed.
Population generate_population(const ScenarioSpec& scenario,
                               const std::vector<ArchetypeSpec>& archetypes);

/// One archetype's stay dates starting at `arrival`, clipped before `end`.
std::vector<Date> generate_stays(const ArchetypeSpec& archetype, Date arrival, Date end,
                                 std::uint64_t seed);

struct ScenarioFile {
    ScenarioSpec scenario;
    std::vector<ArchetypeSpec> archetypes;
};

/// Parses and validates a JSON scenario document. Errors name the field path.
ScenarioFile parse_scenario_json(const std::string& text);
ScenarioFile load_scenario_file(const std::string& path);

/// Chronic/episodic/transitional archetypes used by the demo scenario.
std::vector<ArchetypeSpec> default_archetypes();

}  // namespace sam
