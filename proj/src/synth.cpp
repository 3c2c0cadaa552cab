#include "sam/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sam/error.hpp"

namespace sam {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw ConfigError("scenario field '" + field + "': " + message);
}

std::vector<double> archetype_weights(const ScenarioSpec& scenario,
                                      const std::vector<ArchetypeSpec>& archetypes, Era era) {
    std::vector<double> weights;
    auto modifiers = scenario.era_modifiers.find(era);
    double total = 0.0;
    for (const auto& archetype : archetypes) {
        double w = archetype.weight;
        if (modifiers != scenario.era_modifiers.end()) {
            w *= modifiers->second[index_of(archetype.label)];
        }
        weights.push_back(w);
        total += w;
    }
    if (!(total > 0.0)) {
        field_error("era_modifiers." + std::string(to_string(era)),
                    "modified archetype weights sum to zero");
    }
    for (auto& w : weights) w /= total;
    return weights;
}

std::string client_name(std::size_t index) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "c%07zu", index + 1);
    return buffer;
}

// JSON helpers: every accessor reports the dotted field path on failure.

void reject_unknown(const json& object, const std::string& path,
                    std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            field_error(path.empty() ? key : path + "." + key, "unknown field");
        }
    }
}

const json& require_object(const json& value, const std::string& path) {
    if (!value.is_object()) field_error(path, "expected an object");
    return value;
}

double get_number(const json& value, const std::string& path) {
    if (!value.is_number()) field_error(path, "expected a number");
    return value.get<double>();
}

int get_int(const json& value, const std::string& path) {
    if (!value.is_number_integer()) field_error(path, "expected an integer");
    return value.get<int>();
}

Date get_date(const json& value, const std::string& path) {
    if (!value.is_string()) field_error(path, "expected an ISO date string");
    auto parsed = Date::parse(value.get<std::string>());
    if (!parsed) field_error(path, "invalid date '" + value.get<std::string>() + "'");
    return *parsed;
}

DayCountModel parse_day_count(const json& value, const std::string& path) {
    require_object(value, path);
    reject_unknown(value, path, {"mean_days", "shape"});
    DayCountModel model;
    if (!value.contains("mean_days")) field_error(path + ".mean_days", "required");
    model.mean_days = get_number(value["mean_days"], path + ".mean_days");
    if (value.contains("shape")) model.shape = get_int(value["shape"], path + ".shape");
    return model;
}

ArchetypeSpec parse_archetype(const json& value, const std::string& path) {
    require_object(value, path);
    reject_unknown(value, path,
                   {"label", "weight", "stay_probability_per_day", "mean_tenure_days",
                    "tenure_shape", "gap_model"});
    ArchetypeSpec spec;
    for (const char* key : {"label", "weight", "stay_probability_per_day", "mean_tenure_days"}) {
        if (!value.contains(key)) field_error(path + "." + key, "required");
    }
    if (!value["label"].is_string()) field_error(path + ".label", "expected a string");
    auto label = parse_label(value["label"].get<std::string>());
    if (!label) {
        field_error(path + ".label", "unknown label '" + value["label"].get<std::string>() + "'");
    }
    spec.label = *label;
    spec.weight = get_number(value["weight"], path + ".weight");
    spec.stay_probability_per_day =
        get_number(value["stay_probability_per_day"], path + ".stay_probability_per_day");
    spec.mean_tenure_days = get_number(value["mean_tenure_days"], path + ".mean_tenure_days");
    if (value.contains("tenure_shape")) {
        spec.tenure_shape = get_int(value["tenure_shape"], path + ".tenure_shape");
    }
    if (value.contains("gap_model") && !value["gap_model"].is_null()) {
        const auto& gap = require_object(value["gap_model"], path + ".gap_model");
        reject_unknown(gap, path + ".gap_model", {"episode_length", "gap_length"});
        GapModel model;
        if (gap.contains("episode_length")) {
            model.episode_length =
                parse_day_count(gap["episode_length"], path + ".gap_model.episode_length");
        }
        if (gap.contains("gap_length")) {
            model.gap_length = parse_day_count(gap["gap_length"], path + ".gap_model.gap_length");
        }
        spec.gap_model = model;
    }
    return spec;
}

}  // namespace

std::int32_t DayCountModel::sample(std::mt19937_64& rng) const {
    const double excess = mean_days - 1.0;
    if (excess <= 0.0) return 1;
    const double p = shape / (shape + excess);
    std::negative_binomial_distribution<std::int32_t> draw(shape, p);
    return 1 + draw(rng);
}

void DayCountModel::validate(const std::string& field) const {
    if (!(std::isfinite(mean_days) && mean_days >= 1.0)) {
        field_error(field + ".mean_days", "must be a finite number >= 1");
    }
    if (shape < 1) field_error(field + ".shape", "must be a positive integer");
}

void validate_scenario(const ScenarioSpec& scenario,
                       const std::vector<ArchetypeSpec>& archetypes) {
    if (!(scenario.start < scenario.end)) field_error("start", "must precede end");
    if (scenario.arrivals_per_quarter <= 0) {
        field_error("arrivals_per_quarter", "must be positive");
    }
    try {
        scenario.eras.validate();
    } catch (const ConfigError& e) {
        field_error("housing_ready_end", e.what());
    }
    if (archetypes.empty()) field_error("archetypes", "at least one archetype is required");

    double total = 0.0;
    for (std::size_t i = 0; i < archetypes.size(); ++i) {
        const auto& a = archetypes[i];
        const std::string path = "archetypes[" + std::to_string(i) + "]";
        if (!(a.weight >= 0.0 && a.weight <= 1.0)) field_error(path + ".weight", "must lie in [0, 1]");
        if (!(a.stay_probability_per_day > 0.0 && a.stay_probability_per_day <= 1.0)) {
            field_error(path + ".stay_probability_per_day", "must lie in (0, 1]");
        }
        DayCountModel{a.mean_tenure_days, a.tenure_shape}.validate(path + ".tenure");
        if (a.gap_model) {
            a.gap_model->episode_length.validate(path + ".gap_model.episode_length");
            a.gap_model->gap_length.validate(path + ".gap_model.gap_length");
        }
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream message;
        message << "weights sum to " << total << ", expected 1";
        field_error("archetypes[*].weight", message.str());
    }

    for (const auto& [era, multipliers] : scenario.era_modifiers) {
        for (auto label : kAllLabels) {
            if (!(multipliers[index_of(label)] >= 0.0 && std::isfinite(multipliers[index_of(label)]))) {
                field_error("era_modifiers." + std::string(to_string(era)) + "." +
                                std::string(to_string(label)),
                            "multiplier must be a finite non-negative number");
            }
        }
    }
    for (auto era : {Era::HousingReady, Era::HousingFirst, Era::Covid19}) {
        archetype_weights(scenario, archetypes, era);
    }
}

PerLabel<double> effective_weights(const ScenarioSpec& scenario,
                                   const std::vector<ArchetypeSpec>& archetypes, Era era) {
    auto weights = archetype_weights(scenario, archetypes, era);
    PerLabel<double> by_label{};
    for (std::size_t i = 0; i < archetypes.size(); ++i) {
        by_label[index_of(archetypes[i].label)] += weights[i];
    }
    return by_label;
}

std::vector<Date> generate_stays(const ArchetypeSpec& archetype, Date arrival, Date end,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution attend(archetype.stay_probability_per_day);

    const std::int32_t tenure = DayCountModel{archetype.mean_tenure_days, archetype.tenure_shape}.sample(rng);
    const Date last_allowed = std::min(arrival + (tenure - 1), end - 1);

    std::vector<Date> dates;
    if (last_allowed < arrival) return dates;
    dates.push_back(arrival);

    Date episode_last =
        archetype.gap_model ? arrival + (archetype.gap_model->episode_length.sample(rng) - 1)
                            : last_allowed;
    Date day = arrival + 1;
    while (day <= last_allowed) {
        if (day <= episode_last) {
            if (attend(rng)) dates.push_back(day);
            ++day;
            continue;
        }
        // Absence, then a new episode opening with an attended day.
        day = episode_last + 1 + archetype.gap_model->gap_length.sample(rng);
        if (day > last_allowed) break;
        dates.push_back(day);
        episode_last = day + (archetype.gap_model->episode_length.sample(rng) - 1);
        ++day;
    }
    return dates;
}

Population generate_population(const ScenarioSpec& scenario,
                               const std::vector<ArchetypeSpec>& archetypes) {
    validate_scenario(scenario, archetypes);

    std::map<Era, std::discrete_distribution<std::size_t>> pickers;
    for (auto era : {Era::HousingReady, Era::HousingFirst, Era::Covid19}) {
        auto weights = archetype_weights(scenario, archetypes, era);
        pickers.emplace(era, std::discrete_distribution<std::size_t>(weights.begin(), weights.end()));
    }

    std::mt19937_64 rng(splitmix64(scenario.seed));
    Population population;
    std::size_t client_index = 0;
    for (Date quarter = scenario.start.quarter_start(); quarter < scenario.end;
         quarter = quarter.next_quarter_start()) {
        const Date window_start = std::max(quarter, scenario.start);
        const Date window_end = std::min(quarter.next_quarter_start(), scenario.end);
        std::uniform_int_distribution<std::int32_t> offset(0, (window_end - window_start) - 1);

        for (int i = 0; i < scenario.arrivals_per_quarter; ++i) {
            const Date arrival = window_start + offset(rng);
            const auto& archetype = archetypes[pickers.at(scenario.eras.era_of(arrival))(rng)];
            const std::uint64_t client_seed =
                splitmix64(scenario.seed ^ splitmix64(0x5eed0000ULL + client_index));
            auto id = client_name(client_index++);
            for (Date d : generate_stays(archetype, arrival, scenario.end, client_seed)) {
                population.records.push_back({id, d});
            }
            population.truth.emplace(std::move(id), archetype.label);
        }
    }
    return population;
}

std::vector<ArchetypeSpec> default_archetypes() {
    ArchetypeSpec transitional;
    transitional.label = AccessLabel::Transitional;
    transitional.weight = 0.80;
    transitional.stay_probability_per_day = 0.7;
    transitional.mean_tenure_days = 10.0;
    transitional.tenure_shape = 1;

    ArchetypeSpec episodic;
    episodic.label = AccessLabel::Episodic;
    episodic.weight = 0.14;
    episodic.stay_probability_per_day = 0.6;
    episodic.mean_tenure_days = 700.0;
    episodic.tenure_shape = 2;
    episodic.gap_model = GapModel{{12.0, 2}, {35.0, 6}};

    ArchetypeSpec chronic;
    chronic.label = AccessLabel::Chronic;
    chronic.weight = 0.06;
    chronic.stay_probability_per_day = 0.95;
    chronic.mean_tenure_days = 900.0;
    chronic.tenure_shape = 4;

    return {transitional, episodic, chronic};
}

ScenarioFile parse_scenario_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    require_object(doc, "<root>");
    reject_unknown(doc, "",
                   {"start", "end", "arrivals_per_quarter", "seed", "housing_ready_end",
                    "housing_first_end", "era_modifiers", "archetypes"});

    ScenarioFile file;
    auto& s = file.scenario;
    if (doc.contains("start")) s.start = get_date(doc["start"], "start");
    if (doc.contains("end")) s.end = get_date(doc["end"], "end");
    if (doc.contains("arrivals_per_quarter")) {
        s.arrivals_per_quarter = get_int(doc["arrivals_per_quarter"], "arrivals_per_quarter");
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) field_error("seed", "expected a non-negative integer");
        s.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("housing_ready_end")) {
        s.eras.housing_ready_end = get_date(doc["housing_ready_end"], "housing_ready_end");
    }
    if (doc.contains("housing_first_end")) {
        s.eras.housing_first_end = get_date(doc["housing_first_end"], "housing_first_end");
    }
    if (doc.contains("era_modifiers")) {
        const auto& mods = require_object(doc["era_modifiers"], "era_modifiers");
        for (const auto& [era_name, entry] : mods.items()) {
            const std::string path = "era_modifiers." + era_name;
            Era era;
            try {
                era = parse_era(era_name);
            } catch (const ConfigError&) {
                field_error(path, "unknown era");
            }
            require_object(entry, path);
            PerLabel<double> multipliers{1.0, 1.0, 1.0};
            for (const auto& [label_name, value] : entry.items()) {
                auto label = parse_label(label_name);
                if (!label) field_error(path + "." + label_name, "unknown label");
                multipliers[index_of(*label)] = get_number(value, path + "." + label_name);
            }
            s.era_modifiers[era] = multipliers;
        }
    }
    if (doc.contains("archetypes")) {
        if (!doc["archetypes"].is_array()) field_error("archetypes", "expected an array");
        for (std::size_t i = 0; i < doc["archetypes"].size(); ++i) {
            file.archetypes.push_back(
                parse_archetype(doc["archetypes"][i], "archetypes[" + std::to_string(i) + "]"));
        }
    } else {
        file.archetypes = default_archetypes();
    }
    validate_scenario(file.scenario, file.archetypes);
    return file;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_json(buffer.str());
}

}  // namespace sam
