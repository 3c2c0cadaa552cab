// sam: shelter access metrics, K-means baseline comparison and timelines.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sam/commands.hpp"
#include "sam/error.hpp"

namespace {

sam::Date parse_date_flag(const std::string& flag, const std::string& value) {
    auto parsed = sam::Date::parse(value);
    if (!parsed) {
        throw sam::ConfigError(flag + ": invalid date '" + value + "' (expected YYYY-MM-DD)");
    }
    return *parsed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shelter access metrics (duration, in-shelter percentage, active status), "
                 "cluster baseline comparison and quarterly timelines"};
    app.require_subcommand(1);
    app.fallthrough();

    sam::RunConfig config;
    std::string era = "housing-ready";
    std::string housing_ready_end = config.eras.housing_ready_end.to_string();
    std::string housing_first_end = config.eras.housing_first_end.to_string();
    std::string origin = config.origin.to_string();
    std::string end;
    std::string as_of;
    std::string output_dir = ".";
    bool no_labels = false;
    bool strict = false;
    bool no_standardize = false;
    std::uint64_t seed = 0;

    app.add_option("--alpha", config.sam.alpha_percent, "Chronic threshold on in-shelter percentage")
        ->capture_default_str();
    app.add_option("--active-threshold", config.sam.active_threshold_days,
                   "Days since last access below which a client is active")
        ->capture_default_str();
    app.add_option("--horizon", config.sam.evaluation_horizon_days,
                   "Days after first access at which labels are assigned")
        ->capture_default_str();
    auto* seed_option = app.add_option("--seed", seed, "Random seed (k-means, generator)")
                            ->capture_default_str();
    app.add_option("--era", era, "Cohort era for compare: housing-ready, housing-first, covid-19")
        ->capture_default_str();
    app.add_option("--housing-ready-end", housing_ready_end, "First day of the Housing First era")
        ->capture_default_str();
    app.add_option("--housing-first-end", housing_first_end, "First day of the COVID-19 era")
        ->capture_default_str();
    app.add_option("--origin", origin, "Timeline start (first day of a quarter)")
        ->capture_default_str();
    app.add_option("--end", end, "Timeline end, exclusive (default: day after the last stay)");
    app.add_option("--output-dir,-o", output_dir, "Directory for output files")
        ->capture_default_str();
    app.add_flag("--no-labels", no_labels, "Omit the label column from metrics output");
    app.add_flag("--strict", strict, "Treat any malformed input row as fatal");
    app.add_option("--k", config.cluster.k, "Number of clusters")->capture_default_str();
    app.add_option("--restarts", config.cluster.restarts, "k-means restarts")
        ->capture_default_str();
    app.add_flag("--no-standardize", no_standardize, "Cluster on raw (unscaled) features");

    std::vector<std::string> inputs;
    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("inputs", inputs, "Stay record CSV file(s) with client_id,date columns")
            ->required();
    };

    auto* metrics = app.add_subcommand("metrics", "Per-client SAM metrics");
    add_inputs(metrics);
    metrics->add_option("--as-of", as_of, "Snapshot date (default: first stay + horizon)");
    auto* compare = app.add_subcommand("compare", "SAM vs K-means comparison on an era cohort");
    add_inputs(compare);
    auto* timeline = app.add_subcommand("timeline", "Quarterly percent change and occupancy share");
    add_inputs(timeline);
    auto* generate = app.add_subcommand("generate", "Synthetic population from a scenario file");
    std::string scenario;
    generate->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        config.eras.housing_ready_end = parse_date_flag("--housing-ready-end", housing_ready_end);
        config.eras.housing_first_end = parse_date_flag("--housing-first-end", housing_first_end);
        config.origin = parse_date_flag("--origin", origin);
        if (!end.empty()) config.end = parse_date_flag("--end", end);
        if (!as_of.empty()) config.as_of = parse_date_flag("--as-of", as_of);
        config.era = sam::parse_era(era);
        config.output_dir = output_dir;
        config.include_labels = !no_labels;
        config.parse_mode = strict ? sam::ParseMode::Strict : sam::ParseMode::Lenient;
        config.cluster.standardize = !no_standardize;
        config.cluster.seed = seed;
        if (seed_option->count() > 0) config.scenario_seed = seed;
        for (const auto& input : inputs) config.inputs.emplace_back(input);
        config.scenario = scenario;

        if (*metrics) sam::cmd_metrics(config, std::cerr);
        if (*compare) sam::cmd_compare(config, std::cerr);
        if (*timeline) sam::cmd_timeline(config, std::cerr);
        if (*generate) sam::cmd_generate(config, std::cerr);
    } catch (const sam::RecordError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sam::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
