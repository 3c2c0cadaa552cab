#include "sam/commands.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "sam/csv_io.hpp"
#include "sam/episodes.hpp"
#include "sam/error.hpp"
#include "sam/evaluation.hpp"
#include "sam/synth.hpp"

namespace sam {

namespace {

using nlohmann::ordered_json;

constexpr const char* kToolVersion = "1.0.0";

ordered_json config_json(const RunConfig& config) {
    ordered_json inputs = ordered_json::array();
    for (const auto& p : config.inputs) inputs.push_back(p.generic_string());
    return {
        {"inputs", inputs},
        {"parse_mode", config.parse_mode == ParseMode::Strict ? "strict" : "lenient"},
        {"sam",
         {{"alpha_percent", config.sam.alpha_percent},
          {"active_threshold_days", config.sam.active_threshold_days},
          {"evaluation_horizon_days", config.sam.evaluation_horizon_days}}},
        {"cluster",
         {{"k", config.cluster.k},
          {"seed", config.cluster.seed},
          {"restarts", config.cluster.restarts},
          {"max_iterations", config.cluster.max_iterations},
          {"convergence_tolerance", config.cluster.convergence_tolerance},
          {"standardize", config.cluster.standardize}}},
        {"eras",
         {{"housing_ready_end", config.eras.housing_ready_end.to_string()},
          {"housing_first_end", config.eras.housing_first_end.to_string()},
          {"selected", to_string(config.era)}}},
        {"timeline",
         {{"origin", config.origin.to_string()},
          {"end", config.end ? ordered_json(config.end->to_string()) : ordered_json(nullptr)}}},
        {"as_of", config.as_of ? ordered_json(config.as_of->to_string()) : ordered_json(nullptr)},
        {"include_labels", config.include_labels},
    };
}

ordered_json ingest_json(const IngestSummary& s) {
    return {{"rows_read", s.rows_read},
            {"records", s.records},
            {"diagnostics", s.diagnostics},
            {"clients", s.clients},
            {"unique_client_days", s.unique_client_days},
            {"duplicates_collapsed", s.records - s.unique_client_days}};
}

void write_manifest(const RunConfig& config, const std::string& command, ordered_json extra,
                    const CommandResult& result) {
    ordered_json manifest = {{"tool", "sam"},
                             {"version", kToolVersion},
                             {"command", command},
                             {"config", config_json(config)}};
    for (auto& [key, value] : extra.items()) manifest[key] = value;
    manifest["outputs"] = result.files;
    write_text_file(config.output_dir / kManifestFile, manifest.dump(2) + "\n");
}

LoadedInput load(const RunConfig& config, std::ostream& diag) {
    auto loaded = load_timelines(config.inputs, config.parse_mode, diag);
    const auto& s = loaded.summary;
    diag << "ingest: " << s.rows_read << " rows, " << s.records << " records, "
         << s.unique_client_days << " unique client-days, " << s.clients << " clients";
    if (s.diagnostics) diag << ", " << s.diagnostics << " malformed rows skipped";
    diag << "\n";
    return loaded;
}

std::string_view title_case(AccessLabel label) {
    switch (label) {
        case AccessLabel::Transitional: return "Transitional";
        case AccessLabel::Episodic: return "Episodic";
        case AccessLabel::Chronic: return "Chronic";
    }
    return "?";
}

ordered_json stats_json(const GroupStats& g, std::size_t cohort) {
    auto feature = [](const std::optional<FeatureStats>& f) {
        if (!f) return ordered_json(nullptr);
        return ordered_json{
            {"mean", f->mean}, {"median", f->median}, {"upper_decile", f->upper_decile}};
    };
    return {{"label", to_string(g.label)},
            {"n", g.n},
            {"cohort_size", cohort},
            {"share_percent", g.share_percent},
            {"stays", feature(g.stays)},
            {"episodes", feature(g.episodes)}};
}

void append_stats_row(std::string& csv, const GroupStats& g, std::string_view source,
                      std::size_t cohort) {
    csv += std::string(title_case(g.label)) + "," + std::string(source) + "," +
           std::to_string(g.n) + "," + std::to_string(cohort) + "," +
           format_fixed2(g.share_percent);
    for (const auto* f : {&g.stays, &g.episodes}) {
        if (*f) {
            csv += "," + format_fixed2((*f)->mean) + "," + std::to_string((*f)->median) + "," +
                   std::to_string((*f)->upper_decile);
        } else {
            csv += ",,,";
        }
    }
    csv += "\n";
}

Date default_end(const std::vector<ClientTimeline>& timelines, Date origin) {
    std::optional<Date> last;
    for (const auto& t : timelines) {
        if (!last || *last < t.last_date()) last = t.last_date();
    }
    if (!last || *last < origin) return origin.next_quarter_start();
    return *last + 1;
}

}  // namespace

void RunConfig::validate(bool needs_inputs) const {
    sam.validate();
    cluster.validate();
    eras.validate();
    if (needs_inputs) {
        if (inputs.empty()) throw ConfigError("no input files given");
        for (const auto& p : inputs) {
            if (!std::filesystem::exists(p)) {
                throw ConfigError("input file '" + p.string() + "' does not exist");
            }
        }
    }
    if (end && !(origin < *end)) {
        throw ConfigError("--origin " + origin.to_string() + " must precede --end " +
                          end->to_string());
    }
}

CommandResult cmd_metrics(const RunConfig& config, std::ostream& diag) {
    config.validate(true);
    auto loaded = load(config, diag);

    std::string csv = "client_id,first_date,as_of,duration_days,stays,in_shelter_percent,active";
    csv += config.include_labels ? ",label\n" : "\n";
    std::size_t skipped = 0;
    for (const auto& timeline : loaded.timelines) {
        const Date as_of =
            config.as_of ? *config.as_of
                         : timeline.first_date() + config.sam.evaluation_horizon_days;
        if (as_of < timeline.first_date()) {
            ++skipped;
            continue;
        }
        const auto m = compute_sam_metrics(timeline, as_of, config.sam);
        csv += timeline.client_id + "," + timeline.first_date().to_string() + "," +
               as_of.to_string() + "," + std::to_string(m.duration_days) + "," +
               std::to_string(m.stays_in_window) + "," + format_fixed2(m.in_shelter_percent) +
               "," + (m.active ? "true" : "false");
        if (config.include_labels) {
            csv += ",";
            csv += to_string(classify(m, config.sam));
        }
        csv += "\n";
    }
    if (skipped) diag << "metrics: " << skipped << " clients first seen after --as-of omitted\n";

    CommandResult result{{"metrics.csv"}};
    write_text_file(config.output_dir / "metrics.csv", csv);
    write_manifest(config, "metrics", {{"ingest", ingest_json(loaded.summary)}}, result);
    return result;
}

CommandResult cmd_compare(const RunConfig& config, std::ostream& diag) {
    config.validate(true);
    auto loaded = load(config, diag);

    const auto cohort = select_era_cohort(loaded.timelines, config.era, config.eras);
    diag << "compare: " << cohort.size() << " of " << loaded.timelines.size()
         << " clients lie entirely inside the " << to_string(config.era) << " era\n";
    if (cohort.size() < static_cast<std::size_t>(config.cluster.k)) {
        throw ConfigError("era cohort has " + std::to_string(cohort.size()) +
                          " clients, fewer than k = " + std::to_string(config.cluster.k));
    }

    std::vector<EpisodeSummary> features;
    features.reserve(cohort.size());
    for (const auto& t : cohort) features.push_back(count_episodes(t));

    const auto model = map_clusters_to_labels(fit_kmeans(std::span<const EpisodeSummary>(features), config.cluster));
    const auto cluster_labels = label_with_clusters(model);
    const auto sam_labels = label_with_sam(cohort, config.sam);
    const double agreement = accuracy(cluster_labels, sam_labels);
    const auto sweep = sweep_alpha(cohort, cluster_labels, default_alpha_grid(), config.sam);
    const auto cluster_stats = group_stats(cluster_labels, features);
    const auto sam_stats = group_stats(sam_labels, features);

    // alpha_sweep.csv
    std::string sweep_csv = "alpha_percent,accuracy_percent\n";
    for (const auto& p : sweep.points) {
        sweep_csv += format_fixed2(p.alpha_percent) + "," + format_fixed2(100.0 * p.accuracy) + "\n";
    }

    // group_stats.csv, rows in Table 1 order.
    std::string stats_csv =
        "group,source,n,cohort_size,share_percent,stays_mean,stays_median,stays_upper_decile,"
        "episodes_mean,episodes_median,episodes_upper_decile\n";
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        append_stats_row(stats_csv, cluster_stats[i], "cluster", cohort.size());
        append_stats_row(stats_csv, sam_stats[i], "sam", cohort.size());
    }

    // cluster_model.json
    ordered_json clusters = ordered_json::array();
    for (std::size_t c = 0; c < model.centroids.size(); ++c) {
        clusters.push_back({{"index", c},
                            {"label", to_string(model.label_map[c])},
                            {"size", model.sizes[c]},
                            {"centroid",
                             {{"stays", model.centroids[c][0]},
                              {"episodes", model.centroids[c][1]}}}});
    }
    ordered_json model_json = {{"k", model.k},
                               {"seed", config.cluster.seed},
                               {"standardized", model.standardized},
                               {"wcss", model.wcss},
                               {"iterations", model.iterations},
                               {"clusters", clusters}};

    // comparison.json
    PerLabel<std::size_t> label_total{};
    PerLabel<std::size_t> label_agree{};
    for (const auto& [client, truth] : cluster_labels.labels) {
        ++label_total[index_of(truth)];
        if (sam_labels.labels.at(client) == truth) ++label_agree[index_of(truth)];
    }
    ordered_json per_label = ordered_json::object();
    for (auto label : kAllLabels) {
        const auto n = label_total[index_of(label)];
        per_label[std::string(to_string(label))] = {
            {"cluster_n", n},
            {"agree", label_agree[index_of(label)]},
            {"recall", n ? ordered_json(static_cast<double>(label_agree[index_of(label)]) / n)
                         : ordered_json(nullptr)}};
    }
    ordered_json sweep_json = ordered_json::array();
    for (const auto& p : sweep.points) {
        sweep_json.push_back({{"alpha_percent", p.alpha_percent}, {"accuracy", p.accuracy}});
    }
    ordered_json stats_json_rows = ordered_json::array();
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        auto row_c = stats_json(cluster_stats[i], cohort.size());
        row_c["source"] = "cluster";
        auto row_s = stats_json(sam_stats[i], cohort.size());
        row_s["source"] = "sam";
        stats_json_rows.push_back(row_c);
        stats_json_rows.push_back(row_s);
    }
    ordered_json comparison = {
        {"era", to_string(config.era)},
        {"cohort_size", cohort.size()},
        {"clients_total", loaded.timelines.size()},
        {"alpha_percent", config.sam.alpha_percent},
        {"accuracy", agreement},
        {"best_alpha_percent", sweep.best().alpha_percent},
        {"best_accuracy", sweep.best().accuracy},
        {"sweep", sweep_json},
        {"per_label_agreement", per_label},
        {"group_stats", stats_json_rows},
        {"statistics_method",
         {{"median", "lower central value for even-sized groups"},
          {"upper_decile", "nearest-rank 90th percentile, rank ceil(0.9 n)"}}},
    };

    diag << "compare: accuracy " << format_fixed2(100.0 * agreement) << "% at alpha "
         << format_fixed2(config.sam.alpha_percent) << "; best alpha "
         << format_fixed2(sweep.best().alpha_percent) << " ("
         << format_fixed2(100.0 * sweep.best().accuracy) << "%)\n";

    CommandResult result{{"alpha_sweep.csv", "group_stats.csv", "cluster_model.json", "comparison.json"}};
    write_text_file(config.output_dir / "alpha_sweep.csv", sweep_csv);
    write_text_file(config.output_dir / "group_stats.csv", stats_csv);
    write_text_file(config.output_dir / "cluster_model.json", model_json.dump(2) + "\n");
    write_text_file(config.output_dir / "comparison.json", comparison.dump(2) + "\n");
    write_manifest(config, "compare",
                   {{"ingest", ingest_json(loaded.summary)}, {"seed", config.cluster.seed}},
                   result);
    return result;
}

CommandResult cmd_timeline(const RunConfig& config, std::ostream& diag) {
    config.validate(true);
    auto loaded = load(config, diag);
    const Date end = config.end ? *config.end : default_end(loaded.timelines, config.origin);
    if (!(config.origin < end)) {
        throw ConfigError("timeline origin " + config.origin.to_string() + " must precede end " +
                          end.to_string());
    }

    std::optional<Date> last_stay;
    for (const auto& t : loaded.timelines) {
        if (!last_stay || *last_stay < t.last_date()) last_stay = t.last_date();
    }
    // Clients first seen on or after this date are labelled before their
    // evaluation horizon has been fully observed.
    const std::optional<Date> complete_before =
        last_stay ? std::optional<Date>(*last_stay + 1 - config.sam.evaluation_horizon_days)
                  : std::nullopt;
    if (complete_before && *complete_before < end) {
        diag << "timeline: clients first seen on or after " << complete_before->to_string()
             << " have less than " << config.sam.evaluation_horizon_days
             << " days of data; their labels lean transitional\n";
    }

    const auto labels = label_with_sam(loaded.timelines, config.sam);
    const auto series = build_timeline(loaded.timelines, labels, config.origin, end);
    const auto change = percent_change(series);

    std::string change_csv = "quarter_start,transitional,episodic,chronic\n";
    std::string share_csv = "quarter_start,transitional,episodic,chronic,total_stay_days\n";
    for (std::size_t b = 0; b < series.bins.size(); ++b) {
        const auto& bin = series.bins[b];
        change_csv += bin.start.to_string();
        for (auto label : kAllLabels) {
            const auto& values = change[index_of(label)];
            change_csv += ",";
            if (values) change_csv += format_fixed2((*values)[b]);
        }
        change_csv += "\n";

        share_csv += bin.start.to_string();
        const auto shares = bin.occupancy_shares();
        for (auto label : kAllLabels) {
            share_csv += ",";
            if (shares) share_csv += format_fixed2((*shares)[index_of(label)]);
        }
        share_csv += "," + std::to_string(bin.total_stay_days) + "\n";
    }
    for (auto label : kAllLabels) {
        if (!change[index_of(label)]) {
            diag << "timeline: no " << to_string(label)
                 << " clients in the first bin; percent change undefined\n";
        }
    }

    CommandResult result{{"percent_change.csv", "occupancy_share.csv"}};
    write_text_file(config.output_dir / "percent_change.csv", change_csv);
    write_text_file(config.output_dir / "occupancy_share.csv", share_csv);
    write_manifest(config, "timeline",
                   {{"ingest", ingest_json(loaded.summary)},
                    {"effective_end", end.to_string()},
                    {"horizon_complete_before",
                     complete_before ? ordered_json(complete_before->to_string())
                                     : ordered_json(nullptr)},
                    {"bins", series.bins.size()}},
                   result);
    return result;
}

CommandResult cmd_generate(const RunConfig& config, std::ostream& diag) {
    config.validate(false);
    if (config.scenario.empty()) throw ConfigError("generate requires a scenario file");
    auto file = load_scenario_file(config.scenario.string());
    if (config.scenario_seed) file.scenario.seed = *config.scenario_seed;

    const auto population = generate_population(file.scenario, file.archetypes);

    std::string truth_csv = "client_id,label\n";
    for (const auto& [client, label] : population.truth) {
        truth_csv += client + "," + std::string(to_string(label)) + "\n";
    }
    diag << "generate: " << population.truth.size() << " clients, "
         << population.records.size() << " records\n";

    CommandResult result{{"records.csv", "truth.csv"}};
    write_text_file(config.output_dir / "records.csv", render_records_csv(population.records));
    write_text_file(config.output_dir / "truth.csv", truth_csv);
    write_manifest(config, "generate",
                   {{"scenario", config.scenario.generic_string()},
                    {"seed", file.scenario.seed},
                    {"clients", population.truth.size()},
                    {"records", population.records.size()}},
                   result);
    return result;
}

}  // namespace sam
