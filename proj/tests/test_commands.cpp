#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "sam/commands.hpp"
#include "sam/csv_io.hpp"
#include "sam/error.hpp"
#include "sam/synth.hpp"

using namespace sam;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("sam_test_" + name + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

fs::path demo_scenario() { return fs::path(SAM_SOURCE_DIR) / "data" / "demo_scenario.json"; }

// Generates the demo population once into `dir`.
fs::path generate_demo(const fs::path& dir) {
    RunConfig config;
    config.scenario = demo_scenario();
    config.output_dir = dir;
    std::ostringstream diag;
    cmd_generate(config, diag);
    return dir / "records.csv";
}

}  // namespace

TEST_CASE("metrics: April worked example") {
    TempDir tmp("metrics_april");
    write_text_file(tmp.path / "in.csv",
                    "client_id,date\nc1,2022-04-10\nc1,2022-04-11\nc1,2022-04-14\nc1,2022-04-22\n");
    RunConfig config;
    config.inputs = {tmp.path / "in.csv"};
    config.output_dir = tmp.path / "out";
    config.as_of = Date::from_ymd(2022, 4, 30);
    config.sam.active_threshold_days = 10;
    std::ostringstream diag;
    cmd_metrics(config, diag);

    auto lines = lines_of(read_file(tmp.path / "out" / "metrics.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "client_id,first_date,as_of,duration_days,stays,in_shelter_percent,active,label");
    CHECK(lines[1] == "c1,2022-04-10,2022-04-30,20,4,20.00,true,episodic");
    CHECK(fs::exists(tmp.path / "out" / kManifestFile));

    config.include_labels = false;
    cmd_metrics(config, diag);
    lines = lines_of(read_file(tmp.path / "out" / "metrics.csv"));
    CHECK(lines[1] == "c1,2022-04-10,2022-04-30,20,4,20.00,true");
}

TEST_CASE("metrics: empty input gives header-only output") {
    TempDir tmp("metrics_empty");
    write_text_file(tmp.path / "empty.csv", "client_id,date\n");
    RunConfig config;
    config.inputs = {tmp.path / "empty.csv"};
    config.output_dir = tmp.path;
    std::ostringstream diag;
    cmd_metrics(config, diag);
    CHECK(lines_of(read_file(tmp.path / "metrics.csv")).size() == 1);
}

TEST_CASE("metrics: one row per distinct client of a generated population") {
    TempDir tmp("metrics_synth");
    ScenarioSpec scenario;
    scenario.start = Date::from_ymd(2015, 1, 1);
    scenario.end = Date::from_ymd(2017, 7, 1);
    scenario.arrivals_per_quarter = 100;
    auto population = generate_population(scenario, default_archetypes());
    REQUIRE(population.truth.size() == 1000);
    write_text_file(tmp.path / "in.csv", render_records_csv(population.records));

    RunConfig config;
    config.inputs = {tmp.path / "in.csv"};
    config.output_dir = tmp.path;
    std::ostringstream diag;
    cmd_metrics(config, diag);
    auto lines = lines_of(read_file(tmp.path / "metrics.csv"));
    std::set<std::string> clients;
    for (std::size_t i = 1; i < lines.size(); ++i) clients.insert(split(lines[i])[0]);
    CHECK(lines.size() - 1 == population.truth.size());
    CHECK(clients.size() == population.truth.size());
}

TEST_CASE("ingest errors: strict mode, missing files, missing columns") {
    TempDir tmp("ingest_errors");
    write_text_file(tmp.path / "bad.csv", "client_id,date\nc1,2015-01-01\nc1,2015-13-02\n");
    RunConfig config;
    config.inputs = {tmp.path / "bad.csv"};
    config.output_dir = tmp.path;
    std::ostringstream diag;
    CHECK_NOTHROW(cmd_metrics(config, diag));
    CHECK(diag.str().find("bad.csv:3:") != std::string::npos);
    config.parse_mode = ParseMode::Strict;
    CHECK_THROWS_AS(cmd_metrics(config, diag), RecordError);

    config.inputs = {tmp.path / "missing.csv"};
    CHECK_THROWS_AS(cmd_metrics(config, diag), ConfigError);

    write_text_file(tmp.path / "cols.csv", "id,day\nc1,2015-01-01\n");
    config.inputs = {tmp.path / "cols.csv"};
    CHECK_THROWS_AS(cmd_metrics(config, diag), ConfigError);
}

TEST_CASE("generate: demo scenario round-trips through the other commands") {
    TempDir tmp("generate");
    auto records = generate_demo(tmp.path / "gen");
    CHECK(fs::exists(tmp.path / "gen" / "truth.csv"));
    CHECK(fs::exists(tmp.path / "gen" / kManifestFile));
    const auto first_run = read_file(records);

    generate_demo(tmp.path / "gen2");
    CHECK(read_file(tmp.path / "gen2" / "records.csv") == first_run);
    CHECK(read_file(tmp.path / "gen2" / "truth.csv") == read_file(tmp.path / "gen" / "truth.csv"));

    RunConfig config;
    config.inputs = {records};
    config.output_dir = tmp.path / "m";
    config.parse_mode = ParseMode::Strict;
    std::ostringstream diag;
    CHECK_NOTHROW(cmd_metrics(config, diag));
    CHECK(diag.str().find("malformed") == std::string::npos);
    config.output_dir = tmp.path / "t";
    CHECK_NOTHROW(cmd_timeline(config, diag));
    config.output_dir = tmp.path / "c";
    config.cluster.restarts = 5;
    CHECK_NOTHROW(cmd_compare(config, diag));
}

TEST_CASE("generate: seed override and validation errors") {
    TempDir tmp("generate_errors");
    RunConfig config;
    config.scenario = demo_scenario();
    config.scenario_seed = 7;
    config.output_dir = tmp.path / "a";
    std::ostringstream diag;
    cmd_generate(config, diag);
    auto manifest = nlohmann::json::parse(read_file(tmp.path / "a" / kManifestFile));
    CHECK(manifest["seed"] == 7);

    write_text_file(tmp.path / "bad.json", R"({"archetypes": [
        {"label": "transitional", "weight": 0.6, "stay_probability_per_day": 0.5, "mean_tenure_days": 5}]})");
    config.scenario = tmp.path / "bad.json";
    try {
        cmd_generate(config, diag);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("weight") != std::string::npos);
    }
}

TEST_CASE("compare: output contract, 19 sweep rows, determinism") {
    TempDir tmp("compare");
    auto records = generate_demo(tmp.path / "gen");
    RunConfig config;
    config.inputs = {records};
    config.cluster.seed = 11;
    config.cluster.restarts = 10;
    std::ostringstream diag;

    config.output_dir = tmp.path / "run1";
    auto result = cmd_compare(config, diag);
    CHECK(result.files.size() == 4);
    for (const auto& f : result.files) CHECK(fs::exists(config.output_dir / f));
    CHECK(fs::exists(config.output_dir / kManifestFile));

    auto sweep = lines_of(read_file(config.output_dir / "alpha_sweep.csv"));
    CHECK(sweep.size() == 20);
    CHECK(sweep[0] == "alpha_percent,accuracy_percent");
    CHECK(split(sweep[1])[0] == "5.00");
    CHECK(split(sweep[19])[0] == "95.00");

    auto stats = lines_of(read_file(config.output_dir / "group_stats.csv"));
    REQUIRE(stats.size() == 7);
    CHECK(stats[1].rfind("Transitional,cluster,", 0) == 0);
    CHECK(stats[2].rfind("Transitional,sam,", 0) == 0);
    CHECK(stats[6].rfind("Chronic,sam,", 0) == 0);

    auto comparison = nlohmann::json::parse(read_file(config.output_dir / "comparison.json"));
    CHECK(comparison["accuracy"].get<double>() >= 0.0);
    CHECK(comparison["accuracy"].get<double>() <= 1.0);
    CHECK(comparison["sweep"].size() == 19);

    config.output_dir = tmp.path / "run2";
    cmd_compare(config, diag);
    for (const auto& f : {"alpha_sweep.csv", "group_stats.csv", "cluster_model.json", "comparison.json"}) {
        CHECK(read_file(tmp.path / "run1" / f) == read_file(tmp.path / "run2" / f));
    }
}

TEST_CASE("compare: a cohort smaller than k is an error") {
    TempDir tmp("compare_small");
    write_text_file(tmp.path / "in.csv", "client_id,date\na,2015-01-01\nb,2015-02-01\n");
    RunConfig config;
    config.inputs = {tmp.path / "in.csv"};
    config.output_dir = tmp.path;
    std::ostringstream diag;
    CHECK_THROWS_AS(cmd_compare(config, diag), ConfigError);
}

TEST_CASE("timeline: single quarter, share sums, configuration errors") {
    TempDir tmp("timeline");
    write_text_file(tmp.path / "in.csv",
                    "client_id,date\na,2014-01-05\na,2014-01-06\nb,2014-02-01\nc,2014-03-30\n");
    RunConfig config;
    config.inputs = {tmp.path / "in.csv"};
    config.output_dir = tmp.path / "out";
    config.origin = Date::from_ymd(2014, 1, 1);
    std::ostringstream diag;
    cmd_timeline(config, diag);

    auto change = lines_of(read_file(tmp.path / "out" / "percent_change.csv"));
    REQUIRE(change.size() == 2);
    CHECK(change[0] == "quarter_start,transitional,episodic,chronic");
    CHECK(change[1] == "2014-01-01,0.00,,");  // only transitional clients present

    auto share = lines_of(read_file(tmp.path / "out" / "occupancy_share.csv"));
    REQUIRE(share.size() == 2);
    CHECK(share[1] == "2014-01-01,100.00,0.00,0.00,4");

    config.end = Date::from_ymd(2014, 1, 1);
    CHECK_THROWS_AS(cmd_timeline(config, diag), ConfigError);
    config.end.reset();
    config.origin = Date::from_ymd(2014, 2, 1);
    CHECK_THROWS_AS(cmd_timeline(config, diag), ConfigError);
}

TEST_CASE("timeline: occupancy share columns sum to 100 on a generated scenario") {
    TempDir tmp("timeline_shares");
    auto records = generate_demo(tmp.path / "gen");
    RunConfig config;
    config.inputs = {records};
    config.output_dir = tmp.path / "out";
    std::ostringstream diag;
    cmd_timeline(config, diag);
    auto share = lines_of(read_file(tmp.path / "out" / "occupancy_share.csv"));
    REQUIRE(share.size() > 30);
    for (std::size_t i = 1; i < share.size(); ++i) {
        auto cells = split(share[i]);
        REQUIRE(cells.size() == 5);
        if (cells[4] == "0") continue;
        const double sum = std::stod(cells[1]) + std::stod(cells[2]) + std::stod(cells[3]);
        CHECK(sum == doctest::Approx(100.0).epsilon(0.0002));  // 2-decimal rounding
    }
    auto change = lines_of(read_file(tmp.path / "out" / "percent_change.csv"));
    CHECK(change[1] == "2013-07-01,0.00,0.00,0.00");
}
