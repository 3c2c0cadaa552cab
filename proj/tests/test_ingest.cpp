#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sam/error.hpp"
#include "sam/ingest.hpp"

using namespace sam;

namespace {

ParseResult parse(const std::string& text, ParseMode mode = ParseMode::Lenient) {
    std::istringstream in(text);
    return parse_records(in, mode);
}

Date ymd(int y, unsigned m, unsigned d) { return Date::from_ymd(y, m, d); }

}  // namespace

TEST_CASE("a well-formed row maps directly to a record") {
    auto result = parse("client_id,date\nc1,2015-03-02\n");
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0] == StayRecord{"c1", ymd(2015, 3, 2)});
    CHECK(result.diagnostics.empty());
}

TEST_CASE("an invalid month is a record error carrying its line number") {
    try {
        parse("client_id,date\nc1,2015-01-02\nc1,2015-13-02\n", ParseMode::Strict);
        FAIL("expected RecordError");
    } catch (const RecordError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("lenient mode skips malformed rows with diagnostics") {
    // Five data rows, one malformed.
    auto result = parse(
        "client_id,date\n"
        "a,2015-01-01\n"
        "b,2015-01-02\n"
        "c,2015-02-31\n"
        "d,2015-01-04\n"
        "e,2015-01-05\n");
    CHECK(result.records.size() == 4);
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].line == 4);
    CHECK(result.rows_read == 5);
}

TEST_CASE("row order is preserved; extra columns, CRLF, quotes and column order are tolerated") {
    auto result = parse("date,site,client_id\r\n2015-01-09,x,\"z\"\r\n2015-01-01,y,a\r\n\r\n");
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0] == StayRecord{"z", ymd(2015, 1, 9)});
    CHECK(result.records[1] == StayRecord{"a", ymd(2015, 1, 1)});
}

TEST_CASE("empty client ids and short rows are record errors") {
    auto result = parse("client_id,date\n,2015-01-01\nonlyone\n");
    CHECK(result.records.empty());
    CHECK(result.diagnostics.size() == 2);
    CHECK_THROWS_AS(parse("client_id,date\n,2015-01-01\n", ParseMode::Strict), RecordError);
}

TEST_CASE("a missing column is a fatal configuration error") {
    CHECK_THROWS_AS(parse("client,date\nc1,2015-01-01\n"), ConfigError);
    CHECK_THROWS_AS(parse("client_id\nc1\n"), ConfigError);
    // Zero-byte input has no records and no error.
    CHECK(parse("").records.empty());
}

TEST_CASE("build_timelines collapses duplicates and sorts") {
    std::vector<StayRecord> records{
        {"c1", ymd(2022, 4, 10)}, {"c1", ymd(2022, 4, 10)}, {"c1", ymd(2022, 4, 14)}};
    auto timelines = build_timelines(records);
    REQUIRE(timelines.size() == 1);
    CHECK(timelines[0].dates == std::vector<Date>{ymd(2022, 4, 10), ymd(2022, 4, 14)});
    CHECK(build_timelines({}).empty());
}

TEST_CASE("build_timelines matches the nested-loop oracle on random records") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> client(0, 9);
    std::uniform_int_distribution<int> day(0, 200);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<StayRecord> records;
        for (int i = 0; i < 1000; ++i) {
            records.push_back({"c" + std::to_string(client(rng)), ymd(2016, 1, 1) + day(rng)});
        }
        auto timelines = build_timelines(records);
        CHECK(timelines == oracle::group_unique_sort(records));

        // Sum of timeline lengths <= records, equal iff no duplicates.
        std::size_t total = total_stays(timelines);
        CHECK(total <= records.size());
        std::set<std::pair<std::string, int>> distinct;
        for (auto& r : records) distinct.insert({r.client_id, r.date.days_since_epoch()});
        CHECK(total == distinct.size());
    }
}

TEST_CASE("era cohorts keep timelines fully inside the half-open era") {
    EraConfig eras;
    ClientTimeline inside{"a", {ymd(2015, 1, 1), ymd(2016, 1, 1)}};
    ClientTimeline straddle{"b", {ymd(2017, 7, 1), ymd(2017, 9, 1)}};
    ClientTimeline on_boundary{"c", {ymd(2017, 8, 1)}};
    std::vector<ClientTimeline> all{inside, straddle, on_boundary};

    auto ready = select_era_cohort(all, Era::HousingReady, eras);
    REQUIRE(ready.size() == 1);
    CHECK(ready[0] == inside);

    auto first = select_era_cohort(all, Era::HousingFirst, eras);
    REQUIRE(first.size() == 1);
    CHECK(first[0].client_id == "c");
    CHECK(eras.era_of(ymd(2017, 7, 31)) == Era::HousingReady);
    CHECK(eras.era_of(ymd(2020, 3, 1)) == Era::Covid19);
}

TEST_CASE("era cohort membership matches a per-client min/max oracle and is idempotent") {
    std::mt19937_64 rng(99);
    auto timelines = oracle::random_timelines(rng, 400, ymd(2016, 1, 1), 2000);
    EraConfig eras;
    const std::int32_t hr_end = eras.housing_ready_end.days_since_epoch();
    const std::int32_t hf_end = eras.housing_first_end.days_since_epoch();

    for (auto era : {Era::HousingReady, Era::HousingFirst, Era::Covid19}) {
        auto cohort = select_era_cohort(timelines, era, eras);
        std::vector<std::string> expected;
        for (const auto& t : timelines) {
            std::int32_t lo = t.dates[0].days_since_epoch(), hi = lo;
            for (Date d : t.dates) {
                lo = std::min(lo, d.days_since_epoch());
                hi = std::max(hi, d.days_since_epoch());
            }
            bool in = false;
            if (era == Era::HousingReady) in = hi < hr_end;
            if (era == Era::HousingFirst) in = lo >= hr_end && hi < hf_end;
            if (era == Era::Covid19) in = lo >= hf_end;
            if (in) expected.push_back(t.client_id);
        }
        std::vector<std::string> got;
        for (const auto& t : cohort) got.push_back(t.client_id);
        CHECK(got == expected);
        CHECK(select_era_cohort(cohort, era, eras) == cohort);
    }
}

TEST_CASE("era config validation") {
    EraConfig bad{ymd(2020, 3, 1), ymd(2017, 8, 1)};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(parse_era("Housing_First") == Era::HousingFirst);
    CHECK(parse_era("covid-19") == Era::Covid19);
    CHECK_THROWS_AS(parse_era("recession"), ConfigError);
}
