#include "sam/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_map>

#include "sam/error.hpp"

namespace sam {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        text = text.substr(1, text.size() - 2);
    }
    return text;
}

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::string normalize_token(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

std::string_view to_string(Era era) {
    switch (era) {
        case Era::HousingReady: return "housing-ready";
        case Era::HousingFirst: return "housing-first";
        case Era::Covid19: return "covid-19";
    }
    return "unknown";
}

Era parse_era(std::string_view text) {
    auto token = normalize_token(text);
    if (token == "housingready") return Era::HousingReady;
    if (token == "housingfirst") return Era::HousingFirst;
    if (token == "covid19" || token == "covid") return Era::Covid19;
    throw ConfigError("unknown era '" + std::string(text) +
                      "' (expected housing-ready, housing-first or covid-19)");
}

void EraConfig::validate() const {
    if (!(housing_ready_end < housing_first_end)) {
        throw ConfigError("housing_ready_end (" + housing_ready_end.to_string() +
                          ") must precede housing_first_end (" + housing_first_end.to_string() +
                          ")");
    }
}

Era EraConfig::era_of(Date date) const {
    if (date < housing_ready_end) return Era::HousingReady;
    if (date < housing_first_end) return Era::HousingFirst;
    return Era::Covid19;
}

ParseResult parse_records(std::istream& source, ParseMode mode) {
    ParseResult result;
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_number = 0;

    std::optional<std::size_t> id_column;
    std::optional<std::size_t> date_column;
    bool have_header = false;

    while (std::getline(source, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_number == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) continue;

        split_fields(line, fields);
        if (!have_header) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == "client_id") id_column = i;
                if (fields[i] == "date") date_column = i;
            }
            if (!id_column || !date_column) {
                throw ConfigError("input header must contain columns 'client_id' and 'date'");
            }
            have_header = true;
            continue;
        }

        ++result.rows_read;
        auto fail = [&](const std::string& message) {
            if (mode == ParseMode::Strict) throw RecordError(line_number, message);
            result.diagnostics.push_back({line_number, message});
        };

        std::size_t needed = std::max(*id_column, *date_column) + 1;
        if (fields.size() < needed) {
            fail("expected at least " + std::to_string(needed) + " fields, found " +
                 std::to_string(fields.size()));
            continue;
        }
        auto id = fields[*id_column];
        if (id.empty()) {
            fail("empty client_id");
            continue;
        }
        auto date = Date::parse(fields[*date_column]);
        if (!date) {
            fail("invalid date '" + std::string(fields[*date_column]) + "'");
            continue;
        }
        result.records.push_back({std::string(id), *date});
    }

    if (!have_header) {
        // Zero-byte input carries no records; anything else must have had a header.
        if (line_number > 0) {
            throw ConfigError("input header must contain columns 'client_id' and 'date'");
        }
    }
    return result;
}

std::vector<ClientTimeline> build_timelines(const std::vector<StayRecord>& records) {
    std::unordered_map<std::string_view, std::size_t> index;
    std::vector<ClientTimeline> timelines;
    for (const auto& record : records) {
        auto [it, inserted] = index.try_emplace(record.client_id, timelines.size());
        if (inserted) timelines.push_back({record.client_id, {}});
        timelines[it->second].dates.push_back(record.date);
    }
    for (auto& timeline : timelines) {
        std::sort(timeline.dates.begin(), timeline.dates.end());
        timeline.dates.erase(std::unique(timeline.dates.begin(), timeline.dates.end()),
                             timeline.dates.end());
    }
    std::sort(timelines.begin(), timelines.end(),
              [](const ClientTimeline& a, const ClientTimeline& b) {
                  return a.client_id < b.client_id;
              });
    return timelines;
}

std::vector<ClientTimeline> select_era_cohort(const std::vector<ClientTimeline>& timelines,
                                              Era era, const EraConfig& config) {
    config.validate();
    std::vector<ClientTimeline> cohort;
    for (const auto& timeline : timelines) {
        if (timeline.dates.empty()) continue;
        if (config.era_of(timeline.first_date()) == era &&
            config.era_of(timeline.last_date()) == era) {
            cohort.push_back(timeline);
        }
    }
    return cohort;
}

std::size_t total_stays(const std::vector<ClientTimeline>& timelines) {
    std::size_t total = 0;
    for (const auto& timeline : timelines) total += timeline.dates.size();
    return total;
}

}  // namespace sam
