#pragma once

// Brute-force reference implementations used only by tests. Each one takes
// the slow, obvious route (day-by-day walks, nested loops, full sorts) and
// shares no code with the library paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sam/date.hpp"
#include "sam/ingest.hpp"
#include "sam/labels.hpp"

namespace sam::oracle {

inline std::vector<ClientTimeline> group_unique_sort(const std::vector<StayRecord>& records) {
    std::vector<ClientTimeline> out;
    for (const auto& r : records) {
        ClientTimeline* slot = nullptr;
        for (auto& t : out) {
            if (t.client_id == r.client_id) slot = &t;
        }
        if (!slot) {
            out.push_back({r.client_id, {}});
            slot = &out.back();
        }
        bool seen = false;
        for (Date d : slot->dates) seen = seen || d == r.date;
        if (!seen) slot->dates.push_back(r.date);
    }
    // Insertion sorts.
    for (auto& t : out) {
        for (std::size_t i = 1; i < t.dates.size(); ++i) {
            for (std::size_t j = i; j > 0 && t.dates[j] < t.dates[j - 1]; --j) {
                std::swap(t.dates[j], t.dates[j - 1]);
            }
        }
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        for (std::size_t j = i; j > 0 && out[j].client_id < out[j - 1].client_id; --j) {
            std::swap(out[j], out[j - 1]);
        }
    }
    return out;
}

struct DayWalkMetrics {
    std::int32_t duration = 0;
    std::int32_t stays = 0;
    double percent = 0.0;
    bool active = false;
};

/// Walks every calendar day from the first stay to as_of.
inline DayWalkMetrics day_walk_metrics(const std::vector<Date>& dates, Date as_of,
                                       std::int32_t active_threshold) {
    std::set<std::int32_t> present;
    for (Date d : dates) present.insert(d.days_since_epoch());
    std::int32_t first = *present.begin();

    DayWalkMetrics m;
    std::int32_t days_walked = 0;
    std::int32_t last_seen = first;
    for (std::int32_t day = first; day <= as_of.days_since_epoch(); ++day) {
        ++days_walked;
        if (present.count(day)) {
            ++m.stays;
            last_seen = day;
        }
    }
    m.duration = days_walked - 1 < 1 ? 1 : days_walked - 1;
    m.percent = 100.0 * m.stays / m.duration;
    std::int32_t idle = 0;
    for (std::int32_t day = last_seen + 1; day <= as_of.days_since_epoch(); ++day) ++idle;
    m.active = idle < active_threshold;
    return m;
}

/// The three labelling rules as a lookup on (active, percent vs alpha).
inline AccessLabel rule_table(bool active, std::int64_t stays, std::int64_t duration,
                              double alpha) {
    if (!active) return AccessLabel::Transitional;
    // percent > alpha  <=>  stays * 100 > alpha * duration
    long double lhs = static_cast<long double>(stays) * 100.0L;
    long double rhs = static_cast<long double>(alpha) * static_cast<long double>(duration);
    return lhs > rhs ? AccessLabel::Chronic : AccessLabel::Episodic;
}

/// Walks day by day, counting absent days between consecutive stays.
inline std::int64_t walk_episodes(const std::vector<Date>& dates, std::int32_t gap_days) {
    std::set<std::int32_t> present;
    for (Date d : dates) present.insert(d.days_since_epoch());
    std::int64_t episodes = 0;
    std::int32_t absent_run = 0;
    bool started = false;
    for (std::int32_t day = *present.begin(); day <= *present.rbegin(); ++day) {
        if (present.count(day)) {
            if (!started || absent_run + 1 >= gap_days) ++episodes;
            started = true;
            absent_run = 0;
        } else {
            ++absent_run;
        }
    }
    return episodes;
}

/// Value at 1-based rank ceil(fraction * n) of the full ascending sort.
inline std::int64_t nearest_rank(std::vector<std::int64_t> values, double numerator,
                                 double denominator) {
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(
        std::ceil(static_cast<double>(values.size()) * numerator / denominator));
    if (rank < 1) rank = 1;
    return values[rank - 1];
}

inline double mean_of(const std::vector<std::int64_t>& values) {
    long double s = 0;
    for (auto v : values) s += v;
    return static_cast<double>(s / values.size());
}

/// Quarter start computed from calendar fields.
inline Date quarter_of(Date d) {
    static const unsigned starts[] = {1, 1, 1, 4, 4, 4, 7, 7, 7, 10, 10, 10};
    return Date::from_ymd(d.year(), starts[d.month() - 1], 1);
}

inline std::vector<Date> quarter_starts(Date origin, Date end) {
    std::vector<Date> starts;
    int y = origin.year();
    unsigned m = origin.month();
    while (true) {
        Date s = Date::from_ymd(y, m, 1);
        if (!(s < end)) break;
        starts.push_back(s);
        m += 3;
        if (m > 12) {
            m -= 12;
            ++y;
        }
    }
    return starts;
}

/// Random client timelines with varied density and span.
inline std::vector<ClientTimeline> random_timelines(std::mt19937_64& rng, std::size_t count,
                                                   Date base = Date::from_ymd(2012, 1, 1),
                                                   std::int32_t spread_days = 3000) {
    std::vector<ClientTimeline> out;
    std::uniform_int_distribution<std::int32_t> start(0, spread_days);
    std::uniform_int_distribution<int> span(0, 400);
    std::uniform_real_distribution<double> density(0.02, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        ClientTimeline t;
        t.client_id = "r" + std::to_string(100000 + i);
        Date first = base + start(rng);
        int length = span(rng);
        std::bernoulli_distribution keep(density(rng));
        t.dates.push_back(first);
        for (int day = 1; day <= length; ++day) {
            if (keep(rng)) t.dates.push_back(first + day);
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace sam::oracle
