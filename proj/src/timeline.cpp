#include "sam/timeline.hpp"

#include <algorithm>

#include "sam/error.hpp"

namespace sam {

namespace {

std::size_t bin_index(const TimelineSeries& series, Date date) {
    // Bins are short (tens to hundreds); binary search on start dates.
    auto it = std::upper_bound(series.bins.begin(), series.bins.end(), date,
                               [](Date d, const TimelineBin& bin) { return d < bin.start; });
    return static_cast<std::size_t>(it - series.bins.begin()) - 1;
}

AccessLabel require_label(const LabeledCohort& labels, const std::string& client_id) {
    auto it = labels.labels.find(client_id);
    if (it == labels.labels.end()) {
        throw ConfigError("client '" + client_id + "' has no label");
    }
    return it->second;
}

void tally_counts(TimelineSeries& series, const std::vector<ClientTimeline>& timelines,
                  const LabeledCohort& labels) {
    for (const auto& timeline : timelines) {
        if (timeline.dates.empty()) continue;
        const Date first = timeline.first_date();
        if (first < series.origin || !(first < series.end)) continue;
        const auto label = require_label(labels, timeline.client_id);
        ++series.bins[bin_index(series, first)].counts[index_of(label)];
    }
}

void tally_stay_days(TimelineSeries& series, const std::vector<ClientTimeline>& timelines,
                     const LabeledCohort& labels) {
    for (const auto& timeline : timelines) {
        if (timeline.dates.empty()) continue;
        if (timeline.last_date() < series.origin || !(timeline.first_date() < series.end)) {
            continue;
        }
        const auto slot = index_of(require_label(labels, timeline.client_id));
        auto it = std::lower_bound(timeline.dates.begin(), timeline.dates.end(), series.origin);
        std::size_t bin = 0;
        for (; it != timeline.dates.end() && *it < series.end; ++it) {
            while (bin + 1 < series.bins.size() && !(*it < series.bins[bin + 1].start)) ++bin;
            ++series.bins[bin].stay_days[slot];
            ++series.bins[bin].total_stay_days;
        }
    }
}

}  // namespace

std::optional<PerLabel<double>> TimelineBin::occupancy_shares() const {
    if (total_stay_days == 0) return std::nullopt;
    PerLabel<double> shares{};
    for (auto label : kAllLabels) {
        shares[index_of(label)] = 100.0 * static_cast<double>(stay_days[index_of(label)]) /
                                  static_cast<double>(total_stay_days);
    }
    return shares;
}

TimelineSeries make_quarter_bins(Date origin, Date end) {
    if (!(origin < end)) {
        throw ConfigError("timeline origin " + origin.to_string() + " must precede end " +
                          end.to_string());
    }
    if (origin.quarter_start() != origin) {
        throw ConfigError("timeline origin " + origin.to_string() +
                          " must be the first day of a calendar quarter");
    }
    TimelineSeries series{origin, end, {}};
    for (Date start = origin; start < end; start = start.next_quarter_start()) {
        series.bins.push_back(TimelineBin{start});
    }
    return series;
}

TimelineSeries bin_clients(const std::vector<ClientTimeline>& timelines,
                           const LabeledCohort& labels, Date origin, Date end) {
    auto series = make_quarter_bins(origin, end);
    tally_counts(series, timelines, labels);
    return series;
}

TimelineSeries occupancy_share(const std::vector<ClientTimeline>& timelines,
                               const LabeledCohort& labels, Date origin, Date end) {
    auto series = make_quarter_bins(origin, end);
    tally_stay_days(series, timelines, labels);
    return series;
}

TimelineSeries build_timeline(const std::vector<ClientTimeline>& timelines,
                              const LabeledCohort& labels, Date origin, Date end) {
    auto series = make_quarter_bins(origin, end);
    tally_counts(series, timelines, labels);
    tally_stay_days(series, timelines, labels);
    return series;
}

PerLabel<std::optional<std::vector<double>>> percent_change(const TimelineSeries& series) {
    if (series.bins.empty()) throw PreconditionError("percent_change: series has no bins");
    PerLabel<std::optional<std::vector<double>>> out;
    for (auto label : kAllLabels) {
        const auto slot = index_of(label);
        const auto base = series.bins.front().counts[slot];
        if (base == 0) continue;
        std::vector<double> values;
        values.reserve(series.bins.size());
        for (const auto& bin : series.bins) {
            values.push_back(100.0 * static_cast<double>(bin.counts[slot] - base) /
                             static_cast<double>(base));
        }
        out[slot] = std::move(values);
    }
    return out;
}

}  // namespace sam
