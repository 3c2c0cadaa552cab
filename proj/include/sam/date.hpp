#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sam {

/// Calendar date at day resolution, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    /// Throws std::invalid_argument when the triple is not a real calendar date.
    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Strict `YYYY-MM-DD`; returns nullopt for anything else, including
    /// well-formed strings naming impossible dates (2015-02-30).
    static std::optional<Date> parse(std::string_view text);

    /// Like parse() but throws std::invalid_argument.
    static Date parse_or_throw(std::string_view text);

    constexpr std::int32_t days_since_epoch() const { return days_; }

    std::chrono::year_month_day ymd() const;
    int year() const;
    unsigned month() const;
    unsigned day() const;

    std::string to_string() const;

    /// First day of the calendar quarter containing this date.
    Date quarter_start() const;
    /// First day of the following calendar quarter.
    Date next_quarter_start() const;

    constexpr Date operator+(std::int32_t days) const { return Date(days_ + days); }
    constexpr Date operator-(std::int32_t days) const { return Date(days_ - days); }
    constexpr std::int32_t operator-(Date other) const { return days_ - other.days_; }
    constexpr Date& operator++() {
        ++days_;
        return *this;
    }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::int32_t days_ = 0;
};

}  // namespace sam
