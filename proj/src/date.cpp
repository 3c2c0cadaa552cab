#include "sam/date.hpp"

#include <cstdio>
#include <stdexcept>

namespace sam {

namespace {

std::optional<unsigned> parse_digits(std::string_view text) {
    unsigned value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + static_cast<unsigned>(c - '0');
    }
    return value;
}

Date from_chrono(std::chrono::year_month_day ymd) {
    return Date(static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count()));
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date " + std::to_string(year) + "-" +
                                    std::to_string(month) + "-" + std::to_string(day));
    }
    return from_chrono(ymd);
}

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto y = parse_digits(text.substr(0, 4));
    auto m = parse_digits(text.substr(5, 2));
    auto d = parse_digits(text.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*y)},
                                    std::chrono::month{*m}, std::chrono::day{*d}};
    if (!ymd.ok()) return std::nullopt;
    return from_chrono(ymd);
}

Date Date::parse_or_throw(std::string_view text) {
    auto parsed = parse(text);
    if (!parsed) {
        throw std::invalid_argument("invalid date '" + std::string(text) +
                                    "' (expected YYYY-MM-DD)");
    }
    return *parsed;
}

std::chrono::year_month_day Date::ymd() const {
    return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
}

int Date::year() const { return static_cast<int>(ymd().year()); }
unsigned Date::month() const { return static_cast<unsigned>(ymd().month()); }
unsigned Date::day() const { return static_cast<unsigned>(ymd().day()); }

std::string Date::to_string() const {
    auto ymd_value = ymd();
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(ymd_value.year()),
                  static_cast<unsigned>(ymd_value.month()), static_cast<unsigned>(ymd_value.day()));
    return buffer;
}

Date Date::quarter_start() const {
    auto ymd_value = ymd();
    unsigned m = static_cast<unsigned>(ymd_value.month());
    unsigned first_month = ((m - 1) / 3) * 3 + 1;
    return from_ymd(static_cast<int>(ymd_value.year()), first_month, 1);
}

Date Date::next_quarter_start() const {
    auto start = quarter_start().ymd();
    unsigned m = static_cast<unsigned>(start.month());
    int y = static_cast<int>(start.year());
    if (m == 10) return from_ymd(y + 1, 1, 1);
    return from_ymd(y, m + 3, 1);
}

}  // namespace sam
