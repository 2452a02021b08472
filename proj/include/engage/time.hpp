#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace engage {

// Civil UTC date stored as days since 1970-01-01.
struct Date {
    std::int32_t days = 0;

    static Date from_civil(int year, unsigned month, unsigned day);
    // Accepts YYYY-MM-DD.
    static std::optional<Date> parse(std::string_view text);

    Date plus_days(int n) const { return Date{days + n}; }
    std::string str() const;

    auto operator<=>(const Date&) const = default;
};

// UTC instant stored as seconds since the epoch.
struct Timestamp {
    std::int64_t seconds = 0;

    static Timestamp from_date(Date d) {
        return Timestamp{static_cast<std::int64_t>(d.days) * 86400};
    }
    // Accepts YYYY-MM-DD, or YYYY-MM-DD{T or space}HH:MM[:SS[.fff]][Z].
    static std::optional<Timestamp> parse(std::string_view text);
    static constexpr Timestamp max() {
        return Timestamp{std::numeric_limits<std::int64_t>::max()};
    }

    Date date() const;
    Timestamp plus_days(int n) const {
        return Timestamp{seconds + static_cast<std::int64_t>(n) * 86400};
    }
    std::string str() const;  // YYYY-MM-DDTHH:MM:SSZ

    auto operator<=>(const Timestamp&) const = default;
};

// Half-open interval [start, end).
struct TimeWindow {
    Timestamp start;
    Timestamp end;

    bool contains(Timestamp t) const { return start <= t && t < end; }
};

}  // namespace engage
