#include "engage/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace engage {

namespace {

// Civil calendar conversions on the proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(int y, unsigned m) {
    static constexpr std::array<unsigned, 12> lengths{31, 28, 31, 30, 31, 30,
                                                      31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

bool parse_fixed_uint(std::string_view text, std::size_t pos, std::size_t len,
                      unsigned& out) {
    if (pos + len > text.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') return false;
        out = out * 10 + static_cast<unsigned>(c - '0');
    }
    return true;
}

bool parse_civil(std::string_view text, int& y, unsigned& m, unsigned& d) {
    unsigned uy = 0;
    if (text.size() < 10) return false;
    if (!parse_fixed_uint(text, 0, 4, uy)) return false;
    if (text[4] != '-' || text[7] != '-') return false;
    if (!parse_fixed_uint(text, 5, 2, m)) return false;
    if (!parse_fixed_uint(text, 8, 2, d)) return false;
    y = static_cast<int>(uy);
    if (m < 1 || m > 12) return false;
    if (d < 1 || d > days_in_month(y, m)) return false;
    return true;
}

}  // namespace

Date Date::from_civil(int year, unsigned month, unsigned day) {
    return Date{static_cast<std::int32_t>(days_from_civil(year, month, day))};
}

std::optional<Date> Date::parse(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (text.size() != 10 || !parse_civil(text, y, m, d)) return std::nullopt;
    return from_civil(y, m, d);
}

std::string Date::str() const {
    int y = 0;
    unsigned m = 0, d = 0;
    civil_from_days(days, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
    return buf;
}

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (!parse_civil(text, y, m, d)) return std::nullopt;
    std::int64_t secs = days_from_civil(y, m, d) * 86400;
    if (text.size() == 10) return Timestamp{secs};

    const char sep = text[10];
    if (sep != 'T' && sep != ' ') return std::nullopt;
    unsigned hh = 0, mm = 0, ss = 0;
    if (!parse_fixed_uint(text, 11, 2, hh)) return std::nullopt;
    if (text.size() < 16 || text[13] != ':') return std::nullopt;
    if (!parse_fixed_uint(text, 14, 2, mm)) return std::nullopt;
    std::size_t pos = 16;
    if (pos < text.size() && text[pos] == ':') {
        if (!parse_fixed_uint(text, 17, 2, ss)) return std::nullopt;
        pos = 19;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::size_t digits = 0;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                ++pos;
                ++digits;
            }
            if (digits == 0) return std::nullopt;  // fractional part truncated
        }
    }
    if (pos < text.size()) {
        if (text[pos] != 'Z' || pos + 1 != text.size()) return std::nullopt;
    }
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    secs += hh * 3600 + mm * 60 + ss;
    return Timestamp{secs};
}

Date Timestamp::date() const {
    std::int64_t d = seconds / 86400;
    if (seconds < 0 && seconds % 86400 != 0) --d;
    return Date{static_cast<std::int32_t>(d)};
}

std::string Timestamp::str() const {
    const Date day = date();
    const std::int64_t rem = seconds - static_cast<std::int64_t>(day.days) * 86400;
    int y = 0;
    unsigned m = 0, d = 0;
    civil_from_days(day.days, y, m, d);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600),
                  static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace engage
