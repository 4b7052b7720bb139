#include "cmkb/time.hpp"

#include <cctype>
#include <cstdio>

#include "cmkb/errors.hpp"

namespace cmkb {
namespace {

bool digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

bool parse_date(std::string_view s, std::chrono::year_month_day& ymd) {
    int y = 0, m = 0, d = 0;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return false;
    if (!digits(s, 0, 4, y) || !digits(s, 5, 2, m) || !digits(s, 8, 2, d)) return false;
    ymd = std::chrono::year{y} / std::chrono::month{static_cast<unsigned>(m)} /
          std::chrono::day{static_cast<unsigned>(d)};
    return ymd.ok();
}

}  // namespace

Timestamp now_utc() {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

Clock system_clock() { return [] { return now_utc(); }; }

std::string format_rfc3339(Timestamp t) {
    const auto day = std::chrono::floor<std::chrono::days>(t);
    const std::chrono::year_month_day ymd{day};
    const std::chrono::hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Timestamp parse_rfc3339(std::string_view s) {
    auto fail = [&]() -> Timestamp {
        throw SchemaError("invalid RFC 3339 timestamp: \"" + std::string(s) + "\"");
    };
    std::chrono::year_month_day ymd{};
    if (!parse_date(s, ymd) || s.size() < 20) return fail();
    if (s[10] != 'T' && s[10] != 't') return fail();
    int hh = 0, mm = 0, ss = 0;
    if (!digits(s, 11, 2, hh) || s[13] != ':' || !digits(s, 14, 2, mm) || s[16] != ':' ||
        !digits(s, 17, 2, ss))
        return fail();
    if (hh > 23 || mm > 59 || ss > 60) return fail();
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) return fail();
    }
    if (pos >= s.size()) return fail();
    int offset_minutes = 0;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int oh = 0, om = 0;
        if (!digits(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
            !digits(s, pos + 4, 2, om))
            return fail();
        offset_minutes = (oh * 60 + om) * (s[pos] == '-' ? -1 : 1);
        pos += 6;
    } else {
        return fail();
    }
    if (pos != s.size()) return fail();
    const auto local = std::chrono::sys_days{ymd} + std::chrono::hours{hh} +
                       std::chrono::minutes{mm} + std::chrono::seconds{ss};
    return Timestamp{local - std::chrono::minutes{offset_minutes}};
}

bool is_iso_date(std::string_view s) {
    std::chrono::year_month_day ymd{};
    return s.size() == 10 && parse_date(s, ymd);
}

}  // namespace cmkb
