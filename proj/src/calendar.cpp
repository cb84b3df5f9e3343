#include "tsshap/calendar.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "tsshap/error.hpp"

namespace tsshap {

namespace {

using days_t = std::chrono::sys_days;

days_t sys_days_of(int y, int m, int d) {
    return days_t{std::chrono::year{y} / m / d};
}

}  // namespace

const char* periodicity_name(Periodicity p) noexcept {
    switch (p) {
        case Periodicity::hourly: return "hourly";
        case Periodicity::daily: return "daily";
        case Periodicity::weekly: return "weekly";
        case Periodicity::monthly: return "monthly";
    }
    return "?";
}

Periodicity parse_periodicity(const std::string& name) {
    if (name == "hourly") return Periodicity::hourly;
    if (name == "daily") return Periodicity::daily;
    if (name == "weekly") return Periodicity::weekly;
    if (name == "monthly") return Periodicity::monthly;
    fail(ErrorCode::ConfigInvalid, "unknown periodicity '" + name + "'");
}

CivilDateTime civil_from_unix(UnixTime t) {
    using namespace std::chrono;
    const sys_seconds ss{seconds{t}};
    const auto day = floor<days>(ss);
    const year_month_day ymd{day};
    const auto tod = ss - day;
    const auto h = duration_cast<hours>(tod);
    const auto m = duration_cast<minutes>(tod - h);
    const auto s = duration_cast<seconds>(tod - h - m);
    CivilDateTime c;
    c.year = static_cast<int>(ymd.year());
    c.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
    c.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
    c.hour = static_cast<int>(h.count());
    c.minute = static_cast<int>(m.count());
    c.second = static_cast<int>(s.count());
    return c;
}

UnixTime unix_from_civil(const CivilDateTime& c) {
    using namespace std::chrono;
    const auto day = sys_days_of(c.year, c.month, c.day);
    const sys_seconds ss = day + hours{c.hour} + minutes{c.minute} + seconds{c.second};
    return ss.time_since_epoch().count();
}

bool is_leap_year(int year) noexcept {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) noexcept {
    static constexpr int lens[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lens[month - 1];
}

int day_of_week(UnixTime t) {
    using namespace std::chrono;
    const auto day = floor<days>(sys_seconds{seconds{t}});
    const weekday wd{day};
    return static_cast<int>(wd.iso_encoding()) - 1;  // Mon=1..Sun=7 -> 0..6
}

int day_of_year(UnixTime t) {
    const CivilDateTime c = civil_from_unix(t);
    int doy = c.day;
    for (int m = 1; m < c.month; ++m) doy += days_in_month(c.year, m);
    return doy;
}

int iso_week_of_year(UnixTime t) {
    // ISO week number: the week containing the year's first Thursday is week 1.
    const CivilDateTime c = civil_from_unix(t);
    const int doy = day_of_year(t);
    const int dow = day_of_week(t);  // 0=Mon
    int week = (doy - dow + 9) / 7;
    if (week < 1) {
        // belongs to the last week of the previous year
        const CivilDateTime prev{c.year - 1, 12, 31, 0, 0, 0};
        return iso_week_of_year(unix_from_civil(prev));
    }
    if (week == 53) {
        // week 53 exists only if Dec 31 falls on Thu (or Fri of a leap year)
        const int dec31_dow = day_of_week(unix_from_civil({c.year, 12, 31, 0, 0, 0}));
        const bool has53 = dec31_dow == 3 || (is_leap_year(c.year) && dec31_dow == 4);
        if (!has53) return 1;
    }
    return week;
}

UnixTime add_period(UnixTime t, Periodicity p, int n) {
    switch (p) {
        case Periodicity::hourly: return t + static_cast<UnixTime>(n) * 3600;
        case Periodicity::daily: return t + static_cast<UnixTime>(n) * 86400;
        case Periodicity::weekly: return t + static_cast<UnixTime>(n) * 7 * 86400;
        case Periodicity::monthly: {
            CivilDateTime c = civil_from_unix(t);
            const int idx = (c.year * 12 + (c.month - 1)) + n;
            c.year = idx / 12;
            c.month = idx % 12 + 1;
            if (idx < 0 && idx % 12 != 0) { c.year -= 1; c.month = idx % 12 + 13; }
            c.day = std::min(c.day, days_in_month(c.year, c.month));
            return unix_from_civil(c);
        }
    }
    fail(ErrorCode::ConfigInvalid, "bad periodicity");
}

bool is_one_period_apart(UnixTime a, UnixTime b, Periodicity p) {
    if (p != Periodicity::monthly) return b == add_period(a, p, 1);
    const CivilDateTime ca = civil_from_unix(a);
    const CivilDateTime cb = civil_from_unix(b);
    if (cb.hour != ca.hour || cb.minute != ca.minute || cb.second != ca.second) return false;
    const int months = (cb.year * 12 + cb.month) - (ca.year * 12 + ca.month);
    if (months != 1) return false;
    const int clamped = std::min(ca.day, days_in_month(cb.year, cb.month));
    const bool month_end_anchor = ca.day == days_in_month(ca.year, ca.month) &&
                                  cb.day == days_in_month(cb.year, cb.month);
    return cb.day == clamped || month_end_anchor;
}

UnixTime parse_iso8601(const std::string& text) {
    CivilDateTime c;
    char sep = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &c.year, &c.month, &c.day, &sep,
                        &c.hour, &c.minute, &c.second);
    if (n != 3 && n != 7) fail(ErrorCode::InputUnreadable, "bad timestamp '" + text + "'");
    if (n == 7 && sep != 'T' && sep != ' ')
        fail(ErrorCode::InputUnreadable, "bad timestamp '" + text + "'");
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > days_in_month(c.year, c.month) ||
        c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 || c.second < 0 || c.second > 60)
        fail(ErrorCode::InputUnreadable, "bad timestamp '" + text + "'");
    return unix_from_civil(c);
}

std::string format_iso8601(UnixTime t, bool with_time) {
    const CivilDateTime c = civil_from_unix(t);
    char buf[32];
    if (with_time || c.hour != 0 || c.minute != 0 || c.second != 0) {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", c.year, c.month, c.day,
                      c.hour, c.minute, c.second);
    } else {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    }
    return buf;
}

std::string format_iso8601_datetime(UnixTime t) {
    const CivilDateTime c = civil_from_unix(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return buf;
}

}  // namespace tsshap
