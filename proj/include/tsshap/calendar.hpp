#pragma once

#include <cstdint>
#include <string>

namespace tsshap {

/// Observation spacing of a series. Weekly and monthly step by calendar
/// rules (month lengths vary), hourly/daily by fixed seconds.
enum class Periodicity { hourly, daily, weekly, monthly };

const char* periodicity_name(Periodicity p) noexcept;
Periodicity parse_periodicity(const std::string& name);

/// A broken-down UTC date-time, second resolution.
struct CivilDateTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

/// Unix timestamps (seconds, UTC) are the wire format for time everywhere
/// in the library.
using UnixTime = std::int64_t;

CivilDateTime civil_from_unix(UnixTime t);
UnixTime unix_from_civil(const CivilDateTime& c);

bool is_leap_year(int year) noexcept;
int days_in_month(int year, int month) noexcept;

/// Day of week, 0 = Monday .. 6 = Sunday.
int day_of_week(UnixTime t);
/// Ordinal day of the year, 1..366.
int day_of_year(UnixTime t);
/// ISO-8601 week of the year, 1..53.
int iso_week_of_year(UnixTime t);

/// Advance a timestamp by n periods. Monthly stepping clamps the day to the
/// target month's length (Jan 31 + 1 month = Feb 28/29).
UnixTime add_period(UnixTime t, Periodicity p, int n = 1);

/// True when b is exactly one period after a. Monthly accepts both the
/// clamped day and month-end anchoring (Jan 31 -> Feb 28 -> Mar 31).
bool is_one_period_apart(UnixTime a, UnixTime b, Periodicity p);

/// Parse "YYYY-MM-DD" or "YYYY-MM-DD[T ]HH:MM:SS" with optional trailing Z.
UnixTime parse_iso8601(const std::string& text);
std::string format_iso8601(UnixTime t, bool with_time = false);
/// Full date-time form used in report metadata.
std::string format_iso8601_datetime(UnixTime t);

}  // namespace tsshap
