#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace meshat {

// Calendar dates are course-local days; timestamps are UTC seconds. The
// course-local zone is taken to be UTC, so a timestamp's date is its UTC day.
using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

Date make_date(int year, unsigned month, unsigned day);
Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                         int second = 0);

Date date_of(Timestamp ts);
Timestamp start_of(Date d);

std::string format_date(Date d);                // 2025-11-01
std::string format_timestamp(Timestamp ts);     // 2025-11-01T08:30:00Z
std::optional<Date> parse_date(std::string_view text);
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Reporting period: one ISO-8601 calendar week.
struct IsoWeek {
  int year{0};
  unsigned week{0};

  static IsoWeek of(Date d);
  static IsoWeek of(Timestamp ts) { return of(date_of(ts)); }
  static std::optional<IsoWeek> parse(std::string_view text);  // 2025-W45

  Date first_day() const;  // Monday
  Date last_day() const { return first_day() + std::chrono::days{6}; }
  Timestamp begin() const { return start_of(first_day()); }
  Timestamp end() const { return start_of(first_day() + std::chrono::days{7}); }  // exclusive

  bool contains(Timestamp ts) const { return ts >= begin() && ts < end(); }
  bool contains(Date d) const { return d >= first_day() && d <= last_day(); }

  IsoWeek next() const { return of(first_day() + std::chrono::days{7}); }
  IsoWeek previous() const { return of(first_day() - std::chrono::days{7}); }

  std::string str() const;

  friend constexpr auto operator<=>(const IsoWeek&, const IsoWeek&) = default;
};

}  // namespace meshat
