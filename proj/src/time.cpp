#include "meshat/time.hpp"

#include <cstdio>

namespace meshat {

using namespace std::chrono;

Date make_date(int year, unsigned month, unsigned day) {
  return sys_days{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}};
}

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute, int second) {
  return start_of(make_date(year, month, day)) + hours{hour} + minutes{minute} + seconds{second};
}

Date date_of(Timestamp ts) { return floor<days>(ts); }

Timestamp start_of(Date d) { return Timestamp{d}; }

std::string format_date(Date d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(Timestamp ts) {
  const Date d = date_of(ts);
  hh_mm_ss hms{ts - Timestamp{d}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(d).c_str(),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

namespace {

bool parse_digits(std::string_view text, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > text.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
    v = v * 10 + (text[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!parse_digits(text, 0, 4, y) || !parse_digits(text, 5, 2, m) || !parse_digits(text, 8, 2, d))
    return std::nullopt;
  year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                     std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
      text[19] != 'Z')
    return std::nullopt;
  auto d = parse_date(text.substr(0, 10));
  int h = 0, mi = 0, s = 0;
  if (!d || !parse_digits(text, 11, 2, h) || !parse_digits(text, 14, 2, mi) ||
      !parse_digits(text, 17, 2, s) || h > 23 || mi > 59 || s > 59)
    return std::nullopt;
  return start_of(*d) + hours{h} + minutes{mi} + seconds{s};
}

IsoWeek IsoWeek::of(Date d) {
  // The ISO year is the year of the Thursday of d's week.
  const weekday wd{d};
  const int iso_wd = static_cast<int>(wd.iso_encoding());  // Mon=1..Sun=7
  const Date thursday = d + days{4 - iso_wd};
  const year_month_day ymd{thursday};
  const Date jan1 = sys_days{ymd.year() / January / 1};
  const auto ordinal = (thursday - jan1).count();
  return IsoWeek{static_cast<int>(ymd.year()), static_cast<unsigned>(ordinal / 7 + 1)};
}

Date IsoWeek::first_day() const {
  // Week 1 contains January 4th.
  const Date jan4 = sys_days{std::chrono::year{year} / January / 4};
  const int iso_wd = static_cast<int>(weekday{jan4}.iso_encoding());
  const Date week1_monday = jan4 - days{iso_wd - 1};
  return week1_monday + days{7 * (static_cast<int>(week) - 1)};
}

std::optional<IsoWeek> IsoWeek::parse(std::string_view text) {
  int y = 0, w = 0;
  if (text.size() != 8 || text[4] != '-' || text[5] != 'W') return std::nullopt;
  if (!parse_digits(text, 0, 4, y) || !parse_digits(text, 6, 2, w) || w < 1 || w > 53)
    return std::nullopt;
  IsoWeek candidate{y, static_cast<unsigned>(w)};
  if (of(candidate.first_day()) != candidate) return std::nullopt;
  return candidate;
}

std::string IsoWeek::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02u", year, week);
  return buf;
}

}  // namespace meshat
