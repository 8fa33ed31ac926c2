#include "core/date.hpp"

#include <charconv>

#include "core/common.hpp"

namespace gtwnn {

TimeResolution time_resolution_from_string(std::string_view s) {
  if (s == "monthly") return TimeResolution::monthly;
  if (s == "daily") return TimeResolution::daily;
  throw Error(ErrorKind::invalid_argument,
              "unknown time resolution '" + std::string(s) + "' (expected monthly or daily)");
}

namespace {

bool parse_int_field(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && leap(year)) return 29;
  return table[month - 1];
}

}  // namespace

Date parse_date(std::string_view text) {
  Date d;
  bool ok = false;
  if (text.size() == 7 && text[4] == '-') {
    ok = parse_int_field(text.substr(0, 4), d.year) && parse_int_field(text.substr(5, 2), d.month);
    d.day = 0;
  } else if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    ok = parse_int_field(text.substr(0, 4), d.year) &&
         parse_int_field(text.substr(5, 2), d.month) &&
         parse_int_field(text.substr(8, 2), d.day);
  }
  if (!ok || d.month < 1 || d.month > 12)
    throw Error(ErrorKind::parse, "invalid date '" + std::string(text) + "' (expected YYYY-MM or YYYY-MM-DD)");
  if (d.day != 0 && (d.day < 1 || d.day > days_in_month(d.year, d.month)))
    throw Error(ErrorKind::parse, "invalid day of month in date '" + std::string(text) + "'");
  return d;
}

std::string format_date(const Date& d) {
  auto pad = [](int v, int width) {
    std::string s = format_int(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
  };
  std::string out = pad(d.year, 4) + "-" + pad(d.month, 2);
  if (!d.monthly()) out += "-" + pad(d.day, 2);
  return out;
}

std::int64_t month_number(const Date& d) {
  return static_cast<std::int64_t>(d.year) * 12 + (d.month - 1);
}

std::int64_t day_number(const Date& d) {
  // Howard Hinnant's days-from-civil algorithm.
  int y = d.year;
  const int m = d.month;
  const int day = d.day;
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(day) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t step_index(const Date& d, const Date& start, TimeResolution res) {
  if (res == TimeResolution::monthly) return month_number(d) - month_number(start);
  if (d.monthly() || start.monthly())
    throw Error(ErrorKind::invalid_argument, "daily step index requires full YYYY-MM-DD dates");
  return day_number(d) - day_number(start);
}

Date advance(const Date& start, std::int64_t steps, TimeResolution res) {
  if (res == TimeResolution::monthly) {
    std::int64_t mn = month_number(start) + steps;
    Date d;
    d.year = static_cast<int>(mn >= 0 ? mn / 12 : (mn - 11) / 12);
    d.month = static_cast<int>(mn - static_cast<std::int64_t>(d.year) * 12) + 1;
    d.day = 0;
    return d;
  }
  // Invert days-from-civil (civil-from-days).
  std::int64_t z = day_number(start) + steps + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  Date d;
  d.day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  d.month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  d.year = static_cast<int>(y + (d.month <= 2));
  return d;
}

}  // namespace gtwnn
