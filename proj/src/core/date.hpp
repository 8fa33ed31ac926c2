#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gtwnn {

enum class TimeResolution { monthly, daily };

inline const char* to_string(TimeResolution r) {
  return r == TimeResolution::monthly ? "monthly" : "daily";
}
TimeResolution time_resolution_from_string(std::string_view s);

// Calendar date; day == 0 marks a month-resolution date (YYYY-MM).
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  bool monthly() const { return day == 0; }
  bool operator==(const Date&) const = default;
};

// Accepts YYYY-MM and YYYY-MM-DD; anything else throws ErrorKind::parse.
Date parse_date(std::string_view text);

std::string format_date(const Date& d);

// Months since year 0 (monthly dates) — a linear index usable for spans.
std::int64_t month_number(const Date& d);

// Days since 1970-01-01 (daily dates), proleptic Gregorian.
std::int64_t day_number(const Date& d);

// Linear step index of `d` at resolution `res`, counted from `start`.
std::int64_t step_index(const Date& d, const Date& start, TimeResolution res);

// The date `steps` steps after `start` at resolution `res`.
Date advance(const Date& start, std::int64_t steps, TimeResolution res);

}  // namespace gtwnn
