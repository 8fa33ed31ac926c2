#include "doctest.h"

#include <set>
#include <vector>

#include "core/common.hpp"
#include "core/date.hpp"
#include "core/rng.hpp"

using namespace gtwnn;

TEST_CASE("rng streams are deterministic per seed") {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    double va = a.uniform01();
    CHECK(va == b.uniform01());
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  bool all_equal = true;
  Rng a2(123);
  for (int i = 0; i < 100; ++i) {
    (void)a2.uniform01();
  }
  for (int i = 0; i < 10; ++i) {
    all_equal = all_equal && (a.uniform01() == c.uniform01());
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("derive_seed separates named streams") {
  std::set<std::uint64_t> seeds;
  for (const char* name : {"shuffle", "init", "nas", "synth", "split"}) {
    seeds.insert(derive_seed(7, name));
  }
  CHECK(seeds.size() == 5);
  CHECK(derive_seed(7, "shuffle") == derive_seed(7, "shuffle"));
  CHECK(derive_seed(7, "shuffle") != derive_seed(8, "shuffle"));
}

TEST_CASE("normal draws have sane moments") {
  Rng rng(99);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.03);
  CHECK(std::fabs(var - 1.0) < 0.05);
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(5);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> orig = v;
  rng.shuffle(v);
  std::multiset<int> a(v.begin(), v.end()), b(orig.begin(), orig.end());
  CHECK(a == b);
}

TEST_CASE("date parsing accepts both forms and validates") {
  Date m = parse_date("2014-03");
  CHECK(m.year == 2014);
  CHECK(m.month == 3);
  CHECK(m.monthly());
  Date d = parse_date("2016-02-29");
  CHECK(d.day == 29);
  CHECK_FALSE(d.monthly());
  CHECK_THROWS_AS(parse_date("2015-02-29"), Error);  // not a leap year
  CHECK_THROWS_AS(parse_date("2015-13"), Error);
  CHECK_THROWS_AS(parse_date("2015"), Error);
  CHECK_THROWS_AS(parse_date("2015-00-01"), Error);
  CHECK_THROWS_AS(parse_date("garbage"), Error);
}

TEST_CASE("date formatting round-trips") {
  CHECK(format_date(parse_date("2014-03")) == "2014-03");
  CHECK(format_date(parse_date("2009-12-05")) == "2009-12-05");
}

TEST_CASE("step_index and advance are inverse") {
  Date start = parse_date("2013-11");
  CHECK(step_index(parse_date("2014-02"), start, TimeResolution::monthly) == 3);
  CHECK(advance(start, 3, TimeResolution::monthly) == parse_date("2014-02"));

  Date dstart = parse_date("2016-12-30");
  CHECK(step_index(parse_date("2017-01-02"), dstart, TimeResolution::daily) == 3);
  CHECK(advance(dstart, 3, TimeResolution::daily) == parse_date("2017-01-02"));
}

TEST_CASE("daily stepping of a month-resolution date is an error") {
  Date monthly = parse_date("2014-03");
  CHECK_THROWS_AS(step_index(monthly, parse_date("2014-01-01"), TimeResolution::daily), Error);
}
