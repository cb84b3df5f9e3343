#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "helpers.hpp"
#include "tsshap/error.hpp"
#include "tsshap/series.hpp"
#include "tsshap/split.hpp"

using namespace tsshap;
using tsshap::testing::series_of;
using tsshap::testing::stamps;

TEST_CASE("calendar round trips and facts") {
    const UnixTime t = parse_iso8601("2019-07-01");
    const CivilDateTime c = civil_from_unix(t);
    CHECK(c.year == 2019);
    CHECK(c.month == 7);
    CHECK(c.day == 1);
    CHECK(unix_from_civil(c) == t);
    CHECK(day_of_week(t) == 0);  // Monday
    CHECK(format_iso8601(t) == "2019-07-01");

    CHECK(parse_iso8601("2020-02-29T06:30:15") ==
          unix_from_civil({2020, 2, 29, 6, 30, 15}));
    CHECK_THROWS_AS(parse_iso8601("2019-02-29"), Error);
    CHECK_THROWS_AS(parse_iso8601("garbage"), Error);

    CHECK(is_leap_year(2020));
    CHECK(!is_leap_year(1900));
    CHECK(is_leap_year(2000));
    CHECK(days_in_month(2020, 2) == 29);
    CHECK(day_of_year(parse_iso8601("2019-12-31")) == 365);
    CHECK(day_of_year(parse_iso8601("2020-12-31")) == 366);
}

TEST_CASE("iso week numbers") {
    CHECK(iso_week_of_year(parse_iso8601("2019-12-31")) == 1);   // belongs to 2020-W01
    CHECK(iso_week_of_year(parse_iso8601("2016-01-01")) == 53);  // 2015-W53
    CHECK(iso_week_of_year(parse_iso8601("2015-12-31")) == 53);
    CHECK(iso_week_of_year(parse_iso8601("2019-01-15")) == 3);
    CHECK(iso_week_of_year(parse_iso8601("2020-12-31")) == 53);  // 2020 is a 53-week year
}

TEST_CASE("monthly stepping clamps the day") {
    const UnixTime jan31 = parse_iso8601("2019-01-31");
    const UnixTime feb28 = add_period(jan31, Periodicity::monthly, 1);
    CHECK(format_iso8601(feb28) == "2019-02-28");
    CHECK(is_one_period_apart(jan31, feb28, Periodicity::monthly));
    // month-end anchoring is also accepted
    CHECK(is_one_period_apart(feb28, parse_iso8601("2019-03-31"), Periodicity::monthly));
    CHECK(is_one_period_apart(feb28, parse_iso8601("2019-03-28"), Periodicity::monthly));
    CHECK(!is_one_period_apart(jan31, parse_iso8601("2019-03-31"), Periodicity::monthly));
}

TEST_CASE("make_series validates") {
    SUBCASE("constructor identity") {
        const TimeSeries s = series_of({1.0, 2.0, 3.0});
        CHECK(s.size() == 3);
        CHECK(s.value(2) == 3.0);
    }
    SUBCASE("gap not equal to declared period") {
        auto ts = stamps(2, Periodicity::daily);
        ts[1] += 86400;  // skips a day
        CHECK_THROWS_WITH_AS(make_series(ts, Eigen::ArrayXd::Zero(2), Periodicity::daily),
                             doctest::Contains("PeriodicityViolation"), Error);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_WITH_AS(
            make_series(stamps(3, Periodicity::daily), Eigen::ArrayXd::Zero(2),
                        Periodicity::daily),
            doctest::Contains("LengthMismatch"), Error);
    }
    SUBCASE("non-monotonic timestamps") {
        auto ts = stamps(3, Periodicity::daily);
        std::swap(ts[1], ts[2]);
        CHECK_THROWS_WITH_AS(make_series(ts, Eigen::ArrayXd::Zero(3), Periodicity::daily),
                             doctest::Contains("NonMonotonic"), Error);
    }
    SUBCASE("future regressor values accepted, length T+H") {
        Eigen::ArrayXd reg(5);
        reg << 1, 2, 3, 4, 5;
        const TimeSeries s = make_series(stamps(3, Periodicity::daily),
                                         Eigen::ArrayXd::Constant(3, 1.0), Periodicity::daily,
                                         {"discount"}, {reg});
        CHECK(s.horizon_extension() == 2);
        CHECK(s.regressor("discount").size() == 5);
    }
    SUBCASE("NaN rejected") {
        Eigen::ArrayXd v(2);
        v << 1.0, std::nan("");
        CHECK_THROWS_AS(make_series(stamps(2, Periodicity::daily), v, Periodicity::daily), Error);
    }
}

TEST_CASE("expanding window splits") {
    SUBCASE("T=10 initial=6 H=2 step=2") {
        const auto splits = expanding_window_splits(10, 6, Horizon(2), 2);
        REQUIRE(splits.size() == 2);
        CHECK(splits[0].train_end == 6);
        CHECK(splits[0].test_begin == 6);
        CHECK(splits[0].test_end == 8);
        CHECK(splits[1].train_end == 8);
        CHECK(splits[1].test_end == 10);
    }
    SUBCASE("insufficient history") {
        CHECK_THROWS_WITH_AS(expanding_window_splits(5, 4, Horizon(2), 1),
                             doctest::Contains("InsufficientHistory"), Error);
    }
    SUBCASE("T=12 initial=6 H=3 step=3 drops the partial tail") {
        const auto splits = expanding_window_splits(12, 6, Horizon(3), 3);
        REQUIRE(splits.size() == 2);
        CHECK(splits[0].train_end == 6);
        CHECK(splits[0].test_end == 9);
        CHECK(splits[1].train_end == 9);
        CHECK(splits[1].test_end == 12);
    }
    SUBCASE("test ranges tile the tail without gaps or overlap") {
        for (int T : {20, 37, 80}) {
            for (int H : {1, 3, 5}) {
                for (int step : {1, 2, H}) {
                    const auto splits = expanding_window_splits(T, 8, Horizon(H), step);
                    REQUIRE(!splits.empty());
                    CHECK(splits.front().train_end == 8);
                    for (std::size_t i = 0; i < splits.size(); ++i) {
                        CHECK(splits[i].test_begin == splits[i].train_end);
                        CHECK(splits[i].test_end == splits[i].test_begin + H);
                        CHECK(splits[i].test_end <= T);
                        if (i > 0)
                            CHECK(splits[i].train_end == splits[i - 1].train_end + step);
                    }
                    if (step == H) {
                        // union of test ranges is contiguous when windows tile
                        for (std::size_t i = 1; i < splits.size(); ++i)
                            CHECK(splits[i].test_begin == splits[i - 1].test_end);
                    }
                }
            }
        }
    }
    SUBCASE("deterministic") {
        const auto a = expanding_window_splits(40, 11, Horizon(4), 3);
        const auto b = expanding_window_splits(40, 11, Horizon(4), 3);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].train_end == b[i].train_end);
    }
}

TEST_CASE("splitter defaults") {
    const ResolvedSplitter r = resolve_splitter({}, 100, Horizon(5), 10);
    CHECK(r.initial_train == 50);  // ceil(0.5*T) > 2*lookback
    CHECK(r.step == 5);
    const ResolvedSplitter r2 = resolve_splitter({}, 100, Horizon(5), 30);
    CHECK(r2.initial_train == 60);  // 2*lookback wins
    const ResolvedSplitter r3 = resolve_splitter({17, 2}, 100, Horizon(5), 30);
    CHECK(r3.initial_train == 17);
    CHECK(r3.step == 2);
}

TEST_CASE("csv ingestion") {
    const std::string dir = tsshap::testing::test_tmp_dir();
    SUBCASE("round trip with regressors and future rows") {
        const std::string path = dir + "/csv_future.csv";
        std::ofstream out(path);
        out << "timestamp,sales,discount\n";
        out << "2019-01-01,10,0.1\n2019-01-02,11,0.2\n2019-01-03,12,0.0\n";
        out << "2019-01-04,,0.5\n2019-01-05,,0.6\n";  // future regressor rows
        out.close();
        const TimeSeries s = read_csv(path, Periodicity::daily);
        CHECK(s.size() == 3);
        CHECK(s.name() == "sales");
        CHECK(s.horizon_extension() == 2);
        CHECK(s.regressor("discount")[4] == 0.6);

        const std::string back = dir + "/csv_back.csv";
        write_csv(s, back);
        const TimeSeries s2 = read_csv(back, Periodicity::daily);
        CHECK(s2.size() == 3);
        CHECK(s2.horizon_extension() == 2);
        CHECK(s2.values().isApprox(s.values()));
    }
    SUBCASE("missing value rejected by default, forward-filled on request") {
        const std::string path = dir + "/csv_missing.csv";
        std::ofstream out(path);
        out << "timestamp,value\n2019-01-01,1\n2019-01-02,\n2019-01-03,3\n";
        out.close();
        CHECK_THROWS_AS(read_csv(path, Periodicity::daily), Error);
        const TimeSeries s = read_csv(path, Periodicity::daily, MissingPolicy::forward_fill);
        CHECK(s.value(1) == 1.0);
    }
    SUBCASE("header must start with timestamp") {
        const std::string path = dir + "/csv_bad_header.csv";
        std::ofstream out(path);
        out << "date,value\n2019-01-01,1\n";
        out.close();
        CHECK_THROWS_WITH_AS(read_csv(path, Periodicity::daily),
                             doctest::Contains("timestamp"), Error);
    }
    SUBCASE("auto periodicity") {
        const std::string path = dir + "/csv_monthly.csv";
        std::ofstream out(path);
        out << "timestamp,value\n2019-01-31,1\n2019-02-28,2\n2019-03-31,3\n";
        out.close();
        const TimeSeries s = read_csv_auto(path);
        CHECK(s.periodicity() == Periodicity::monthly);
    }
    SUBCASE("unreadable input") {
        CHECK_THROWS_WITH_AS(read_csv(dir + "/nope.csv", Periodicity::daily),
                             doctest::Contains("InputUnreadable"), Error);
    }
}

TEST_CASE("series prefix and extension") {
    Eigen::ArrayXd reg(6);
    reg << 1, 2, 3, 4, 5, 6;
    const TimeSeries s = make_series(stamps(4, Periodicity::daily),
                                     Eigen::ArrayXd::LinSpaced(4, 1, 4), Periodicity::daily,
                                     {"z"}, {reg});
    const TimeSeries p = s.prefix(2, 2);
    CHECK(p.size() == 2);
    CHECK(p.regressor("z").size() == 4);
    CHECK(p.horizon_extension() == 2);

    const TimeSeries e = s.extended_with(9.0);
    CHECK(e.size() == 5);
    CHECK(e.value(4) == 9.0);
    CHECK(e.timestamp(4) == add_period(s.timestamp(3), Periodicity::daily, 1));
    // two successive extensions keep the periodicity invariant
    const TimeSeries e2 = e.extended_with(10.0);
    CHECK(is_one_period_apart(e2.timestamp(4), e2.timestamp(5), Periodicity::daily));
    CHECK_THROWS_AS(s.extended_with(std::nan("")), Error);
}
