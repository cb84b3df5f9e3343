#include "tsshap/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "tsshap/error.hpp"

namespace tsshap {

namespace {

constexpr const char* kDateFeatureNames[] = {
    "month",         "day-of-year",      "day-of-month",   "week-of-year",
    "week-of-month", "day-of-week",      "is-weekend",     "quarter",
    "season",        "fashion-season",   "is-month-start", "is-month-end",
    "is-quarter-start", "is-quarter-end", "is-year-start", "is-year-end",
    "is-leap-year"};

constexpr const char* kTimeFeatureNames[] = {"hour", "minute", "second"};

int season_of(int month) {
    // meteorological, Northern Hemisphere: 0=Winter(Dec-Feb), 1=Spring, 2=Summer, 3=Fall
    if (month == 12 || month <= 2) return 0;
    if (month <= 5) return 1;
    if (month <= 8) return 2;
    return 3;
}

}  // namespace

Eigen::Index FeatureConfig::max_lookback() const {
    Eigen::Index lb = 0;
    for (int l : lags) lb = std::max<Eigen::Index>(lb, l);
    if (seasonal_lag_count > 0)
        lb = std::max<Eigen::Index>(lb, static_cast<Eigen::Index>(seasonal_lag_count) * season_length);
    for (int w : rolling_windows) lb = std::max<Eigen::Index>(lb, w);
    if (expanding) lb = std::max<Eigen::Index>(lb, 1);
    return lb;
}

void FeatureConfig::validate() const {
    for (int l : lags)
        require(l >= 1, ErrorCode::ConfigInvalid, "lags must be positive");
    require(seasonal_lag_count >= 0, ErrorCode::ConfigInvalid, "seasonal lag count must be >= 0");
    if (seasonal_lag_count > 0)
        require(season_length >= 1, ErrorCode::ConfigInvalid,
                "season_length must be positive when seasonal lags are enabled");
    for (int w : rolling_windows)
        require(w >= 1, ErrorCode::ConfigInvalid, "rolling windows must be positive");
    require(trend_degree >= 0, ErrorCode::ConfigInvalid, "trend_degree must be >= 0");
    if (holidays)
        require(holidays->buffer_days >= 0, ErrorCode::ConfigInvalid,
                "holiday buffer must be >= 0");
}

Eigen::Index FeatureMatrix::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<Eigen::Index>(i);
    fail(ErrorCode::UnknownFeature, "no feature named '" + name + "'");
}

void FeatureMatrix::to_csv(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), ErrorCode::InputUnreadable, "cannot write '" + path + "'");
    out << "index";
    for (const auto& n : names) out << "," << n;
    out << "\n";
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        out << row_index[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", rows(r, c));
            out << "," << buf;
        }
        out << "\n";
    }
}

HolidayCalendar HolidayCalendar::load(const std::string& path) {
    std::ifstream in(path);
    if (!in.good())
        fail(ErrorCode::HolidayCalendarUnreadable, "cannot open holiday calendar '" + path + "'");
    HolidayCalendar cal;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            const UnixTime t = parse_iso8601(line);
            cal.days_.insert(t - (t % 86400 + 86400) % 86400);
        } catch (const Error&) {
            fail(ErrorCode::HolidayCalendarUnreadable,
                 "bad date '" + line + "' at line " + std::to_string(row) + " of '" + path + "'");
        }
    }
    return cal;
}

HolidayCalendar HolidayCalendar::from_dates(std::vector<UnixTime> days) {
    HolidayCalendar cal;
    for (UnixTime t : days) cal.days_.insert(t - (t % 86400 + 86400) % 86400);
    return cal;
}

bool HolidayCalendar::near_holiday(UnixTime t, int buffer_days) const {
    const UnixTime day = t - (t % 86400 + 86400) % 86400;
    const UnixTime lo = day - static_cast<UnixTime>(buffer_days) * 86400;
    const UnixTime hi = day + static_cast<UnixTime>(buffer_days) * 86400;
    auto it = days_.lower_bound(lo);
    return it != days_.end() && *it <= hi;
}

std::vector<std::pair<std::string, double>> encode_timestamp(UnixTime ts) {
    const CivilDateTime c = civil_from_unix(ts);
    const int dow = day_of_week(ts);
    const int doy = day_of_year(ts);
    const int dim = days_in_month(c.year, c.month);
    const int quarter = (c.month - 1) / 3 + 1;
    const bool q_start = c.day == 1 && (c.month == 1 || c.month == 4 || c.month == 7 || c.month == 10);
    const bool q_end = c.day == dim && (c.month == 3 || c.month == 6 || c.month == 9 || c.month == 12);

    std::vector<std::pair<std::string, double>> out;
    out.reserve(20);
    out.emplace_back("month", c.month);
    out.emplace_back("day-of-year", doy);
    out.emplace_back("day-of-month", c.day);
    out.emplace_back("week-of-year", iso_week_of_year(ts));
    out.emplace_back("week-of-month", (c.day + 6) / 7);
    out.emplace_back("day-of-week", dow);
    out.emplace_back("is-weekend", dow >= 5 ? 1.0 : 0.0);
    out.emplace_back("quarter", quarter);
    out.emplace_back("season", season_of(c.month));
    out.emplace_back("fashion-season", c.month <= 6 ? 0.0 : 1.0);
    out.emplace_back("is-month-start", c.day == 1 ? 1.0 : 0.0);
    out.emplace_back("is-month-end", c.day == dim ? 1.0 : 0.0);
    out.emplace_back("is-quarter-start", q_start ? 1.0 : 0.0);
    out.emplace_back("is-quarter-end", q_end ? 1.0 : 0.0);
    out.emplace_back("is-year-start", c.month == 1 && c.day == 1 ? 1.0 : 0.0);
    out.emplace_back("is-year-end", c.month == 12 && c.day == 31 ? 1.0 : 0.0);
    out.emplace_back("is-leap-year", is_leap_year(c.year) ? 1.0 : 0.0);
    out.emplace_back("hour", c.hour);
    out.emplace_back("minute", c.minute);
    out.emplace_back("second", c.second);
    return out;
}

namespace {

/// Shared walk over the feature registry so names, kinds and values always
/// agree on order. The emit callback receives (name, kind, value-producer).
template <typename Emit>
void for_each_feature(const TimeSeries& series, const FeatureConfig& config, Emit&& emit) {
    const std::string& base = series.name();
    for (int l : config.lags) {
        emit(base + "(t-" + std::to_string(l) + ")", FeatureKind::continuous, "lag", l, 0);
    }
    for (int j = 1; j <= config.seasonal_lag_count; ++j) {
        emit(base + "(t-" + std::to_string(j) + "*" + std::to_string(config.season_length) + ")",
             FeatureKind::continuous, "seasonal_lag", j * config.season_length, 0);
    }
    for (int w : config.rolling_windows) {
        const std::string span = "(t-1,t-" + std::to_string(w) + ")";
        emit(base + "-mean" + span, FeatureKind::continuous, "roll_mean", w, 0);
        emit(base + "-max" + span, FeatureKind::continuous, "roll_max", w, 0);
        emit(base + "-min" + span, FeatureKind::continuous, "roll_min", w, 0);
    }
    if (config.expanding) {
        emit(base + "-mean(0,t-1)", FeatureKind::continuous, "exp_mean", 0, 0);
        emit(base + "-max(0,t-1)", FeatureKind::continuous, "exp_max", 0, 0);
        emit(base + "-min(0,t-1)", FeatureKind::continuous, "exp_min", 0, 0);
    }
    for (int d = 1; d <= config.trend_degree; ++d) {
        emit(d == 1 ? std::string("t") : "t" + std::to_string(d), FeatureKind::continuous, "trend",
             d, 0);
    }
    if (config.date_features) {
        int i = 0;
        for (const char* n : kDateFeatureNames) emit(n, FeatureKind::ordinal, "date", i++, 0);
    }
    if (config.time_features) {
        int i = 0;
        for (const char* n : kTimeFeatureNames) emit(n, FeatureKind::ordinal, "time", i++, 0);
    }
    if (config.holidays) {
        emit("holiday", FeatureKind::ordinal, "holiday", 0, 0);
    }
    int r = 0;
    for (const auto& reg : config.regressor_columns) {
        emit(reg + "(t)", FeatureKind::continuous, "regressor", r++, 0);
    }
}

struct RowBuilder {
    const TimeSeries& series;
    const FeatureConfig& config;
    const HolidayCalendar* calendar;  // null unless config.holidays
    std::vector<std::pair<std::string, double>> date_cache;
    UnixTime date_cache_ts = std::numeric_limits<UnixTime>::min();

    double value_at(const std::string& kind, int arg, Eigen::Index t) {
        const Eigen::ArrayXd& y = series.values();
        if (kind == "lag" || kind == "seasonal_lag") return y[t - arg];
        if (kind == "roll_mean") return y.segment(t - arg, arg).mean();
        if (kind == "roll_max") return y.segment(t - arg, arg).maxCoeff();
        if (kind == "roll_min") return y.segment(t - arg, arg).minCoeff();
        if (kind == "exp_mean") return y.head(t).mean();
        if (kind == "exp_max") return y.head(t).maxCoeff();
        if (kind == "exp_min") return y.head(t).minCoeff();
        if (kind == "trend") return std::pow(static_cast<double>(t), arg);
        if (kind == "date" || kind == "time") {
            const UnixTime ts = series.timestamp(t);
            if (ts != date_cache_ts) {
                date_cache = encode_timestamp(ts);
                date_cache_ts = ts;
            }
            const int offset = kind == "date" ? 0 : 17;
            return date_cache[static_cast<std::size_t>(offset + arg)].second;
        }
        if (kind == "holiday")
            return calendar->near_holiday(series.timestamp(t), config.holidays->buffer_days) ? 1.0
                                                                                             : 0.0;
        if (kind == "regressor") {
            const auto& name = config.regressor_columns[static_cast<std::size_t>(arg)];
            const Eigen::ArrayXd& col = series.regressor(name);
            require(t < col.size(), ErrorCode::LengthMismatch,
                    "regressor '" + name + "' has no value at index " + std::to_string(t) +
                        " (future value required)");
            return col[t];
        }
        fail(ErrorCode::UnknownFeature, "internal: feature kind '" + kind + "'");
    }
};

HolidayCalendar load_calendar_if_needed(const FeatureConfig& config) {
    if (config.holidays) return HolidayCalendar::load(config.holidays->calendar_path);
    return HolidayCalendar::from_dates({});
}

void validate_regressors(const TimeSeries& series, const FeatureConfig& config) {
    for (const auto& name : config.regressor_columns)
        require(series.has_regressor(name), ErrorCode::UnknownRegressor,
                "series has no regressor column '" + name + "'");
}

}  // namespace

std::vector<std::string> feature_names(const TimeSeries& series, const FeatureConfig& config) {
    std::vector<std::string> names;
    for_each_feature(series, config,
                     [&](const std::string& name, FeatureKind, const char*, int, int) {
                         names.push_back(name);
                     });
    return names;
}

std::vector<FeatureKind> feature_kinds(const TimeSeries& series, const FeatureConfig& config) {
    std::vector<FeatureKind> kinds;
    for_each_feature(series, config,
                     [&](const std::string&, FeatureKind kind, const char*, int, int) {
                         kinds.push_back(kind);
                     });
    return kinds;
}

FeatureMatrix build_features(const TimeSeries& series, const FeatureConfig& config) {
    config.validate();
    validate_regressors(series, config);
    const Eigen::Index T = series.size();
    const Eigen::Index lookback = config.max_lookback();
    require(T > lookback, ErrorCode::InsufficientHistory,
            "series length " + std::to_string(T) + " does not exceed the longest lookback " +
                std::to_string(lookback));

    const HolidayCalendar calendar = load_calendar_if_needed(config);
    RowBuilder builder{series, config, &calendar, {}, std::numeric_limits<UnixTime>::min()};

    FeatureMatrix fm;
    fm.names = feature_names(series, config);
    fm.kinds = feature_kinds(series, config);
    const Eigen::Index d = fm.feature_count();
    const Eigen::Index n = T - lookback;
    fm.rows.resize(n, d);
    fm.row_index.reserve(static_cast<std::size_t>(n));

    for (Eigen::Index t = lookback; t < T; ++t) {
        Eigen::Index col = 0;
        for_each_feature(series, config,
                         [&](const std::string&, FeatureKind, const char* kind, int arg, int) {
                             fm.rows(t - lookback, col++) = builder.value_at(kind, arg, t);
                         });
        fm.row_index.push_back(t);
    }
    require(fm.rows.allFinite(), ErrorCode::NonFiniteValue, "feature matrix has non-finite values");
    return fm;
}

Eigen::RowVectorXd feature_row(const TimeSeries& series, const FeatureConfig& config,
                               Eigen::Index t) {
    config.validate();
    validate_regressors(series, config);
    require(t >= config.max_lookback(), ErrorCode::InsufficientHistory,
            "row " + std::to_string(t) + " needs more history than the series provides");
    require(t <= series.size(), ErrorCode::InsufficientHistory,
            "row index past the one-step-ahead position");

    const HolidayCalendar calendar = load_calendar_if_needed(config);
    RowBuilder builder{series, config, &calendar, {}, std::numeric_limits<UnixTime>::min()};
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(feature_names(series, config).size()));
    Eigen::Index col = 0;
    for_each_feature(series, config,
                     [&](const std::string&, FeatureKind, const char* kind, int arg, int) {
                         row[col++] = builder.value_at(kind, arg, t);
                     });
    return row;
}

TimeSeries extend_with_prediction(const TimeSeries& series, double predicted) {
    return series.extended_with(predicted);
}

}  // namespace tsshap
