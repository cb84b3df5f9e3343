#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tsshap/series.hpp"

namespace tsshap {

/// Distinguishes real-valued features from integer encodings; dependence
/// grids use the distinct observed values for ordinals.
enum class FeatureKind { continuous, ordinal };

struct HolidayConfig {
    std::string calendar_path;  // one ISO date per line, '#' comments allowed
    int buffer_days = 0;        // a date within +/- buffer of a holiday counts
};

/// Which interpretable features to build. Feature names are derived from the
/// series name, e.g. sales(t-3), sales-max(t-1,t-6), sales-mean(0,t-1).
struct FeatureConfig {
    std::vector<int> lags;                      // y(t-l)
    int seasonal_lag_count = 0;                 // y(t-j*m) for j=1..count
    int season_length = 0;                      // m
    std::vector<int> rolling_windows;           // mean/max/min over [t-w, t-1]
    bool expanding = false;                     // mean/max/min over [0, t-1]
    int trend_degree = 0;                       // t, t^2, ... t^degree
    bool date_features = false;
    bool time_features = false;
    std::optional<HolidayConfig> holidays;
    std::vector<std::string> regressor_columns;  // z_k(t) pass-through

    /// Longest history any row needs before it becomes computable.
    Eigen::Index max_lookback() const;
    void validate() const;
};

/// Rows of feature values aligned to time indices, with the name registry.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<FeatureKind> kinds;
    Eigen::MatrixXd rows;                  // n x d
    std::vector<Eigen::Index> row_index;   // time index of each row

    Eigen::Index feature_count() const { return static_cast<Eigen::Index>(names.size()); }
    Eigen::Index row_count() const { return rows.rows(); }
    /// Index of a named feature, or an UnknownFeature error.
    Eigen::Index index_of(const std::string& name) const;
    void to_csv(const std::string& path) const;
};

/// Dates loaded from a calendar file; membership is tested with a day buffer.
class HolidayCalendar {
public:
    static HolidayCalendar load(const std::string& path);
    static HolidayCalendar from_dates(std::vector<UnixTime> days);
    bool near_holiday(UnixTime t, int buffer_days) const;
    std::size_t size() const { return days_.size(); }

private:
    std::set<UnixTime> days_;  // midnight-normalized
};

/// All Table-style date/time encodings of a timestamp, in registry order.
std::vector<std::pair<std::string, double>> encode_timestamp(UnixTime ts);

/// Names (and kinds) build_features would emit for this series and config.
std::vector<std::string> feature_names(const TimeSeries& series, const FeatureConfig& config);
std::vector<FeatureKind> feature_kinds(const TimeSeries& series, const FeatureConfig& config);

/// Feature matrix over every time index whose lookbacks are satisfiable.
/// Row t never reads y(t') for t' >= t; regressors are read at t.
FeatureMatrix build_features(const TimeSeries& series, const FeatureConfig& config);

/// Single row at time index t; t == series.size() gives the one-step-ahead
/// row used for forecasting (timestamp extrapolated by one period).
Eigen::RowVectorXd feature_row(const TimeSeries& series, const FeatureConfig& config,
                               Eigen::Index t);

/// Append one predicted value, advancing the timestamp by one period.
TimeSeries extend_with_prediction(const TimeSeries& series, double predicted);

}  // namespace tsshap
