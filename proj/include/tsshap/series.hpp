#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tsshap/calendar.hpp"

namespace tsshap {

/// Forecast horizon, H >= 1 future steps.
struct Horizon {
    int steps = 1;
    explicit Horizon(int h);
};

/// One observation: ordinal index plus its UTC timestamp.
struct TimePoint {
    Eigen::Index index = 0;
    UnixTime timestamp = 0;
};

enum class MissingPolicy { reject, forward_fill };

/// Immutable univariate series with optional named regressor columns.
///
/// Values have length T; a regressor column may carry T + H values when its
/// future values are known in advance, in which case horizon_extension()
/// reports H. Timestamps are strictly increasing and equally spaced at the
/// declared periodicity (calendar-aware for weekly/monthly).
class TimeSeries {
public:
    TimeSeries() = default;

    Eigen::Index size() const { return static_cast<Eigen::Index>(timestamps_.size()); }
    const std::string& name() const { return name_; }
    Periodicity periodicity() const { return periodicity_; }

    const Eigen::ArrayXd& values() const { return values_; }
    double value(Eigen::Index t) const { return values_[t]; }

    /// Timestamp for index t; t may extend past the end (future periods are
    /// derived by calendar stepping).
    UnixTime timestamp(Eigen::Index t) const;
    TimePoint point(Eigen::Index t) const { return {t, timestamp(t)}; }

    Eigen::Index regressor_count() const { return static_cast<Eigen::Index>(regressors_.size()); }
    const std::vector<std::string>& regressor_names() const { return regressor_names_; }
    bool has_regressor(const std::string& name) const;
    /// Full column (length T or T + horizon_extension).
    const Eigen::ArrayXd& regressor(const std::string& name) const;
    /// Number of future steps every extended regressor column covers
    /// (0 when all columns have length T).
    Eigen::Index horizon_extension() const { return horizon_extension_; }

    /// First n observations; regressor columns keep up to n + future_len
    /// entries so backtest windows still see their future regressor values.
    TimeSeries prefix(Eigen::Index n, Eigen::Index future_len = 0) const;

    /// New series of length T+1 whose last value is `predicted`, timestamp
    /// advanced by one period. Regressor columns are only kept when they
    /// still cover the extended range.
    TimeSeries extended_with(double predicted) const;

    /// Same timestamps/regressors, replaced values (used by perturbation).
    TimeSeries with_values(Eigen::ArrayXd values) const;

    static TimeSeries make(std::vector<UnixTime> timestamps, Eigen::ArrayXd values,
                           Periodicity periodicity,
                           std::vector<std::string> regressor_names = {},
                           std::vector<Eigen::ArrayXd> regressor_values = {},
                           std::string name = "value");

private:
    std::string name_ = "value";
    std::vector<UnixTime> timestamps_;
    Eigen::ArrayXd values_;
    Periodicity periodicity_ = Periodicity::daily;
    std::vector<std::string> regressor_names_;
    std::vector<Eigen::ArrayXd> regressors_;
    Eigen::Index horizon_extension_ = 0;
};

/// Spec'd constructor: validates monotonicity, spacing and column lengths.
TimeSeries make_series(const std::vector<UnixTime>& timestamps, const Eigen::ArrayXd& values,
                       Periodicity periodicity,
                       const std::vector<std::string>& regressor_names = {},
                       const std::vector<Eigen::ArrayXd>& regressor_values = {},
                       const std::string& name = "value");

/// CSV schema: header row mandatory; first column `timestamp` (ISO-8601),
/// second column the target (its header becomes the series name), remaining
/// columns named regressors. Trailing rows with an empty target cell but
/// populated regressors supply future regressor values.
TimeSeries read_csv(const std::string& path, Periodicity periodicity,
                    MissingPolicy missing = MissingPolicy::reject);

/// Same, inferring periodicity from the first timestamp gap.
TimeSeries read_csv_auto(const std::string& path, MissingPolicy missing = MissingPolicy::reject);

Periodicity infer_periodicity(const std::vector<UnixTime>& timestamps);

void write_csv(const TimeSeries& series, const std::string& path);

}  // namespace tsshap
