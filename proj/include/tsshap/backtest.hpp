#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tsshap/forecasters.hpp"
#include "tsshap/series.hpp"
#include "tsshap/split.hpp"

namespace tsshap {

/// Backtested historical forecasts. paths(i, h-1) holds the step-h forecast
/// of split i, which lands at time index origins[i] + h - 1; the step-h
/// series is therefore defined exactly on {origin + h - 1}.
struct BacktestResult {
    int horizon = 0;
    std::vector<Eigen::Index> origins;  // train_end per split
    Eigen::MatrixXd paths;              // n_splits x H

    Eigen::Index split_count() const { return static_cast<Eigen::Index>(origins.size()); }
    Eigen::Index coverage_begin() const { return origins.front(); }
    Eigen::Index coverage_end() const { return origins.back() + horizon; }

    /// (time index, value) pairs of the step-h backtest series, h in 1..H.
    std::vector<std::pair<Eigen::Index, double>> step_series(int h) const;
    /// One column per horizon step, empty cells where a step is undefined.
    void to_csv(const std::string& path) const;
};

/// Fit/predict the forecaster over expanding-window splits. Forecasters with
/// requires_refit_per_window are fit on each train partition (no lookahead);
/// the rest are fit once on the whole series. Future regressor slices ride
/// inside the per-split history when the forecaster supports them.
BacktestResult run_backtest(const TimeSeries& series, Forecaster& forecaster, Horizon H,
                            const SplitterConfig& splitter, Eigen::Index max_lookback = 0);

struct FidelityMetrics {
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;
    double mase = 0.0;
};

/// Error metrics between the forecaster's path (reference a) and the
/// surrogate's path (b). MAPE skips zero reference points; MASE scales by
/// the in-sample one-step naive MAE of the original series.
FidelityMetrics fidelity_metrics(const Eigen::Ref<const Eigen::ArrayXd>& forecaster_path,
                                 const Eigen::Ref<const Eigen::ArrayXd>& surrogate_path,
                                 const TimeSeries& insample);

}  // namespace tsshap
