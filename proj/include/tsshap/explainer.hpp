#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tsshap/backtest.hpp"
#include "tsshap/features.hpp"
#include "tsshap/forecasters.hpp"
#include "tsshap/gbt.hpp"
#include "tsshap/treeshap.hpp"

namespace tsshap {

enum class Scope { local, semi_local, global };

const char* scope_name(Scope s) noexcept;
Scope parse_scope(const std::string& name);

/// The trained surrogate: a tree ensemble fit to the step-1 backtested
/// forecasts (never the raw observations), plus everything needed to rebuild
/// its feature rows.
struct SurrogateModel {
    TreeEnsemble ensemble;
    FeatureConfig feature_config;
    std::vector<Eigen::Index> training_index;  // time indices of the training targets
    int horizon = 0;                           // H the backtest ran with
    ResolvedSplitter splitter;                 // resolved windows, kept for reporting
};

struct Explanation {
    Scope scope = Scope::local;
    int step_begin = 0;  // 1..H for local/semi-local; 0 for global
    int step_end = 0;
    Eigen::VectorXd phi;  // signed SHAP (local/semi-local) or mean |phi| (global)
    double base_value = 0.0;
    double prediction = 0.0;  // surrogate output (local: step; semi-local: interval mean)
    std::vector<std::string> feature_names;
};

/// PDP/SDP curves for one feature over a value grid.
struct CurveSet {
    std::string feature;
    Scope scope = Scope::global;
    Eigen::VectorXd grid;
    Eigen::VectorXd pdp;
    Eigen::VectorXd sdp;
};

/// Backtest the forecaster, then fit the surrogate on (features at t ->
/// step-1 backtest value at t) over the covered origins. When out_backtest
/// is non-null the forecaster's backtest is returned through it.
SurrogateModel fit_explainer(const TimeSeries& series, Forecaster& forecaster, Horizon H,
                             const FeatureConfig& features, const GbtParams& gbt,
                             const SplitterConfig& splitter,
                             BacktestResult* out_backtest = nullptr);

/// Recursive surrogate forecast from the end of `series`: step 1 from the
/// observed history, later steps from the history extended with the
/// surrogate's own predictions.
ForecastPath surrogate_forecast(const SurrogateModel& model, const TimeSeries& series, Horizon H);

/// Feature rows the recursion uses, one per step (row h explains step h).
Eigen::MatrixXd surrogate_forecast_rows(const SurrogateModel& model, const TimeSeries& series,
                                        Horizon H);

Explanation explain_local(const SurrogateModel& model, const TimeSeries& series, int step);
Explanation explain_semi_local(const SurrogateModel& model, const TimeSeries& series,
                               int step_begin, int step_end);
Explanation explain_global(const SurrogateModel& model, const TimeSeries& series);

/// Surrogate output (PDP) and this feature's SHAP value (SDP) as the feature
/// sweeps a grid over its observed training range. Local scope substitutes
/// into the step row; global averages over all training rows; semi-local
/// averages the local curves over the interval.
CurveSet dependence_curves(const SurrogateModel& model, const TimeSeries& series,
                           const std::string& feature, Scope scope, int grid_size, int step_begin = 1,
                           int step_end = 0);

/// Training feature matrix the surrogate was fit on (rebuilt from the series).
FeatureMatrix surrogate_training_matrix(const SurrogateModel& model, const TimeSeries& series);

/// The surrogate's mimic of the backtest: a recursive forecast from every
/// split origin, flattened in split order (matches BacktestResult::paths).
Eigen::ArrayXd surrogate_backtest_path(const SurrogateModel& model, const TimeSeries& series,
                                       const BacktestResult& backtest);

}  // namespace tsshap
