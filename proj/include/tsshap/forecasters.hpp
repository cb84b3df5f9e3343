#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "tsshap/features.hpp"
#include "tsshap/gbt.hpp"
#include "tsshap/series.hpp"

namespace tsshap {

/// H forecast values issued from the end of a history of length `origin`.
struct ForecastPath {
    Eigen::Index origin = 0;
    Eigen::ArrayXd values;
};

/// The black-box interface the explainer sees. fit() trains whatever state
/// the model needs; predict() forecasts H steps past the end of the given
/// history (future regressor values, when supported, ride inside the
/// history's extended columns). Classical forecasters recompute from the
/// history on every call and must be refit per backtest window; the ML
/// reduction forecaster is fit once and conditioned per window.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    virtual std::string name() const = 0;
    virtual bool supports_regressors() const { return false; }
    virtual bool requires_refit_per_window() const { return true; }

    void fit(const TimeSeries& history);
    ForecastPath predict(const TimeSeries& history, Horizon H) const;

    virtual std::unique_ptr<Forecaster> clone() const = 0;
    bool fitted() const { return fitted_; }

protected:
    virtual void do_fit(const TimeSeries& history) = 0;
    virtual Eigen::ArrayXd do_predict(const TimeSeries& history, Horizon H) const = 0;

private:
    bool fitted_ = false;
};

/// Forecast is the last observation, flat across the horizon.
ForecastPath naive_predict(const TimeSeries& history, Horizon H);
/// Forecast at T+h is y(T + h - m*ceil(h/m)), the same season's observation.
ForecastPath seasonal_naive_predict(const TimeSeries& history, Horizon H, int season_length);
/// Mean of the last k values; multi-step applies the rule recursively over
/// the observations extended with prior forecasts.
ForecastPath moving_average_predict(const TimeSeries& history, Horizon H, int order);
/// Simple exponential smoothing, l(1) = y(1); all steps equal l(T).
ForecastPath ses_predict(const TimeSeries& history, Horizon H, double alpha);

class NaiveForecaster final : public Forecaster {
public:
    std::string name() const override { return "naive"; }
    std::unique_ptr<Forecaster> clone() const override;

protected:
    void do_fit(const TimeSeries&) override {}
    Eigen::ArrayXd do_predict(const TimeSeries& history, Horizon H) const override;
};

class SeasonalNaiveForecaster final : public Forecaster {
public:
    explicit SeasonalNaiveForecaster(int season_length);
    std::string name() const override { return "seasonal_naive"; }
    std::unique_ptr<Forecaster> clone() const override;
    int season_length() const { return season_length_; }

protected:
    void do_fit(const TimeSeries& history) override;
    Eigen::ArrayXd do_predict(const TimeSeries& history, Horizon H) const override;

private:
    int season_length_;
};

class MovingAverageForecaster final : public Forecaster {
public:
    explicit MovingAverageForecaster(int order);
    std::string name() const override { return "moving_average"; }
    std::unique_ptr<Forecaster> clone() const override;
    int order() const { return order_; }

protected:
    void do_fit(const TimeSeries& history) override;
    Eigen::ArrayXd do_predict(const TimeSeries& history, Horizon H) const override;

private:
    int order_;
};

class SimpleExpSmoothingForecaster final : public Forecaster {
public:
    explicit SimpleExpSmoothingForecaster(double alpha);
    std::string name() const override { return "ses"; }
    std::unique_ptr<Forecaster> clone() const override;
    double alpha() const { return alpha_; }

protected:
    void do_fit(const TimeSeries&) override {}
    Eigen::ArrayXd do_predict(const TimeSeries& history, Horizon H) const override;

private:
    double alpha_;
};

/// Forecasting-to-regression reduction: one GBT trained on interpretable
/// features predicting y one step ahead, applied recursively. Fit once on
/// the whole history (requires_refit_per_window = false).
class GbtReductionForecaster final : public Forecaster {
public:
    GbtReductionForecaster(FeatureConfig features, GbtParams params);
    std::string name() const override { return "gbt_reduction"; }
    bool supports_regressors() const override { return true; }
    bool requires_refit_per_window() const override { return false; }
    std::unique_ptr<Forecaster> clone() const override;
    const TreeEnsemble& model() const;

protected:
    void do_fit(const TimeSeries& history) override;
    Eigen::ArrayXd do_predict(const TimeSeries& history, Horizon H) const override;

private:
    FeatureConfig features_;
    GbtParams params_;
    TreeEnsemble model_;
};

/// Convenience: reduction forecaster already fit on `history`.
std::unique_ptr<Forecaster> gbt_reduction_forecaster(const TimeSeries& history,
                                                     const FeatureConfig& features,
                                                     const GbtParams& params);

}  // namespace tsshap
