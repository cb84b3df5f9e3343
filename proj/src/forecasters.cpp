#include "tsshap/forecasters.hpp"

#include <cmath>

#include "tsshap/error.hpp"

namespace tsshap {

void Forecaster::fit(const TimeSeries& history) {
    require(history.size() >= 1, ErrorCode::EmptyHistory, "cannot fit on an empty history");
    do_fit(history);
    fitted_ = true;
}

ForecastPath Forecaster::predict(const TimeSeries& history, Horizon H) const {
    require(fitted_, ErrorCode::NotFitted, "predict called before fit");
    require(history.size() >= 1, ErrorCode::EmptyHistory, "cannot predict from an empty history");
    ForecastPath path{history.size(), do_predict(history, H)};
    require(path.values.size() == H.steps, ErrorCode::LengthMismatch,
            "forecaster returned the wrong number of steps");
    require(path.values.isFinite().all(), ErrorCode::NonFiniteValue,
            "forecaster produced non-finite values");
    return path;
}

ForecastPath naive_predict(const TimeSeries& history, Horizon H) {
    require(history.size() >= 1, ErrorCode::EmptyHistory, "naive forecast needs history");
    return {history.size(),
            Eigen::ArrayXd::Constant(H.steps, history.value(history.size() - 1))};
}

ForecastPath seasonal_naive_predict(const TimeSeries& history, Horizon H, int season_length) {
    const Eigen::Index T = history.size();
    require(season_length >= 1, ErrorCode::ConfigInvalid, "season length must be >= 1");
    require(T >= season_length, ErrorCode::SeasonTooLong,
            "history length " + std::to_string(T) + " < season length " +
                std::to_string(season_length));
    Eigen::ArrayXd out(H.steps);
    for (int h = 1; h <= H.steps; ++h) {
        const int wraps = (h + season_length - 1) / season_length;  // ceil(h/m)
        out[h - 1] = history.value(T - 1 + h - static_cast<Eigen::Index>(wraps) * season_length);
    }
    return {T, std::move(out)};
}

ForecastPath moving_average_predict(const TimeSeries& history, Horizon H, int order) {
    const Eigen::Index T = history.size();
    require(order >= 1, ErrorCode::ConfigInvalid, "order must be >= 1");
    require(T >= order, ErrorCode::OrderTooLong,
            "history length " + std::to_string(T) + " < order " + std::to_string(order));
    // extended sequence: observations followed by prior forecasts
    Eigen::ArrayXd window = history.values().tail(order);
    Eigen::ArrayXd out(H.steps);
    for (int h = 0; h < H.steps; ++h) {
        const double f = window.mean();
        out[h] = f;
        if (order > 1) {
            Eigen::ArrayXd shifted(order);
            shifted.head(order - 1) = window.tail(order - 1);
            shifted[order - 1] = f;
            window = std::move(shifted);
        } else {
            window[0] = f;
        }
    }
    return {T, std::move(out)};
}

ForecastPath ses_predict(const TimeSeries& history, Horizon H, double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, ErrorCode::AlphaOutOfRange,
            "alpha must be in (0, 1], got " + std::to_string(alpha));
    const Eigen::Index T = history.size();
    require(T >= 1, ErrorCode::EmptyHistory, "ses forecast needs history");
    double level = history.value(0);
    for (Eigen::Index t = 1; t < T; ++t) level = alpha * history.value(t) + (1.0 - alpha) * level;
    return {T, Eigen::ArrayXd::Constant(H.steps, level)};
}

std::unique_ptr<Forecaster> NaiveForecaster::clone() const {
    return std::make_unique<NaiveForecaster>(*this);
}

Eigen::ArrayXd NaiveForecaster::do_predict(const TimeSeries& history, Horizon H) const {
    return naive_predict(history, H).values;
}

SeasonalNaiveForecaster::SeasonalNaiveForecaster(int season_length)
    : season_length_(season_length) {
    require(season_length >= 1, ErrorCode::ConfigInvalid, "season length must be >= 1");
}

std::unique_ptr<Forecaster> SeasonalNaiveForecaster::clone() const {
    return std::make_unique<SeasonalNaiveForecaster>(*this);
}

void SeasonalNaiveForecaster::do_fit(const TimeSeries& history) {
    require(history.size() >= season_length_, ErrorCode::SeasonTooLong,
            "history shorter than one season");
}

Eigen::ArrayXd SeasonalNaiveForecaster::do_predict(const TimeSeries& history, Horizon H) const {
    return seasonal_naive_predict(history, H, season_length_).values;
}

MovingAverageForecaster::MovingAverageForecaster(int order) : order_(order) {
    require(order >= 1, ErrorCode::ConfigInvalid, "order must be >= 1");
}

std::unique_ptr<Forecaster> MovingAverageForecaster::clone() const {
    return std::make_unique<MovingAverageForecaster>(*this);
}

void MovingAverageForecaster::do_fit(const TimeSeries& history) {
    require(history.size() >= order_, ErrorCode::OrderTooLong, "history shorter than the order");
}

Eigen::ArrayXd MovingAverageForecaster::do_predict(const TimeSeries& history, Horizon H) const {
    return moving_average_predict(history, H, order_).values;
}

SimpleExpSmoothingForecaster::SimpleExpSmoothingForecaster(double alpha) : alpha_(alpha) {
    require(alpha > 0.0 && alpha <= 1.0, ErrorCode::AlphaOutOfRange,
            "alpha must be in (0, 1], got " + std::to_string(alpha));
}

std::unique_ptr<Forecaster> SimpleExpSmoothingForecaster::clone() const {
    return std::make_unique<SimpleExpSmoothingForecaster>(*this);
}

Eigen::ArrayXd SimpleExpSmoothingForecaster::do_predict(const TimeSeries& history,
                                                        Horizon H) const {
    return ses_predict(history, H, alpha_).values;
}

GbtReductionForecaster::GbtReductionForecaster(FeatureConfig features, GbtParams params)
    : features_(std::move(features)), params_(params) {
    features_.validate();
    params_.validate();
}

std::unique_ptr<Forecaster> GbtReductionForecaster::clone() const {
    return std::make_unique<GbtReductionForecaster>(*this);
}

const TreeEnsemble& GbtReductionForecaster::model() const {
    require(fitted(), ErrorCode::NotFitted, "reduction forecaster not fit yet");
    return model_;
}

void GbtReductionForecaster::do_fit(const TimeSeries& history) {
    // One-step-ahead regression: features at t predict y(t).
    const FeatureMatrix fm = build_features(history, features_);
    Eigen::VectorXd target(fm.row_count());
    for (Eigen::Index r = 0; r < fm.row_count(); ++r)
        target[r] = history.value(fm.row_index[static_cast<std::size_t>(r)]);
    model_ = gbt_fit(fm.rows, target, params_, fm.names);
}

Eigen::ArrayXd GbtReductionForecaster::do_predict(const TimeSeries& history, Horizon H) const {
    TimeSeries work = history;
    Eigen::ArrayXd out(H.steps);
    for (int h = 0; h < H.steps; ++h) {
        const Eigen::RowVectorXd row = feature_row(work, features_, work.size());
        out[h] = model_.predict(row);
        if (h + 1 < H.steps) work = extend_with_prediction(work, out[h]);
    }
    return out;
}

std::unique_ptr<Forecaster> gbt_reduction_forecaster(const TimeSeries& history,
                                                     const FeatureConfig& features,
                                                     const GbtParams& params) {
    auto fc = std::make_unique<GbtReductionForecaster>(features, params);
    fc->fit(history);
    return fc;
}

}  // namespace tsshap
