#include "tsshap/explainer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tsshap/error.hpp"

namespace tsshap {

const char* scope_name(Scope s) noexcept {
    switch (s) {
        case Scope::local: return "local";
        case Scope::semi_local: return "semi_local";
        case Scope::global: return "global";
    }
    return "?";
}

Scope parse_scope(const std::string& name) {
    if (name == "local") return Scope::local;
    if (name == "semilocal" || name == "semi_local" || name == "semi-local")
        return Scope::semi_local;
    if (name == "global") return Scope::global;
    fail(ErrorCode::ConfigInvalid, "unknown scope '" + name + "'");
}

namespace {

/// Release-blocking additivity check: every SHAP vector the pipeline emits
/// must reconstruct the surrogate's prediction.
void check_local_accuracy(const ShapVector& shap, double prediction) {
    const double tol = 1e-6 * std::max(1.0, std::abs(prediction));
    if (std::abs(shap.reconstructed() - prediction) > tol)
        throw std::logic_error("local accuracy violated: base + sum(phi) = " +
                               std::to_string(shap.reconstructed()) + " vs prediction " +
                               std::to_string(prediction));
}

}  // namespace

SurrogateModel fit_explainer(const TimeSeries& series, Forecaster& forecaster, Horizon H,
                             const FeatureConfig& features, const GbtParams& gbt,
                             const SplitterConfig& splitter, BacktestResult* out_backtest) {
    features.validate();
    const Eigen::Index lookback = features.max_lookback();
    const BacktestResult backtest = run_backtest(series, forecaster, H, splitter, lookback);

    SurrogateModel model;
    model.feature_config = features;
    model.horizon = H.steps;
    model.splitter = resolve_splitter(splitter, series.size(), H, lookback);
    require(model.splitter.initial_train >= lookback, ErrorCode::InsufficientHistory,
            "initial training window " + std::to_string(model.splitter.initial_train) +
                " is shorter than the longest feature lookback " + std::to_string(lookback));

    // Training pairs: features at every covered origin t -> step-1 backtest
    // value at t. Features are causal, so building them once over the full
    // series equals building them on the history before each t.
    const FeatureMatrix all = build_features(series, features);
    const Eigen::Index offset = all.row_index.front();
    const Eigen::Index n = backtest.split_count();
    require(n >= 10, ErrorCode::SurrogateUnderdetermined,
            "only " + std::to_string(n) +
                " backtested training rows; need at least 10 (shrink the step or the horizon)");

    Eigen::MatrixXd X(n, all.feature_count());
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index t = backtest.origins[static_cast<std::size_t>(i)];
        X.row(i) = all.rows.row(t - offset);
        y[i] = backtest.paths(i, 0);
        model.training_index.push_back(t);
    }
    model.ensemble = gbt_fit(X, y, gbt, all.names);
    if (out_backtest) *out_backtest = backtest;
    return model;
}

Eigen::MatrixXd surrogate_forecast_rows(const SurrogateModel& model, const TimeSeries& series,
                                        Horizon H) {
    TimeSeries work = series;
    Eigen::MatrixXd rows(H.steps, model.ensemble.feature_count());
    for (int h = 0; h < H.steps; ++h) {
        const Eigen::RowVectorXd row = feature_row(work, model.feature_config, work.size());
        rows.row(h) = row;
        const double pred = model.ensemble.predict(row);
        if (h + 1 < H.steps) work = extend_with_prediction(work, pred);
    }
    return rows;
}

ForecastPath surrogate_forecast(const SurrogateModel& model, const TimeSeries& series, Horizon H) {
    const Eigen::MatrixXd rows = surrogate_forecast_rows(model, series, H);
    Eigen::ArrayXd values(H.steps);
    for (int h = 0; h < H.steps; ++h) values[h] = model.ensemble.predict(rows.row(h));
    return {series.size(), std::move(values)};
}

Explanation explain_local(const SurrogateModel& model, const TimeSeries& series, int step) {
    require(step >= 1 && step <= model.horizon, ErrorCode::HorizonOutOfRange,
            "step " + std::to_string(step) + " outside 1.." + std::to_string(model.horizon));
    const Eigen::MatrixXd rows = surrogate_forecast_rows(model, series, Horizon(step));
    const Eigen::RowVectorXd row = rows.row(step - 1);
    const ShapVector shap = tree_shap(model.ensemble, row);
    const double prediction = model.ensemble.predict(row);
    check_local_accuracy(shap, prediction);

    Explanation out;
    out.scope = Scope::local;
    out.step_begin = out.step_end = step;
    out.phi = shap.phi;
    out.base_value = shap.base_value;
    out.prediction = prediction;
    out.feature_names = model.ensemble.feature_names();
    return out;
}

Explanation explain_semi_local(const SurrogateModel& model, const TimeSeries& series,
                               int step_begin, int step_end) {
    require(step_begin <= step_end, ErrorCode::EmptyInterval,
            "interval " + std::to_string(step_begin) + ".." + std::to_string(step_end) +
                " is empty");
    require(step_begin >= 1 && step_end <= model.horizon, ErrorCode::HorizonOutOfRange,
            "interval outside 1.." + std::to_string(model.horizon));

    const Eigen::MatrixXd rows = surrogate_forecast_rows(model, series, Horizon(step_end));
    Explanation out;
    out.scope = Scope::semi_local;
    out.step_begin = step_begin;
    out.step_end = step_end;
    out.phi = Eigen::VectorXd::Zero(model.ensemble.feature_count());
    out.feature_names = model.ensemble.feature_names();
    const int n = step_end - step_begin + 1;
    for (int h = step_begin; h <= step_end; ++h) {
        const Eigen::RowVectorXd row = rows.row(h - 1);
        const ShapVector shap = tree_shap(model.ensemble, row);
        const double prediction = model.ensemble.predict(row);
        check_local_accuracy(shap, prediction);
        out.phi += shap.phi;
        out.base_value += shap.base_value;
        out.prediction += prediction;
    }
    out.phi /= n;
    out.base_value /= n;
    out.prediction /= n;
    return out;
}

FeatureMatrix surrogate_training_matrix(const SurrogateModel& model, const TimeSeries& series) {
    const FeatureMatrix all = build_features(series, model.feature_config);
    const Eigen::Index offset = all.row_index.front();
    FeatureMatrix out;
    out.names = all.names;
    out.kinds = all.kinds;
    out.rows.resize(static_cast<Eigen::Index>(model.training_index.size()), all.feature_count());
    for (std::size_t i = 0; i < model.training_index.size(); ++i) {
        out.rows.row(static_cast<Eigen::Index>(i)) =
            all.rows.row(model.training_index[i] - offset);
        out.row_index.push_back(model.training_index[i]);
    }
    return out;
}

Explanation explain_global(const SurrogateModel& model, const TimeSeries& series) {
    const FeatureMatrix training = surrogate_training_matrix(model, series);
    const std::vector<ShapVector> all = shap_matrix(model.ensemble, training);

    Explanation out;
    out.scope = Scope::global;
    out.phi = Eigen::VectorXd::Zero(model.ensemble.feature_count());
    out.feature_names = model.ensemble.feature_names();
    double mean_pred = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const double prediction = model.ensemble.predict(training.rows.row(static_cast<Eigen::Index>(i)));
        check_local_accuracy(all[i], prediction);
        out.phi += all[i].phi.cwiseAbs();
        mean_pred += prediction;
    }
    out.phi /= static_cast<double>(all.size());
    out.base_value = model.ensemble.expected_value();
    out.prediction = mean_pred / static_cast<double>(all.size());
    return out;
}

namespace {

Eigen::VectorXd dependence_grid(const FeatureMatrix& training, Eigen::Index f, FeatureKind kind,
                                int grid_size) {
    const Eigen::VectorXd col = training.rows.col(f);
    if (kind == FeatureKind::ordinal) {
        std::set<double> distinct(col.data(), col.data() + col.size());
        require(distinct.size() >= 2, ErrorCode::DegenerateRange,
                "feature is constant over the training rows");
        Eigen::VectorXd grid(static_cast<Eigen::Index>(distinct.size()));
        Eigen::Index i = 0;
        for (double v : distinct) grid[i++] = v;
        return grid;
    }
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    require(hi > lo, ErrorCode::DegenerateRange, "feature is constant over the training rows");
    Eigen::VectorXd grid(grid_size);
    for (int i = 0; i < grid_size; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    return grid;
}

}  // namespace

CurveSet dependence_curves(const SurrogateModel& model, const TimeSeries& series,
                           const std::string& feature, Scope scope, int grid_size, int step_begin,
                           int step_end) {
    require(grid_size >= 2, ErrorCode::ConfigInvalid, "grid_size must be >= 2");
    const FeatureMatrix training = surrogate_training_matrix(model, series);
    const Eigen::Index f = training.index_of(feature);
    if (step_end <= 0) step_end = scope == Scope::local ? step_begin : model.horizon;
    require(step_begin >= 1 && step_begin <= step_end && step_end <= model.horizon,
            ErrorCode::HorizonOutOfRange, "bad step interval for dependence curves");

    CurveSet out;
    out.feature = feature;
    out.scope = scope;
    out.grid = dependence_grid(training, f, training.kinds[static_cast<std::size_t>(f)], grid_size);
    const Eigen::Index G = out.grid.size();
    out.pdp = Eigen::VectorXd::Zero(G);
    out.sdp = Eigen::VectorXd::Zero(G);

    if (scope == Scope::global) {
        // standard partial-dependence averaging over the training rows
        Eigen::MatrixXd rows = training.rows;
        for (Eigen::Index g = 0; g < G; ++g) {
            rows.col(f).setConstant(out.grid[g]);
            double pdp = 0.0;
            double sdp = 0.0;
            for (Eigen::Index r = 0; r < rows.rows(); ++r) {
                pdp += model.ensemble.predict(rows.row(r));
                sdp += tree_shap(model.ensemble, rows.row(r)).phi[f];
            }
            out.pdp[g] = pdp / static_cast<double>(rows.rows());
            out.sdp[g] = sdp / static_cast<double>(rows.rows());
        }
        return out;
    }

    const Eigen::MatrixXd steps = surrogate_forecast_rows(model, series, Horizon(step_end));
    const int n_steps = step_end - step_begin + 1;
    for (int h = step_begin; h <= step_end; ++h) {
        Eigen::RowVectorXd row = steps.row(h - 1);
        for (Eigen::Index g = 0; g < G; ++g) {
            row[f] = out.grid[g];
            out.pdp[g] += model.ensemble.predict(row);
            out.sdp[g] += tree_shap(model.ensemble, row).phi[f];
        }
    }
    out.pdp /= n_steps;
    out.sdp /= n_steps;
    return out;
}

Eigen::ArrayXd surrogate_backtest_path(const SurrogateModel& model, const TimeSeries& series,
                                       const BacktestResult& backtest) {
    Eigen::ArrayXd out(backtest.split_count() * backtest.horizon);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < backtest.split_count(); ++i) {
        const Eigen::Index origin = backtest.origins[static_cast<std::size_t>(i)];
        const TimeSeries train = series.prefix(origin, backtest.horizon);
        const ForecastPath path = surrogate_forecast(model, train, Horizon(backtest.horizon));
        for (int h = 0; h < backtest.horizon; ++h) out[k++] = path.values[h];
    }
    return out;
}

}  // namespace tsshap
