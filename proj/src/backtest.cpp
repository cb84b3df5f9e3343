#include "tsshap/backtest.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "tsshap/error.hpp"

namespace tsshap {

std::vector<std::pair<Eigen::Index, double>> BacktestResult::step_series(int h) const {
    require(h >= 1 && h <= horizon, ErrorCode::HorizonOutOfRange,
            "step " + std::to_string(h) + " outside 1.." + std::to_string(horizon));
    std::vector<std::pair<Eigen::Index, double>> out;
    out.reserve(origins.size());
    for (Eigen::Index i = 0; i < split_count(); ++i)
        out.emplace_back(origins[static_cast<std::size_t>(i)] + h - 1, paths(i, h - 1));
    return out;
}

void BacktestResult::to_csv(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), ErrorCode::InputUnreadable, "cannot write '" + path + "'");
    out << "index";
    for (int h = 1; h <= horizon; ++h) out << ",step" << h;
    out << "\n";
    std::map<Eigen::Index, std::vector<std::pair<int, double>>> by_index;
    for (int h = 1; h <= horizon; ++h)
        for (const auto& [idx, v] : step_series(h)) by_index[idx].emplace_back(h, v);
    for (const auto& [idx, cells] : by_index) {
        out << idx;
        int next = 1;
        for (const auto& [h, v] : cells) {
            for (; next < h; ++next) out << ",";
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << "," << buf;
            ++next;
        }
        for (; next <= horizon; ++next) out << ",";
        out << "\n";
    }
}

BacktestResult run_backtest(const TimeSeries& series, Forecaster& forecaster, Horizon H,
                            const SplitterConfig& splitter, Eigen::Index max_lookback) {
    const Eigen::Index T = series.size();
    const ResolvedSplitter cfg = resolve_splitter(splitter, T, H, max_lookback);
    require(cfg.initial_train + H.steps <= T, ErrorCode::SplitExhausted,
            "no expanding window fits: initial_train " + std::to_string(cfg.initial_train) +
                " + H " + std::to_string(H.steps) + " exceeds T " + std::to_string(T));
    const auto splits = expanding_window_splits(T, cfg.initial_train, H, cfg.step);
    require(!splits.empty(), ErrorCode::SplitExhausted, "no usable splits");

    BacktestResult result;
    result.horizon = H.steps;
    result.paths.resize(static_cast<Eigen::Index>(splits.size()), H.steps);

    if (!forecaster.requires_refit_per_window()) {
        // single model trained once on the entire series
        forecaster.fit(series);
    }

    const Eigen::Index future = forecaster.supports_regressors() ? H.steps : 0;
    for (std::size_t i = 0; i < splits.size(); ++i) {
        const auto& split = splits[i];
        const TimeSeries train = series.prefix(split.train_end, future);
        ForecastPath path{0, {}};
        if (forecaster.requires_refit_per_window()) {
            // independent clone per split keeps the no-lookahead guarantee
            auto model = forecaster.clone();
            model->fit(train);
            path = model->predict(train, H);
        } else {
            path = forecaster.predict(train, H);
        }
        result.origins.push_back(split.train_end);
        result.paths.row(static_cast<Eigen::Index>(i)) = path.values.transpose();
    }
    return result;
}

FidelityMetrics fidelity_metrics(const Eigen::Ref<const Eigen::ArrayXd>& forecaster_path,
                                 const Eigen::Ref<const Eigen::ArrayXd>& surrogate_path,
                                 const TimeSeries& insample) {
    const Eigen::Index n = forecaster_path.size();
    require(n >= 1, ErrorCode::EmptyData, "fidelity needs at least one point");
    require(surrogate_path.size() == n, ErrorCode::LengthMismatch,
            "paths must have equal length");
    require(insample.size() >= 2, ErrorCode::InsufficientHistory,
            "MASE needs an in-sample series of length >= 2");

    const Eigen::ArrayXd err = (forecaster_path - surrogate_path).abs();
    FidelityMetrics m;
    m.mae = err.mean();
    m.rmse = std::sqrt((err * err).mean());

    double mape_sum = 0.0;
    Eigen::Index mape_n = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (forecaster_path[i] != 0.0) {
            mape_sum += err[i] / std::abs(forecaster_path[i]);
            ++mape_n;
        }
    }
    require(mape_n > 0, ErrorCode::AllReferenceZero,
            "MAPE undefined: every reference value is zero");
    m.mape = mape_sum / static_cast<double>(mape_n);

    const Eigen::ArrayXd& y = insample.values();
    const double naive_mae =
        (y.tail(y.size() - 1) - y.head(y.size() - 1)).abs().mean();
    m.mase = naive_mae > 0.0 ? m.mae / naive_mae
                             : (m.mae == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return m;
}

}  // namespace tsshap
