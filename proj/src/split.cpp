#include "tsshap/split.hpp"

#include <algorithm>

#include "tsshap/error.hpp"

namespace tsshap {

ResolvedSplitter resolve_splitter(const SplitterConfig& config, Eigen::Index T, Horizon H,
                                  Eigen::Index max_lookback) {
    ResolvedSplitter out;
    out.initial_train = config.initial_train > 0
                            ? config.initial_train
                            : std::max<Eigen::Index>(2 * max_lookback, (T + 1) / 2);
    out.step = config.step > 0 ? config.step : H.steps;
    require(out.initial_train >= 1, ErrorCode::ConfigInvalid, "initial_train must be >= 1");
    require(out.step >= 1, ErrorCode::ConfigInvalid, "step must be >= 1");
    return out;
}

std::vector<ExpandingWindowSplit> expanding_window_splits(Eigen::Index T,
                                                          Eigen::Index initial_train, Horizon H,
                                                          Eigen::Index step) {
    require(initial_train >= 1, ErrorCode::ConfigInvalid, "initial_train must be >= 1");
    require(step >= 1, ErrorCode::ConfigInvalid, "step must be >= 1");
    require(initial_train + H.steps <= T, ErrorCode::InsufficientHistory,
            "initial_train + H = " + std::to_string(initial_train + H.steps) +
                " exceeds series length " + std::to_string(T));
    std::vector<ExpandingWindowSplit> splits;
    for (Eigen::Index train_end = initial_train; train_end + H.steps <= T; train_end += step) {
        splits.push_back({train_end, train_end, train_end + H.steps});
    }
    return splits;
}

}  // namespace tsshap
