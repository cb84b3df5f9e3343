#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tsshap/series.hpp"

namespace tsshap {

/// One expanding-window partition: train on [0, train_end), test on
/// [test_begin, test_end) with test_begin == train_end.
struct ExpandingWindowSplit {
    Eigen::Index train_end = 0;
    Eigen::Index test_begin = 0;
    Eigen::Index test_end = 0;
};

/// Splitter knobs; 0 means "resolve the documented default".
struct SplitterConfig {
    Eigen::Index initial_train = 0;  // default max(2 * longest lookback, ceil(0.5 * T))
    Eigen::Index step = 0;           // default H (non-overlapping test windows)
};

struct ResolvedSplitter {
    Eigen::Index initial_train = 0;
    Eigen::Index step = 0;
};

ResolvedSplitter resolve_splitter(const SplitterConfig& config, Eigen::Index T, Horizon H,
                                  Eigen::Index max_lookback);

/// All full test windows: train_end starts at initial_train and advances by
/// step; a final window that would run past T is dropped.
std::vector<ExpandingWindowSplit> expanding_window_splits(Eigen::Index T,
                                                          Eigen::Index initial_train, Horizon H,
                                                          Eigen::Index step);

}  // namespace tsshap
