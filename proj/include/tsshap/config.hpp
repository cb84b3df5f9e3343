#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsshap/explainer.hpp"
#include "tsshap/features.hpp"
#include "tsshap/forecasters.hpp"
#include "tsshap/gbt.hpp"
#include "tsshap/robustness.hpp"
#include "tsshap/split.hpp"

namespace tsshap {

struct ForecasterSpec {
    std::string name;               // naive | seasonal_naive | moving_average | ses | gbt_reduction
    nlohmann::json params = nlohmann::json::object();
};

/// Everything one `tsshap run` needs. Defaults are resolved against the
/// ingested series (periodicity, regressor columns, length).
struct RunConfig {
    std::string input;
    std::string periodicity = "auto";
    MissingPolicy missing = MissingPolicy::reject;
    ForecasterSpec forecaster;
    int horizon = 0;  // 0 = one seasonal cycle of the periodicity
    FeatureConfig features;
    bool features_explicit = false;  // false = fill periodicity defaults
    GbtParams gbt;
    SplitterConfig splitter;
    bool robustness_enabled = true;
    RobustnessConfig robustness;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::vector<std::string> scopes = {"local", "semilocal", "global"};
    int local_step = 1;                      // step rendered in the local bar chart
    std::vector<int> semi_local_interval;    // [a, b]; empty = 1..H
    std::vector<std::string> curve_features;
    std::string curve_scope = "local";
    int grid_size = 20;
    bool render_svg = true;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
    nlohmann::json to_json() const;  // canonical form, used for hashing

    /// FNV-1a over the canonical dump of every semantic field.
    std::string config_hash() const;
};

/// Defaults that depend on the data: horizon (one cycle), feature set (lags
/// 1..3, one seasonal lag, rolling 3/6, expanding, trend, date features, all
/// regressors), robustness order.
void resolve_defaults(RunConfig& config, const TimeSeries& series);

int default_season_length(Periodicity p) noexcept;

std::unique_ptr<Forecaster> make_forecaster(const ForecasterSpec& spec,
                                            const FeatureConfig& features, const GbtParams& gbt);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace tsshap
