#include "tsshap/config.hpp"

#include <filesystem>
#include <fstream>

#include "tsshap/error.hpp"

namespace tsshap {

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorCode::ConfigInvalid, std::string("bad value for '") + key + "'");
    }
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        require(ok, ErrorCode::ConfigInvalid, "unknown key '" + key + "' in " + where);
    }
}

}  // namespace

int default_season_length(Periodicity p) noexcept {
    switch (p) {
        case Periodicity::hourly: return 24;
        case Periodicity::daily: return 7;
        case Periodicity::weekly: return 52;
        case Periodicity::monthly: return 12;
    }
    return 1;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::InputUnreadable, "cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ConfigInvalid, "config is not valid JSON: " + std::string(e.what()));
    }
    return from_json(j, std::filesystem::path(path).parent_path().string());
}

RunConfig RunConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
    require(j.is_object(), ErrorCode::ConfigInvalid, "config root must be an object");
    reject_unknown_keys(j,
                        {"input", "periodicity", "missing", "forecaster", "horizon", "features",
                         "gbt", "splitter", "robustness", "seed", "output_dir", "scopes",
                         "local_step", "semi_local_interval", "curves", "svg"},
                        "config");
    RunConfig c;
    c.input = get_or<std::string>(j, "input", "");
    require(!c.input.empty(), ErrorCode::ConfigInvalid, "config needs an 'input' CSV path");
    if (!base_dir.empty() && std::filesystem::path(c.input).is_relative())
        c.input = (std::filesystem::path(base_dir) / c.input).string();
    c.periodicity = get_or<std::string>(j, "periodicity", "auto");
    const std::string missing = get_or<std::string>(j, "missing", "reject");
    if (missing == "reject") c.missing = MissingPolicy::reject;
    else if (missing == "forward_fill") c.missing = MissingPolicy::forward_fill;
    else fail(ErrorCode::ConfigInvalid, "missing policy must be 'reject' or 'forward_fill'");

    require(j.contains("forecaster"), ErrorCode::ConfigInvalid, "config needs a 'forecaster'");
    if (j.at("forecaster").is_string()) {
        c.forecaster.name = j.at("forecaster").get<std::string>();
    } else {
        reject_unknown_keys(j.at("forecaster"), {"name", "params"}, "forecaster");
        c.forecaster.name = get_or<std::string>(j.at("forecaster"), "name", "");
        c.forecaster.params = j.at("forecaster").value("params", nlohmann::json::object());
    }
    require(!c.forecaster.name.empty(), ErrorCode::ConfigInvalid, "forecaster needs a name");

    c.horizon = get_or<int>(j, "horizon", 0);
    require(c.horizon >= 0, ErrorCode::ConfigInvalid, "horizon must be >= 1 (or omitted)");

    if (j.contains("features")) {
        const auto& f = j.at("features");
        reject_unknown_keys(f,
                            {"lags", "seasonal_lags", "season_length", "rolling_windows",
                             "expanding", "trend_degree", "date_features", "time_features",
                             "holidays", "regressors"},
                            "features");
        c.features_explicit = true;
        c.features.lags = get_or<std::vector<int>>(f, "lags", {});
        c.features.seasonal_lag_count = get_or<int>(f, "seasonal_lags", 0);
        c.features.season_length = get_or<int>(f, "season_length", 0);
        c.features.rolling_windows = get_or<std::vector<int>>(f, "rolling_windows", {});
        c.features.expanding = get_or<bool>(f, "expanding", false);
        c.features.trend_degree = get_or<int>(f, "trend_degree", 0);
        c.features.date_features = get_or<bool>(f, "date_features", false);
        c.features.time_features = get_or<bool>(f, "time_features", false);
        if (f.contains("holidays")) {
            reject_unknown_keys(f.at("holidays"), {"calendar", "buffer_days"}, "holidays");
            HolidayConfig h;
            h.calendar_path = get_or<std::string>(f.at("holidays"), "calendar", "");
            require(!h.calendar_path.empty(), ErrorCode::ConfigInvalid,
                    "holidays need a 'calendar' file path");
            if (!base_dir.empty() && std::filesystem::path(h.calendar_path).is_relative())
                h.calendar_path = (std::filesystem::path(base_dir) / h.calendar_path).string();
            h.buffer_days = get_or<int>(f.at("holidays"), "buffer_days", 0);
            c.features.holidays = h;
        }
        if (f.contains("regressors"))
            c.features.regressor_columns = get_or<std::vector<std::string>>(f, "regressors", {});
        else
            c.features.regressor_columns = {"*"};  // resolved to all columns later
    }

    if (j.contains("gbt")) {
        const auto& g = j.at("gbt");
        reject_unknown_keys(g,
                            {"n_trees", "max_depth", "min_samples_leaf", "learning_rate",
                             "subsample_fraction"},
                            "gbt");
        c.gbt.n_trees = get_or<int>(g, "n_trees", c.gbt.n_trees);
        c.gbt.max_depth = get_or<int>(g, "max_depth", c.gbt.max_depth);
        c.gbt.min_samples_leaf = get_or<int>(g, "min_samples_leaf", c.gbt.min_samples_leaf);
        c.gbt.learning_rate = get_or<double>(g, "learning_rate", c.gbt.learning_rate);
        c.gbt.subsample_fraction =
            get_or<double>(g, "subsample_fraction", c.gbt.subsample_fraction);
    }

    if (j.contains("splitter")) {
        reject_unknown_keys(j.at("splitter"), {"initial_train", "step"}, "splitter");
        c.splitter.initial_train = get_or<int>(j.at("splitter"), "initial_train", 0);
        c.splitter.step = get_or<int>(j.at("splitter"), "step", 0);
    }

    if (j.contains("robustness")) {
        const auto& r = j.at("robustness");
        if (r.is_boolean()) {
            c.robustness_enabled = r.get<bool>();
        } else {
            reject_unknown_keys(r, {"enabled", "order", "block_length", "n_perturbations"},
                                "robustness");
            c.robustness_enabled = get_or<bool>(r, "enabled", true);
            c.robustness.order = get_or<int>(r, "order", 0);
            c.robustness.block_length = get_or<int>(r, "block_length", 0);
            c.robustness.n_perturbations = get_or<int>(r, "n_perturbations", 20);
        }
    }

    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.output_dir = get_or<std::string>(j, "output_dir", "out");
    c.scopes = get_or<std::vector<std::string>>(j, "scopes", c.scopes);
    for (const auto& s : c.scopes) parse_scope(s);
    c.local_step = get_or<int>(j, "local_step", 1);
    c.semi_local_interval = get_or<std::vector<int>>(j, "semi_local_interval", {});
    require(c.semi_local_interval.empty() || c.semi_local_interval.size() == 2,
            ErrorCode::ConfigInvalid, "semi_local_interval must be [a, b]");
    if (j.contains("curves")) {
        const auto& p = j.at("curves");
        reject_unknown_keys(p, {"features", "scope", "grid_size"}, "curves");
        c.curve_features = get_or<std::vector<std::string>>(p, "features", {});
        c.curve_scope = get_or<std::string>(p, "scope", "local");
        parse_scope(c.curve_scope);
        c.grid_size = get_or<int>(p, "grid_size", 20);
        require(c.grid_size >= 2, ErrorCode::ConfigInvalid, "grid_size must be >= 2");
    }
    c.render_svg = get_or<bool>(j, "svg", true);
    return c;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json f;
    f["lags"] = features.lags;
    f["seasonal_lags"] = features.seasonal_lag_count;
    f["season_length"] = features.season_length;
    f["rolling_windows"] = features.rolling_windows;
    f["expanding"] = features.expanding;
    f["trend_degree"] = features.trend_degree;
    f["date_features"] = features.date_features;
    f["time_features"] = features.time_features;
    if (features.holidays)
        f["holidays"] = {{"calendar", features.holidays->calendar_path},
                         {"buffer_days", features.holidays->buffer_days}};
    f["regressors"] = features.regressor_columns;

    nlohmann::json j;
    j["input"] = input;
    j["periodicity"] = periodicity;
    j["missing"] = missing == MissingPolicy::reject ? "reject" : "forward_fill";
    j["forecaster"] = {{"name", forecaster.name}, {"params", forecaster.params}};
    j["horizon"] = horizon;
    j["features"] = std::move(f);
    j["gbt"] = {{"n_trees", gbt.n_trees},
                {"max_depth", gbt.max_depth},
                {"min_samples_leaf", gbt.min_samples_leaf},
                {"learning_rate", gbt.learning_rate},
                {"subsample_fraction", gbt.subsample_fraction}};
    j["splitter"] = {{"initial_train", splitter.initial_train}, {"step", splitter.step}};
    j["robustness"] = {{"enabled", robustness_enabled},
                       {"order", robustness.order},
                       {"block_length", robustness.block_length},
                       {"n_perturbations", robustness.n_perturbations}};
    j["seed"] = seed;
    j["scopes"] = scopes;
    j["local_step"] = local_step;
    j["semi_local_interval"] = semi_local_interval;
    j["curves"] = {{"features", curve_features}, {"scope", curve_scope}, {"grid_size", grid_size}};
    return j;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunConfig::config_hash() const { return fnv1a_hex(to_json().dump()); }

void resolve_defaults(RunConfig& config, const TimeSeries& series) {
    const Periodicity p = series.periodicity();
    if (config.horizon <= 0) config.horizon = default_season_length(p);

    FeatureConfig& f = config.features;
    if (!config.features_explicit) {
        f.lags = {1, 2, 3};
        f.seasonal_lag_count = 1;
        f.season_length = default_season_length(p);
        f.rolling_windows = {3, 6};
        f.expanding = true;
        f.trend_degree = 1;
        f.date_features = true;
        f.time_features = p == Periodicity::hourly;
        f.regressor_columns = series.regressor_names();
    } else if (f.regressor_columns.size() == 1 && f.regressor_columns[0] == "*") {
        f.regressor_columns = series.regressor_names();
    }
    if (f.seasonal_lag_count > 0 && f.season_length <= 0)
        f.season_length = default_season_length(p);
    f.validate();

    config.gbt.seed = config.seed;
    config.robustness.seed = config.seed + 1;
    if (config.robustness.order <= 0)
        config.robustness.order = default_decomposition_order(p);
}

std::unique_ptr<Forecaster> make_forecaster(const ForecasterSpec& spec,
                                            const FeatureConfig& features, const GbtParams& gbt) {
    const auto& p = spec.params;
    if (spec.name == "naive") return std::make_unique<NaiveForecaster>();
    if (spec.name == "seasonal_naive") {
        require(p.contains("season_length"), ErrorCode::ConfigInvalid,
                "seasonal_naive needs params.season_length");
        return std::make_unique<SeasonalNaiveForecaster>(p.at("season_length").get<int>());
    }
    if (spec.name == "moving_average") {
        require(p.contains("order"), ErrorCode::ConfigInvalid,
                "moving_average needs params.order");
        return std::make_unique<MovingAverageForecaster>(p.at("order").get<int>());
    }
    if (spec.name == "ses") {
        require(p.contains("alpha"), ErrorCode::ConfigInvalid, "ses needs params.alpha");
        return std::make_unique<SimpleExpSmoothingForecaster>(p.at("alpha").get<double>());
    }
    if (spec.name == "gbt_reduction") {
        GbtParams params = gbt;
        if (p.contains("n_trees")) params.n_trees = p.at("n_trees").get<int>();
        if (p.contains("max_depth")) params.max_depth = p.at("max_depth").get<int>();
        if (p.contains("learning_rate")) params.learning_rate = p.at("learning_rate").get<double>();
        return std::make_unique<GbtReductionForecaster>(features, params);
    }
    fail(ErrorCode::ConfigInvalid, "unknown forecaster '" + spec.name + "'");
}

}  // namespace tsshap
