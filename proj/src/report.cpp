#include "tsshap/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "tsshap/error.hpp"
#include "tsshap/svg.hpp"

namespace tsshap {

namespace {

nlohmann::json fidelity_to_json(const FidelityMetrics& m) {
    return {{"mae", m.mae}, {"rmse", m.rmse}, {"mape", m.mape}, {"mase", m.mase}};
}

/// Indices of the k largest |phi| entries, ties by feature order.
std::vector<Eigen::Index> top_features(const Eigen::VectorXd& phi, int k) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(phi.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(phi[a]) > std::abs(phi[b]);
    });
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(k)));
    return order;
}

std::string sanitize_filename(std::string name) {
    for (char& c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return name;
}

struct PipelineArtifacts {
    TimeSeries series;
    std::unique_ptr<Forecaster> forecaster;
    SurrogateModel model;
    BacktestResult backtest;
    Eigen::ArrayXd forecaster_flat;
    Eigen::ArrayXd surrogate_flat;
};

PipelineArtifacts build_pipeline(const RunConfig& cfg) {
    PipelineArtifacts art;
    art.series = cfg.periodicity == "auto"
                     ? read_csv_auto(cfg.input, cfg.missing)
                     : read_csv(cfg.input, parse_periodicity(cfg.periodicity), cfg.missing);

    RunConfig resolved = cfg;
    resolve_defaults(resolved, art.series);

    // Every requested curve feature must exist before any computation starts.
    const auto names = feature_names(art.series, resolved.features);
    for (const auto& want : resolved.curve_features) {
        require(std::find(names.begin(), names.end(), want) != names.end(),
                ErrorCode::ConfigInvalid, "curves request unknown feature '" + want + "'");
    }
    require(resolved.local_step >= 1 && resolved.local_step <= resolved.horizon,
            ErrorCode::ConfigInvalid, "local_step outside the horizon");

    art.forecaster = make_forecaster(resolved.forecaster, resolved.features, resolved.gbt);
    art.model = fit_explainer(art.series, *art.forecaster, Horizon(resolved.horizon),
                              resolved.features, resolved.gbt, resolved.splitter, &art.backtest);

    art.forecaster_flat.resize(art.backtest.split_count() * art.backtest.horizon);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < art.backtest.split_count(); ++i)
        for (int h = 0; h < art.backtest.horizon; ++h)
            art.forecaster_flat[k++] = art.backtest.paths(i, h);
    art.surrogate_flat = surrogate_backtest_path(art.model, art.series, art.backtest);
    return art;
}

Eigen::VectorXd indices_as_x(const std::vector<Eigen::Index>& idx) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) x[static_cast<Eigen::Index>(i)] = idx[i];
    return x;
}

void write_overlay_svg(const PipelineArtifacts& art, const std::string& path) {
    // observed series + per-origin forecaster/surrogate backtest curves
    const Eigen::Index T = art.series.size();
    PlotSeries observed{"observed", Eigen::VectorXd::LinSpaced(T, 0, static_cast<double>(T - 1)),
                        art.series.values().matrix(), "#999999", false};
    std::vector<Eigen::Index> covered;
    for (Eigen::Index i = 0; i < art.backtest.split_count(); ++i)
        for (int h = 0; h < art.backtest.horizon; ++h)
            covered.push_back(art.backtest.origins[static_cast<std::size_t>(i)] + h);
    PlotSeries forecaster{"forecaster", indices_as_x(covered), art.forecaster_flat.matrix(),
                          "#d62728", false};
    PlotSeries surrogate{"surrogate", indices_as_x(covered), art.surrogate_flat.matrix(),
                         "#1f77b4", true};
    LineChartSpec spec{"forecaster vs surrogate (backtested)", "time index", art.series.name(),
                       {observed, forecaster, surrogate}};
    write_text_file(path, render_line_chart(spec));
}

void write_importance_svg(const Explanation& e, const std::string& title,
                          const std::string& path) {
    const auto top = top_features(e.phi, 15);
    BarChartSpec spec;
    spec.title = title;
    spec.values.resize(static_cast<Eigen::Index>(top.size()));
    for (std::size_t i = 0; i < top.size(); ++i) {
        spec.labels.push_back(e.feature_names[static_cast<std::size_t>(top[i])]);
        spec.values[static_cast<Eigen::Index>(i)] = e.phi[top[i]];
    }
    write_text_file(path, render_bar_chart(spec));
}

void write_curves_svg(const CurveSet& c, const std::string& dir) {
    LineChartSpec pdp{"PDP: " + c.feature + " (" + scope_name(c.scope) + ")", c.feature,
                      "surrogate output",
                      {{"pdp", c.grid, c.pdp, "#1f77b4", false}}};
    LineChartSpec sdp{"SDP: " + c.feature + " (" + scope_name(c.scope) + ")", c.feature,
                      "SHAP value",
                      {{"sdp", c.grid, c.sdp, "#ff7f0e", false}}};
    const std::string base = dir + "/" + sanitize_filename(c.feature);
    write_text_file(base + "_pdp.svg", render_line_chart(pdp));
    write_text_file(base + "_sdp.svg", render_line_chart(sdp));
}

}  // namespace

nlohmann::json explanation_to_json(const Explanation& e) {
    nlohmann::json shap;
    for (std::size_t i = 0; i < e.feature_names.size(); ++i)
        shap[e.feature_names[i]] = e.phi[static_cast<Eigen::Index>(i)];
    nlohmann::json j;
    j["scope"] = scope_name(e.scope);
    if (e.scope != Scope::global) {
        j["step_begin"] = e.step_begin;
        j["step_end"] = e.step_end;
    }
    j["base_value"] = e.base_value;
    j["prediction"] = e.prediction;
    j["phi"] = std::move(shap);
    return j;
}

nlohmann::json curves_to_json(const CurveSet& c) {
    nlohmann::json j;
    j["feature"] = c.feature;
    j["scope"] = scope_name(c.scope);
    j["grid"] = std::vector<double>(c.grid.data(), c.grid.data() + c.grid.size());
    j["pdp"] = std::vector<double>(c.pdp.data(), c.pdp.data() + c.pdp.size());
    j["sdp"] = std::vector<double>(c.sdp.data(), c.sdp.data() + c.sdp.size());
    return j;
}

nlohmann::json metric_report_to_json(const MetricReport& r) {
    nlohmann::json j;
    j["scope"] = scope_name(r.scope);
    if (r.faithfulness)
        j["faithfulness"] = *r.faithfulness;
    else
        j["faithfulness"] = nullptr;  // undefined (zero variance), not 0
    j["sensitivity"] = r.sensitivity;
    j["complexity"] = r.complexity;
    j["n_perturbations"] = r.n_perturbations;
    return j;
}

nlohmann::json run(const RunConfig& cfg) {
    PipelineArtifacts art = build_pipeline(cfg);
    RunConfig resolved = cfg;
    resolve_defaults(resolved, art.series);

    std::filesystem::create_directories(resolved.output_dir);

    nlohmann::json report;
    report["metadata"] = {
        {"dataset", std::filesystem::path(resolved.input).stem().string()},
        {"forecaster", resolved.forecaster.name},
        {"forecaster_params", resolved.forecaster.params},
        {"config_hash", resolved.config_hash()},
        {"tool_version", "0.1.0"},
        {"periodicity", periodicity_name(art.series.periodicity())},
        {"series_length", art.series.size()},
        {"horizon", resolved.horizon},
        {"timestamp", format_iso8601_datetime(static_cast<UnixTime>(
                          std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count()))},
    };
    report["fidelity"] =
        fidelity_to_json(fidelity_metrics(art.forecaster_flat, art.surrogate_flat, art.series));

    const bool want_local = std::find(resolved.scopes.begin(), resolved.scopes.end(), "local") !=
                            resolved.scopes.end();
    const bool want_semi =
        std::find_if(resolved.scopes.begin(), resolved.scopes.end(), [](const std::string& s) {
            return parse_scope(s) == Scope::semi_local;
        }) != resolved.scopes.end();
    const bool want_global = std::find(resolved.scopes.begin(), resolved.scopes.end(),
                                       "global") != resolved.scopes.end();

    nlohmann::json explanations = nlohmann::json::object();
    if (want_local) {
        nlohmann::json locals = nlohmann::json::array();
        for (int h = 1; h <= resolved.horizon; ++h) {
            const Explanation e = explain_local(art.model, art.series, h);
            locals.push_back(explanation_to_json(e));
            if (resolved.render_svg && h == resolved.local_step)
                write_importance_svg(e, "local explanation, step " + std::to_string(h),
                                     resolved.output_dir + "/local_importance.svg");
        }
        explanations["local"] = std::move(locals);
    }
    if (want_semi) {
        int a = 1, b = resolved.horizon;
        if (resolved.semi_local_interval.size() == 2) {
            a = resolved.semi_local_interval[0];
            b = resolved.semi_local_interval[1];
        }
        const Explanation e = explain_semi_local(art.model, art.series, a, b);
        explanations["semi_local"] = explanation_to_json(e);
        if (resolved.render_svg)
            write_importance_svg(e,
                                 "semi-local explanation, steps " + std::to_string(a) + ".." +
                                     std::to_string(b),
                                 resolved.output_dir + "/semilocal_importance.svg");
    }
    if (want_global) {
        const Explanation e = explain_global(art.model, art.series);
        explanations["global"] = explanation_to_json(e);
        if (resolved.render_svg)
            write_importance_svg(e, "global importance (mean |phi|)",
                                 resolved.output_dir + "/global_importance.svg");
    }
    report["explanations"] = std::move(explanations);

    if (!resolved.curve_features.empty()) {
        nlohmann::json curves = nlohmann::json::array();
        for (const auto& feature : resolved.curve_features) {
            const CurveSet c =
                dependence_curves(art.model, art.series, feature, parse_scope(resolved.curve_scope),
                                  resolved.grid_size, resolved.local_step);
            curves.push_back(curves_to_json(c));
            if (resolved.render_svg) write_curves_svg(c, resolved.output_dir);
        }
        report["curves"] = std::move(curves);
    }

    if (resolved.robustness_enabled) {
        PipelineSpec spec;
        spec.make_forecaster = [&resolved]() {
            return make_forecaster(resolved.forecaster, resolved.features, resolved.gbt);
        };
        spec.H = Horizon(resolved.horizon);
        spec.features = resolved.features;
        spec.gbt = resolved.gbt;
        spec.splitter = resolved.splitter;
        std::vector<Scope> scopes;
        for (const auto& s : resolved.scopes) scopes.push_back(parse_scope(s));
        const auto metrics = evaluate_robustness(spec, art.series, resolved.robustness, scopes);
        nlohmann::json out = nlohmann::json::array();
        for (const auto& m : metrics) out.push_back(metric_report_to_json(m));
        report["robustness"] = std::move(out);
    }

    if (resolved.render_svg) write_overlay_svg(art, resolved.output_dir + "/forecast_overlay.svg");
    art.model.ensemble.save(resolved.output_dir + "/surrogate.json");
    art.backtest.to_csv(resolved.output_dir + "/backtest.csv");

    std::ofstream out(resolved.output_dir + "/report.json");
    require(out.good(), ErrorCode::InputUnreadable,
            "cannot write '" + resolved.output_dir + "/report.json'");
    out << report.dump(2) << "\n";
    return report;
}

nlohmann::json explain_only(const RunConfig& cfg, const std::string& scope, int step,
                            int interval_begin, int interval_end) {
    PipelineArtifacts art = build_pipeline(cfg);
    RunConfig resolved = cfg;
    resolve_defaults(resolved, art.series);
    const Scope s = parse_scope(scope);
    if (s == Scope::local) {
        return explanation_to_json(explain_local(art.model, art.series, step));
    }
    if (s == Scope::semi_local) {
        if (interval_end <= 0) interval_end = resolved.horizon;
        return explanation_to_json(
            explain_semi_local(art.model, art.series, interval_begin, interval_end));
    }
    return explanation_to_json(explain_global(art.model, art.series));
}

}  // namespace tsshap
