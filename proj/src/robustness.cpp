#include "tsshap/robustness.hpp"

#include <cmath>
#include <random>

#include "tsshap/error.hpp"

namespace tsshap {

Decomposition decompose(const TimeSeries& series, int order) {
    require(order >= 1 && order % 2 == 1, ErrorCode::EvenOrder,
            "moving-average order must be odd, got " + std::to_string(order));
    const Eigen::Index T = series.size();
    require(order <= T, ErrorCode::OrderTooLong,
            "order " + std::to_string(order) + " exceeds series length " + std::to_string(T));

    const Eigen::Index k = (order - 1) / 2;
    Decomposition d;
    d.order = order;
    d.begin = k;
    d.end = T - k;
    d.trend_cycle = Eigen::ArrayXd::Zero(T);
    d.residual = Eigen::ArrayXd::Zero(T);
    const Eigen::ArrayXd& y = series.values();
    for (Eigen::Index t = d.begin; t < d.end; ++t) {
        d.trend_cycle[t] = y.segment(t - k, order).mean();
        d.residual[t] = y[t] - d.trend_cycle[t];
    }
    return d;
}

int default_decomposition_order(Periodicity p) noexcept {
    switch (p) {
        case Periodicity::hourly: return 25;
        case Periodicity::daily: return 7;
        case Periodicity::weekly: return 5;
        case Periodicity::monthly: return 5;
    }
    return 5;
}

std::vector<PerturbedSample> block_bootstrap(const TimeSeries& series, int block_length,
                                             int n_samples, std::uint64_t seed, int order) {
    require(n_samples >= 1, ErrorCode::ConfigInvalid, "n_samples must be >= 1");
    const Decomposition d = decompose(series, order);
    const Eigen::Index N = d.end - d.begin;
    require(block_length >= 1 && block_length <= N, ErrorCode::BlockTooLong,
            "block length " + std::to_string(block_length) + " outside 1.." + std::to_string(N));

    std::mt19937_64 rng(seed);
    const Eigen::Index n_starts = N - block_length + 1;
    std::vector<PerturbedSample> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int s = 0; s < n_samples; ++s) {
        Eigen::ArrayXd boot(N);
        Eigen::Index filled = 0;
        while (filled < N) {
            const auto start = static_cast<Eigen::Index>(
                rng() % static_cast<std::uint64_t>(n_starts));
            const Eigen::Index take = std::min<Eigen::Index>(block_length, N - filled);
            boot.segment(filled, take) = d.residual.segment(d.begin + start, take);
            filled += take;
        }
        Eigen::ArrayXd values = series.values();
        values.segment(d.begin, N) = d.trend_cycle.segment(d.begin, N) + boot;
        out.push_back({series.with_values(std::move(values)), block_length, seed});
    }
    return out;
}

PipelineOutput run_pipeline(const PipelineSpec& spec, const TimeSeries& series) {
    auto forecaster = spec.make_forecaster();
    SurrogateModel model = fit_explainer(series, *forecaster, spec.H, spec.features, spec.gbt,
                                         spec.splitter);

    PipelineOutput out;
    if (!forecaster->fitted() || forecaster->requires_refit_per_window()) {
        forecaster->fit(series);
    }
    out.forecast = forecaster->predict(series, spec.H).values;

    out.local_phi.reserve(static_cast<std::size_t>(spec.H.steps));
    const Eigen::MatrixXd rows = surrogate_forecast_rows(model, series, spec.H);
    Eigen::VectorXd mean_phi = Eigen::VectorXd::Zero(model.ensemble.feature_count());
    for (int h = 0; h < spec.H.steps; ++h) {
        const ShapVector shap = tree_shap(model.ensemble, rows.row(h));
        out.local_phi.push_back(shap.phi);
        mean_phi += shap.phi;
    }
    out.semi_local_phi = mean_phi / spec.H.steps;
    out.global_phi = explain_global(model, series).phi;
    return out;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    require(saa > 0.0 && sbb > 0.0, ErrorCode::ZeroVariance,
            "faithfulness undefined: a delta sequence has zero variance");
    return sab / std::sqrt(saa * sbb);
}

const Eigen::VectorXd& scope_phi(const PipelineOutput& out, Scope scope, int h) {
    switch (scope) {
        case Scope::local: return out.local_phi[static_cast<std::size_t>(h)];
        case Scope::semi_local: return out.semi_local_phi;
        case Scope::global: return out.global_phi;
    }
    return out.global_phi;
}

}  // namespace

double faithfulness_from(const PipelineOutput& base, const std::vector<PipelineOutput>& perturbed,
                         Scope scope) {
    require(perturbed.size() >= 2, ErrorCode::ConfigInvalid,
            "faithfulness needs at least 2 perturbations");
    const auto H = static_cast<int>(base.forecast.size());
    std::vector<double> delta_f, delta_phi;
    delta_f.reserve(perturbed.size() * static_cast<std::size_t>(H));
    delta_phi.reserve(delta_f.capacity());
    for (const PipelineOutput& p : perturbed) {
        for (int h = 0; h < H; ++h) {
            delta_f.push_back(base.forecast[h] - p.forecast[h]);
            delta_phi.push_back((scope_phi(base, scope, h) - scope_phi(p, scope, h)).sum());
        }
    }
    return pearson(delta_f, delta_phi);
}

double sensitivity_from(const PipelineOutput& base, const std::vector<PipelineOutput>& perturbed,
                        Scope scope) {
    require(!perturbed.empty(), ErrorCode::ConfigInvalid, "sensitivity needs >= 1 perturbation");
    const auto H = static_cast<int>(base.forecast.size());
    double total = 0.0;
    std::size_t count = 0;
    for (const PipelineOutput& p : perturbed) {
        if (scope == Scope::local) {
            for (int h = 0; h < H; ++h) {
                total += (scope_phi(base, scope, h) - scope_phi(p, scope, h)).norm();
                ++count;
            }
        } else {
            total += (scope_phi(base, scope, 0) - scope_phi(p, scope, 0)).norm();
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double faithfulness(const PipelineSpec& spec, const TimeSeries& series,
                    const std::vector<PerturbedSample>& perturbations, Scope scope) {
    require(perturbations.size() >= 2, ErrorCode::ConfigInvalid,
            "faithfulness needs at least 2 perturbations");
    const PipelineOutput base = run_pipeline(spec, series);
    std::vector<PipelineOutput> outs;
    outs.reserve(perturbations.size());
    for (const auto& p : perturbations) outs.push_back(run_pipeline(spec, p.series));
    return faithfulness_from(base, outs, scope);
}

double sensitivity(const PipelineSpec& spec, const TimeSeries& series,
                   const std::vector<PerturbedSample>& perturbations, Scope scope) {
    require(!perturbations.empty(), ErrorCode::ConfigInvalid,
            "sensitivity needs at least 1 perturbation");
    const PipelineOutput base = run_pipeline(spec, series);
    std::vector<PipelineOutput> outs;
    outs.reserve(perturbations.size());
    for (const auto& p : perturbations) outs.push_back(run_pipeline(spec, p.series));
    return sensitivity_from(base, outs, scope);
}

double complexity(const Eigen::Ref<const Eigen::VectorXd>& phi) {
    const Eigen::VectorXd abs = phi.cwiseAbs();
    const double total = abs.sum();
    require(total > 0.0, ErrorCode::AllZeroImportance,
            "complexity undefined: every importance is zero");
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < abs.size(); ++i) {
        const double p = abs[i] / total;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    return entropy;
}

std::vector<MetricReport> evaluate_robustness(const PipelineSpec& spec, const TimeSeries& series,
                                              const RobustnessConfig& config,
                                              const std::vector<Scope>& scopes) {
    RobustnessConfig cfg = config;
    if (cfg.order <= 0) cfg.order = default_decomposition_order(series.periodicity());
    if (cfg.block_length <= 0) {
        const Eigen::Index N = series.size() - (cfg.order - 1);
        cfg.block_length = static_cast<int>(std::max<Eigen::Index>(N / 10, 2));
    }
    const auto perturbations =
        block_bootstrap(series, cfg.block_length, cfg.n_perturbations, cfg.seed, cfg.order);

    const PipelineOutput base = run_pipeline(spec, series);
    std::vector<PipelineOutput> outs;
    outs.reserve(perturbations.size());
    for (const auto& p : perturbations) outs.push_back(run_pipeline(spec, p.series));

    std::vector<MetricReport> reports;
    for (Scope scope : scopes) {
        MetricReport r;
        r.scope = scope;
        r.n_perturbations = cfg.n_perturbations;
        try {
            r.faithfulness = faithfulness_from(base, outs, scope);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroVariance) throw;
        }
        r.sensitivity = sensitivity_from(base, outs, scope);
        if (scope == Scope::local) {
            double acc = 0.0;
            for (const auto& phi : base.local_phi) acc += complexity(phi);
            r.complexity = acc / static_cast<double>(base.local_phi.size());
        } else {
            r.complexity = complexity(scope_phi(base, scope, 0));
        }
        reports.push_back(r);
    }
    return reports;
}

}  // namespace tsshap
