#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tsshap/explainer.hpp"
#include "tsshap/series.hpp"

namespace tsshap {

/// Centered moving-average split of y into a smooth part and a residual.
/// Both arrays are full length; only [begin, end) is defined (k points are
/// lost at each side, m = 2k+1).
struct Decomposition {
    int order = 0;  // m, odd
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
    Eigen::ArrayXd trend_cycle;
    Eigen::ArrayXd residual;
};

Decomposition decompose(const TimeSeries& series, int order);

/// A perturbed copy: trend + block-bootstrapped residual on the interior,
/// original values at the boundary points.
struct PerturbedSample {
    TimeSeries series;
    int block_length = 0;
    std::uint64_t seed = 0;
};

std::vector<PerturbedSample> block_bootstrap(const TimeSeries& series, int block_length,
                                             int n_samples, std::uint64_t seed, int order);

struct RobustnessConfig {
    int order = 0;           // m; 0 = default by periodicity (7 daily, 5 weekly/monthly, 25 hourly)
    int block_length = 0;    // L_b; 0 = max(N/10, 2)
    int n_perturbations = 20;
    std::uint64_t seed = 0;
};

int default_decomposition_order(Periodicity p) noexcept;

/// Everything needed to refit the whole pipeline on a perturbed series.
struct PipelineSpec {
    std::function<std::unique_ptr<Forecaster>()> make_forecaster;
    Horizon H{1};
    FeatureConfig features;
    GbtParams gbt;
    SplitterConfig splitter;
};

/// One full pipeline evaluation on one series: the forecaster's own forecast
/// from the series end plus the surrogate explanations at every scope.
struct PipelineOutput {
    Eigen::ArrayXd forecast;                // H values from the refit forecaster
    std::vector<Eigen::VectorXd> local_phi; // per step 1..H
    Eigen::VectorXd semi_local_phi;         // mean over 1..H
    Eigen::VectorXd global_phi;             // mean |phi| over training rows
};

PipelineOutput run_pipeline(const PipelineSpec& spec, const TimeSeries& series);

/// Pearson correlation between prediction deltas and summed attribution
/// deltas over (perturbation, step) pairs. ZeroVariance when either delta
/// sequence is constant.
double faithfulness(const PipelineSpec& spec, const TimeSeries& series,
                    const std::vector<PerturbedSample>& perturbations, Scope scope);

/// Monte Carlo mean Euclidean distance between the explanation on the
/// original series and on each perturbed neighbour.
double sensitivity(const PipelineSpec& spec, const TimeSeries& series,
                   const std::vector<PerturbedSample>& perturbations, Scope scope);

/// Entropy of the normalized absolute importance distribution.
double complexity(const Eigen::Ref<const Eigen::VectorXd>& phi);

struct MetricReport {
    Scope scope = Scope::global;
    std::optional<double> faithfulness;  // empty when ZeroVariance
    double sensitivity = 0.0;
    double complexity = 0.0;
    int n_perturbations = 0;
};

/// All three metrics per requested scope, sharing one set of perturbed
/// pipeline refits.
std::vector<MetricReport> evaluate_robustness(const PipelineSpec& spec, const TimeSeries& series,
                                              const RobustnessConfig& config,
                                              const std::vector<Scope>& scopes);

// exposed for reuse between the individual metric entry points
double faithfulness_from(const PipelineOutput& base, const std::vector<PipelineOutput>& perturbed,
                         Scope scope);
double sensitivity_from(const PipelineOutput& base, const std::vector<PipelineOutput>& perturbed,
                        Scope scope);

}  // namespace tsshap
