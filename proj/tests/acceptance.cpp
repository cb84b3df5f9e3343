// Acceptance suite: one criterion per --criterion N (1..9), each printing a
// single pass/fail line. Criterion 3 needs the public datasets and will try
// to fetch them when absent.

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "tsshap/config.hpp"
#include "tsshap/datasets.hpp"
#include "tsshap/error.hpp"
#include "tsshap/report.hpp"
#include "tsshap/robustness.hpp"

using namespace tsshap;
using tsshap::testing::constant_series;
using tsshap::testing::seasonal_series;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

double elapsed_s(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- criterion 1: tree_shap == brute_shapley on randomized ensembles ----

struct RandomTreeGen {
    std::mt19937_64 rng;
    int d;

    int build(Tree& tree, double cover, int depth, int max_depth) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const bool leaf = depth >= max_depth || cover < 2.0 || u(rng) < 0.25;
        if (leaf) {
            tree.nodes[static_cast<std::size_t>(id)] = {
                -1, 0.0, -1, -1, std::uniform_real_distribution<double>(-5, 5)(rng), cover};
            return id;
        }
        const int feature = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
        const double threshold = u(rng);
        const auto total = static_cast<long long>(cover);
        const long long left_cover =
            1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(total - 1));
        const int left = build(tree, static_cast<double>(left_cover), depth + 1, max_depth);
        const int right =
            build(tree, static_cast<double>(total - left_cover), depth + 1, max_depth);
        tree.nodes[static_cast<std::size_t>(id)] = {feature, threshold, left, right, 0.0, cover};
        return id;
    }
};

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    int ensembles = 0;
    double max_err = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 8);
        RandomTreeGen gen{std::mt19937_64(rng()), d};
        const int n_trees = 1 + static_cast<int>(gen.rng() % 5);
        std::vector<Tree> trees;
        for (int i = 0; i < n_trees; ++i) {
            Tree t;
            gen.build(t, 4.0 + static_cast<double>(gen.rng() % 60), 0, 3);
            trees.push_back(std::move(t));
        }
        std::vector<std::string> names;
        for (int f = 0; f < d; ++f) names.push_back("f" + std::to_string(f));
        const TreeEnsemble model(std::uniform_real_distribution<double>(-2, 2)(gen.rng),
                                 std::uniform_real_distribution<double>(0.05, 1.0)(gen.rng),
                                 std::move(trees), std::move(names));
        ++ensembles;
        for (int k = 0; k < 5; ++k) {
            Eigen::RowVectorXd x(d);
            for (int f = 0; f < d; ++f)
                x[f] = std::uniform_real_distribution<double>(0, 1)(rng);
            const ShapVector fast = tree_shap(model, x);
            const ShapVector slow = brute_shapley(model, x);
            for (int f = 0; f < d; ++f)
                max_err = std::max(max_err, std::abs(fast.phi[f] - slow.phi[f]));
            expect((fast.phi - slow.phi).cwiseAbs().maxCoeff() <= 1e-9,
                   "tree_shap diverged from the brute-force oracle by " +
                       std::to_string((fast.phi - slow.phi).cwiseAbs().maxCoeff()));
        }
    }
    const double sec = elapsed_s(start);
    expect(ensembles >= 500, "ran fewer than 500 ensembles");
    expect(sec < 60.0, "runtime " + std::to_string(sec) + "s exceeds 60s");
    std::ostringstream note;
    note << ensembles << " ensembles x 5 instances, max |err| " << max_err << ", " << sec << "s";
    std::cout << "  " << note.str() << "\n";
}

// ---- shared pipeline fixtures ----

FeatureConfig default_monthly_features() {
    FeatureConfig f;
    f.lags = {1, 2, 3};
    f.seasonal_lag_count = 1;
    f.season_length = 12;
    f.rolling_windows = {3, 6};
    f.expanding = true;
    f.trend_degree = 1;
    f.date_features = true;
    return f;
}

std::unique_ptr<Forecaster> named_forecaster(const std::string& name) {
    if (name == "naive") return std::make_unique<NaiveForecaster>();
    if (name == "seasonal_naive") return std::make_unique<SeasonalNaiveForecaster>(12);
    if (name == "moving_average") return std::make_unique<MovingAverageForecaster>(6);
    if (name == "ses") return std::make_unique<SimpleExpSmoothingForecaster>(0.5);
    GbtParams p;
    p.n_trees = 60;
    return std::make_unique<GbtReductionForecaster>(default_monthly_features(), p);
}

// ---- criterion 2: local accuracy on everything the pipeline emits ----

void criterion_2() {
    const TimeSeries s = seasonal_series(240, 12, 99);
    int checked = 0;
    for (const std::string name : {"naive", "seasonal_naive", "moving_average", "gbt_reduction"}) {
        auto fc = named_forecaster(name);
        const SurrogateModel model =
            fit_explainer(s, *fc, Horizon(12), default_monthly_features(), GbtParams{}, {});
        // explain_* carry a built-in release-blocking additivity assertion;
        // re-verify the emitted numbers independently here
        for (int h = 1; h <= 12; ++h) {
            const Explanation e = explain_local(model, s, h);
            expect(std::abs(e.base_value + e.phi.sum() - e.prediction) <=
                       1e-6 * std::max(1.0, std::abs(e.prediction)),
                   "local accuracy violated at step " + std::to_string(h) + " (" + name + ")");
            ++checked;
        }
        const Explanation semi = explain_semi_local(model, s, 1, 12);
        expect(std::abs(semi.base_value + semi.phi.sum() - semi.prediction) <=
                   1e-6 * std::max(1.0, std::abs(semi.prediction)),
               "semi-local mean additivity violated (" + name + ")");
        ++checked;
        explain_global(model, s);  // throws internally if any row breaks additivity
        ++checked;
    }
    std::cout << "  " << checked << " explanations verified across 4 forecasters\n";
}

// ---- criterion 3: fidelity bands on the public datasets ----

std::string locate_dataset(const std::string& name) {
    std::vector<std::string> dirs;
    if (const char* env = std::getenv("TSSHAP_DATA_DIR")) dirs.push_back(env);
    dirs.push_back(TSSHAP_DATA_DIR);
    dirs.push_back("data");
    for (const auto& dir : dirs) {
        const std::string path = dir + "/" + name + ".csv";
        if (std::filesystem::exists(path)) return path;
    }
    // not on disk: fetch into the first candidate directory
    return fetch_dataset(name, dirs.front());
}

void criterion_3() {
    const auto run_one = [](const std::string& dataset, const std::string& fc_name,
                            const nlohmann::json& fc_params) {
        const auto start = std::chrono::steady_clock::now();
        const std::string csv = locate_dataset(dataset);
        RunConfig cfg;
        cfg.input = csv;
        cfg.forecaster = {fc_name, fc_params};
        cfg.robustness_enabled = false;
        cfg.render_svg = false;
        cfg.output_dir = std::string(TSSHAP_TEST_TMP) + "/accept3_" + dataset + "_" + fc_name;
        const nlohmann::json report = run(cfg);
        const double mase = report.at("fidelity").at("mase").get<double>();
        const double sec = elapsed_s(start);
        std::cout << "  " << dataset << " / " << fc_name << ": surrogate MASE " << mase << " ("
                  << sec << "s)\n";
        expect(mase <= 0.5, dataset + "/" + fc_name + ": MASE " + std::to_string(mase) + " > 0.5");
        expect(sec < 300.0, dataset + "/" + fc_name + ": runtime over 5 minutes");
    };
    try {
        for (const std::string dataset : {"us-unemployment", "bike-sharing"}) {
            const int season = dataset == "us-unemployment" ? 12 : 7;
            run_one(dataset, "naive", nlohmann::json::object());
            run_one(dataset, "seasonal_naive", {{"season_length", season}});
            run_one(dataset, "moving_average", {{"order", 6}});
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::FetchFailed) {
            throw Failure(std::string("BLOCKED: public dataset unavailable and no network to "
                                      "fetch it (run `tsshap datasets fetch` on a connected "
                                      "machine first) - ") +
                          e.what());
        }
        throw;
    }
}

// ---- criterion 4: top global feature identifies the forecaster ----

std::string top_global_feature(const std::string& fc_name, const TimeSeries& s) {
    auto fc = named_forecaster(fc_name);
    // step 1 gives the surrogate one training row per covered index
    const SurrogateModel model =
        fit_explainer(s, *fc, Horizon(12), default_monthly_features(), GbtParams{}, {120, 1});
    const Explanation g = explain_global(model, s);
    Eigen::Index best = 0;
    g.phi.maxCoeff(&best);
    return g.feature_names[static_cast<std::size_t>(best)];
}

void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    const TimeSeries s = seasonal_series(240, 12, 424242);

    const std::string naive_top = top_global_feature("naive", s);
    std::cout << "  naive top feature: " << naive_top << "\n";
    expect(naive_top == "y(t-1)", "naive surrogate top feature is " + naive_top);

    const std::string snaive_top = top_global_feature("seasonal_naive", s);
    std::cout << "  seasonal_naive top feature: " << snaive_top << "\n";
    expect(snaive_top == "y(t-1*12)", "seasonal-naive surrogate top feature is " + snaive_top);

    const std::string ma_top = top_global_feature("moving_average", s);
    std::cout << "  moving_average top feature: " << ma_top << "\n";
    expect(ma_top == "y-mean(t-1,t-6)" || ma_top == "y-max(t-1,t-6)" || ma_top == "y-min(t-1,t-6)",
           "moving-average surrogate top feature is " + ma_top);

    // deterministic under the seed: repeat one of them
    expect(top_global_feature("naive", s) == naive_top, "top feature not reproducible");
    const double sec = elapsed_s(start);
    expect(sec < 60.0, "runtime " + std::to_string(sec) + "s exceeds 60s");
}

// ---- criterion 5: complexity ordering ----

void criterion_5() {
    Eigen::VectorXd uniform(2);
    uniform << 1.0, 1.0;
    expect(std::abs(complexity(uniform) - std::log(2.0)) <= 1e-12,
           "complexity([1,1]) != ln 2");

    const TimeSeries s = seasonal_series(240, 12, 777);
    const auto global_complexity = [&](const std::string& name) {
        auto fc = named_forecaster(name);
        const SurrogateModel model =
            fit_explainer(s, *fc, Horizon(12), default_monthly_features(), GbtParams{}, {120, 1});
        return complexity(explain_global(model, s).phi);
    };
    const double naive_c = global_complexity("naive");
    const double gbt_c = global_complexity("gbt_reduction");
    std::cout << "  global complexity: naive " << naive_c << " vs gbt_reduction " << gbt_c << "\n";
    expect(naive_c < gbt_c, "complexity ordering violated");
}

// ---- criterion 6: robustness metric sanity ----

void criterion_6() {
    const TimeSeries s = seasonal_series(120, 12, 55);
    PipelineSpec spec;
    spec.make_forecaster = [] { return std::make_unique<MovingAverageForecaster>(6); };
    spec.H = Horizon(6);
    spec.features = default_monthly_features();
    spec.gbt.n_trees = 60;
    spec.splitter = {60, 3};

    RobustnessConfig cfg;
    cfg.order = 5;
    cfg.block_length = 10;
    cfg.n_perturbations = 6;
    cfg.seed = 31;
    const auto a = evaluate_robustness(spec, s, cfg, {Scope::global, Scope::semi_local});
    const auto b = evaluate_robustness(spec, s, cfg, {Scope::global, Scope::semi_local});
    for (std::size_t i = 0; i < a.size(); ++i) {
        expect(a[i].faithfulness.has_value(), "faithfulness unexpectedly undefined");
        expect(*a[i].faithfulness >= -1.0 && *a[i].faithfulness <= 1.0,
               "faithfulness outside [-1, 1]");
        expect(*a[i].faithfulness == *b[i].faithfulness, "faithfulness not seed-reproducible");
        expect(a[i].sensitivity == b[i].sensitivity, "sensitivity not seed-reproducible");
    }
    std::cout << "  global faithfulness " << *a[0].faithfulness << ", sensitivity "
              << a[0].sensitivity << "\n";

    // zero-residual degenerate perturbation: a linear series decomposes with
    // residual 0, so the perturbed pipeline is identical and sensitivity is 0
    std::vector<double> lin(120);
    for (int i = 0; i < 120; ++i) lin[static_cast<std::size_t>(i)] = 3.0 + 0.5 * i;
    const TimeSeries linear = tsshap::testing::series_of(lin, Periodicity::monthly, "2000-01-01");
    const auto perturbations = block_bootstrap(linear, 10, 4, 7, 5);
    const double sens = sensitivity(spec, linear, perturbations, Scope::global);
    expect(sens == 0.0, "zero-residual sensitivity is " + std::to_string(sens) + ", not 0");

    // block length N reproduces the original exactly on the interior
    const Decomposition d = decompose(s, 5);
    const auto full = block_bootstrap(s, static_cast<int>(d.end - d.begin), 2, 13, 5);
    for (const auto& sample : full)
        for (Eigen::Index t = 0; t < s.size(); ++t)
            expect(sample.series.value(t) == s.value(t),
                   "L_b = N does not reproduce the series");
}

// ---- criterion 7: semi-local over one step equals local ----

void criterion_7() {
    const TimeSeries s = seasonal_series(200, 12, 66);
    for (const std::string name :
         {"naive", "seasonal_naive", "moving_average", "ses", "gbt_reduction"}) {
        auto fc = named_forecaster(name);
        const SurrogateModel model =
            fit_explainer(s, *fc, Horizon(6), default_monthly_features(), GbtParams{}, {});
        for (int h = 1; h <= 6; ++h) {
            const Explanation local = explain_local(model, s, h);
            const Explanation semi = explain_semi_local(model, s, h, h);
            for (Eigen::Index f = 0; f < local.phi.size(); ++f) {
                expect(std::abs(local.phi[f] - semi.phi[f]) <= 1e-12,
                       name + ": semi-local(h,h) != local(h) at step " + std::to_string(h));
            }
        }
    }
    std::cout << "  5 forecasters x 6 steps, elementwise within 1e-12\n";
}

// ---- criterion 8: recursive forecast of a constant series ----

void criterion_8() {
    const TimeSeries s = constant_series(90, 4.75);
    NaiveForecaster fc;
    FeatureConfig features;
    features.lags = {1, 2, 3};
    features.rolling_windows = {3, 6};
    features.expanding = true;
    const SurrogateModel model =
        fit_explainer(s, fc, Horizon(20), features, GbtParams{}, {45, 1});
    const ForecastPath path = surrogate_forecast(model, s, Horizon(20));
    for (int h = 0; h < 20; ++h) {
        expect(std::abs(path.values[h] - 4.75) <= 1e-6,
               "step " + std::to_string(h + 1) + " drifted to " +
                   std::to_string(path.values[h]));
    }
    std::cout << "  20 recursive steps stay within 1e-6 of the constant\n";
}

// ---- criterion 9: byte-identical reports modulo the timestamp ----

void criterion_9() {
    const std::string dir = std::string(TSSHAP_TEST_TMP) + "/accept9";
    std::filesystem::create_directories(dir);
    const std::string csv = dir + "/series.csv";
    {
        const TimeSeries s = seasonal_series(120, 12, 2029);
        write_csv(s, csv);
    }
    nlohmann::json j;
    j["input"] = csv;
    j["forecaster"] = {{"name", "moving_average"}, {"params", {{"order", 6}}}};
    j["horizon"] = 6;
    j["seed"] = 17;
    j["robustness"] = {{"n_perturbations", 4}};
    j["curves"] = {{"features", {"y(t-1)"}}, {"scope", "global"}};
    const std::string cfg = dir + "/config.json";
    {
        std::ofstream out(cfg);
        out << j.dump(2);
    }

    const std::string bin = TSSHAP_BIN;
    const int rc1 = std::system(
        (bin + " run --config " + cfg + " --out " + dir + "/a >/dev/null").c_str());
    const int rc2 = std::system(
        (bin + " run --config " + cfg + " --out " + dir + "/b >/dev/null").c_str());
    expect(WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0, "tsshap run failed");

    const auto load = [](const std::string& path) {
        std::ifstream in(path);
        nlohmann::json doc;
        in >> doc;
        return doc;
    };
    nlohmann::json a = load(dir + "/a/report.json");
    nlohmann::json b = load(dir + "/b/report.json");
    const std::string ts_a = a.at("metadata").at("timestamp").get<std::string>();
    a.at("metadata").erase("timestamp");
    b.at("metadata").erase("timestamp");
    expect(a.dump() == b.dump(), "reports differ beyond the timestamp");

    // the SVG artifacts must match exactly
    for (const std::string f : {"forecast_overlay.svg", "global_importance.svg"}) {
        std::ifstream fa(dir + "/a/" + f), fb(dir + "/b/" + f);
        const std::string sa((std::istreambuf_iterator<char>(fa)),
                             std::istreambuf_iterator<char>());
        const std::string sb((std::istreambuf_iterator<char>(fb)),
                             std::istreambuf_iterator<char>());
        expect(!sa.empty() && sa == sb, f + " differs between runs");
    }
    std::cout << "  two runs byte-identical modulo metadata.timestamp (" << ts_a << ")\n";
}

struct Criterion {
    int id;
    const char* title;
    void (*fn)();
};

constexpr Criterion kCriteria[] = {
    {1, "TreeSHAP oracle equivalence (500 ensembles, 1e-9)", criterion_1},
    {2, "local accuracy on every emitted explanation", criterion_2},
    {3, "surrogate fidelity MASE <= 0.5 on public datasets", criterion_3},
    {4, "top global feature identifies interpretable forecasters", criterion_4},
    {5, "complexity ordering naive < gbt_reduction", criterion_5},
    {6, "robustness metric sanity", criterion_6},
    {7, "semi-local over one step equals local", criterion_7},
    {8, "recursive constant-series forecast", criterion_8},
    {9, "byte-identical reports under a fixed seed", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
    }
    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        try {
            c.fn();
            std::cout << "criterion " << c.id << ": PASS - " << c.title << "\n";
        } catch (const Failure& f) {
            std::cout << "criterion " << c.id << ": FAIL - " << c.title << ": " << f.what()
                      << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "criterion " << c.id << ": FAIL - " << c.title
                      << " (unexpected error: " << e.what() << ")\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
