#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tsshap/config.hpp"
#include "tsshap/datasets.hpp"
#include "tsshap/error.hpp"
#include "tsshap/report.hpp"

namespace {

struct RunArgs {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    bool no_robustness = false;
};

tsshap::RunConfig load_with_overrides(const RunArgs& args) {
    tsshap::RunConfig cfg = tsshap::RunConfig::from_file(args.config_path);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    if (args.no_robustness) cfg.robustness_enabled = false;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surrogate SHAP explanations for black-box time-series forecasters"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "run the full pipeline and write report.json");
    run_cmd->add_option("--config", run_args.config_path, "config file (JSON)")->required();
    run_cmd->add_option("--out", run_args.out_dir, "output directory (overrides config)");
    run_cmd->add_option("--seed", run_args.seed, "random seed (overrides config)");
    run_cmd->add_flag("--no-robustness", run_args.no_robustness,
                      "skip the perturbation-based metrics");

    RunArgs explain_args;
    std::string scope = "global";
    int step = 1, from = 1, to = 0;
    auto* explain_cmd =
        app.add_subcommand("explain", "print one explanation as JSON to stdout");
    explain_cmd->add_option("--config", explain_args.config_path, "config file (JSON)")
        ->required();
    explain_cmd->add_option("--scope", scope, "local | semilocal | global")->required();
    explain_cmd->add_option("--step", step, "horizon step for local scope (default 1)");
    explain_cmd->add_option("--from", from, "interval start for semilocal scope");
    explain_cmd->add_option("--to", to, "interval end for semilocal scope (default H)");
    explain_cmd->add_option("--seed", explain_args.seed, "random seed (overrides config)");

    auto* datasets_cmd = app.add_subcommand("datasets", "manage the public benchmark datasets");
    std::string fetch_name, fetch_dir = "data", mirror;
    auto* fetch_cmd = datasets_cmd->add_subcommand("fetch", "download and normalize a dataset");
    fetch_cmd->add_option("name", fetch_name, "us-unemployment | bike-sharing | peyton-manning")
        ->required();
    fetch_cmd->add_option("--dir", fetch_dir, "destination directory (default data/)");
    fetch_cmd->add_option("--mirror", mirror, "base URL overriding the upstream sources");
    auto* list_cmd = datasets_cmd->add_subcommand("list", "list known datasets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const tsshap::RunConfig cfg = load_with_overrides(run_args);
            tsshap::run(cfg);
            std::cout << cfg.output_dir << "/report.json\n";
            return 0;
        }
        if (*explain_cmd) {
            const tsshap::RunConfig cfg = load_with_overrides(explain_args);
            std::cout << tsshap::explain_only(cfg, scope, step, from, to).dump(2) << "\n";
            return 0;
        }
        if (*fetch_cmd) {
            const std::string path = tsshap::fetch_dataset(fetch_name, fetch_dir, mirror);
            std::cout << path << "\n";
            return 0;
        }
        if (*list_cmd) {
            for (const auto& name : tsshap::dataset_names()) std::cout << name << "\n";
            return 0;
        }
    } catch (const tsshap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
