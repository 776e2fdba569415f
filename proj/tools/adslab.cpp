#include <CLI11.hpp>

#include "ads/harness.hpp"

// Command-line driver. Subcommands: sharpness | count | spectrum | deform |
// laplacian | series-eval. Exit codes: 0 success, 2 config error,
// 3 numerical failure.

int main(int argc, char** argv) {
    CLI::App app{"adslab: discrete-spectrum certification on anti-de Sitter quotients"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    int depth_override = -1;
    long seed_override = -1;
    int threads = 0;

    const std::vector<std::string> names = {"sharpness", "count",     "spectrum",
                                            "deform",    "laplacian", "series-eval"};
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--depth", depth_override, "override [run] depth");
        sub->add_option("--seed", seed_override, "override [run] seed");
        sub->add_option("--threads", threads, "worker count (speed only)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    ads::ExperimentConfig cfg;
    try {
        cfg = ads::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    if (depth_override > 0) cfg.depth = depth_override;
    if (seed_override >= 0) cfg.seed = std::uint64_t(seed_override);
    if (threads > 0) cfg.threads = threads;

    return ads::run_command(command, cfg, out_dir);
}
