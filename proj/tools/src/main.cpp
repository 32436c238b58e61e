#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcp/cli/config.hpp"
#include "gcp/cli/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Mean-field generalized contact process: uniform dynamics, spectra, spatial fronts"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "JSON config")->required();
    run->add_option("--threads", threads, "Worker cap (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
    run->add_option("--override", overrides, "Replace a config value: dotted.key=value");

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    validate->add_option("config", config_path, "JSON config")->required();
    validate->add_option("--override", overrides, "Replace a config value: dotted.key=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const gcp::cli::RunConfig config = gcp::cli::load_config(config_path, overrides);
        if (*validate) {
            std::cerr << config_path << ": ok (" << gcp::cli::to_string(config.experiment) << ")\n";
            return 0;
        }
        const auto result = gcp::cli::run(config, threads, std::cerr);
        for (const auto& path : result.outputs) {
            std::cout << path.string() << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return gcp::cli::exit_code_for(e);
    }
}
