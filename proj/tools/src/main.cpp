#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wva_app/commands.hpp"
#include "wva_app/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Weak-value-amplification interferometer simulator"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    std::uint64_t seed = 0;
    app.add_option("-c,--config", config_path, "YAML scenario file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override a config key, e.g. --set interferometer.kappa=0.1");
    app.add_option("-o,--output-dir", output_dir, "Output directory (default: $WVA_OUTPUT_DIR or wva-output)");
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_flag("--print-config", "Print the effective configuration and exit");

    app.fallthrough();
    for (const auto& name : wva::app::subcommand_names()) app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    wva::app::ScenarioConfig config;
    try {
        config = config_path.empty() ? wva::app::parse_config_text("", overrides, "<defaults>")
                                     : wva::app::parse_config_file(config_path, overrides);
        if (!output_dir.empty()) {
            config.output.directory = output_dir;
        } else if (const char* env = std::getenv("WVA_OUTPUT_DIR"); env && *env) {
            config.output.directory = env;
        }
        if (*seed_opt) config.seed = seed;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "wva: " << e.what() << "\n";
        return 2;
    }
    if (app.count("--print-config")) {
        std::cout << wva::app::emit_config(config);
        return 0;
    }
    const auto* sub = app.get_subcommands().front();
    return wva::app::run_subcommand(sub->get_name(), config, std::cout, std::cerr);
}
