#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "geomwork/app/commands.hpp"
#include "geomwork/app/config.hpp"
#include "geomwork/parallel.hpp"

namespace app = geomwork::app;

int main(int argc, char** argv) {
    CLI::App cli{"geomwork: geometric work of driven open two-level systems"};
    cli.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::size_t threads = geomwork::default_thread_count();
    bool trajectories = false;

    for (const auto& name : app::command_names()) {
        auto* sub = cli.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        if (name == "quasistatic") {
            sub->add_flag("--trajectories", trajectories, "also write trajectory CSVs");
        }
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : app::kConfigInvalid;
    }
    const std::string command = cli.get_subcommands().front()->get_name();

    app::ExperimentConfig config;
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw app::ConfigError("cannot read config file '" + config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        config = app::parse_config(command, text.str());
    } catch (const app::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return app::kConfigInvalid;
    }

    const app::CommandOutput output = app::run_command(config, {threads, trajectories});
    try {
        app::write_run_directory(out_dir, config, output);
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return app::kNumericFailure;
    }
    std::cout << output.summary;
    return output.exit_code;
}
