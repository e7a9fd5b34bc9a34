#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mixfront/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Two-species free-boundary model with nonlocal and mixed dispersal"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool confirm = false;

    for (const char* name : {"simulate", "eigen", "predict", "sweep", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "config file (JSON)")->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--horizon", horizon, "simulation horizon override");
        sub->add_option("--seed", seed, "seed for property campaigns");
        sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
        if (std::string(name) == "predict")
            sub->add_flag("--confirm", confirm, "run the confirming simulation");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : mixfront::exit_config;
    }

    auto* sub = app.get_subcommands().front();
    mixfront::Overrides o;
    if (sub->count("--out")) o.out = out;
    if (sub->count("--horizon")) o.horizon = horizon;
    if (sub->count("--seed")) o.seed = seed;
    o.jobs = jobs;
    return mixfront::run_command(sub->get_name(), config, o, confirm, std::cout, std::cerr);
}
