#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "warplab/cli.hpp"

int main(int argc, char** argv) {
    using namespace warplab::cli;
    CLI::App app{"warplab: numerical experiments on warped surfaces"};
    app.require_subcommand(1);

    RunRequest req;
    auto* run = app.add_subcommand("run", "run experiment configs (files or directories)");
    run->add_option("configs", req.inputs, "config files or directories of *.cfg")->required();
    run->add_option("-j,--jobs", req.jobs, "experiments to run concurrently")
        ->check(CLI::PositiveNumber);
    run->add_option("-o,--outdir", req.outdir_override, "override [experiment] outdir");

    std::vector<std::string> to_validate;
    auto* validate = app.add_subcommand("validate", "check configs without running them");
    validate->add_option("configs", to_validate, "config files or directories")->required();

    app.add_subcommand("list", "print the metric, profile, field and experiment catalogs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) return run_configs(req, std::cout, std::cerr);
        if (*validate) return validate_configs(to_validate, std::cout, std::cerr);
        std::cout << list_catalog();
        return kPass;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
