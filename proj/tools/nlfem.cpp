#include "nlfem/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"nlfem: finite-element assembly and solvers for the 1D nonlocal Laplacian"};
    std::string command, config_path, prefix = "nlfem";
    std::string commands;
    for (const auto& c : nlfem::command_names()) commands += (commands.empty() ? "" : ", ") + c;
    app.add_option("command", command, "One of: " + commands)->required();
    app.add_option("--config", config_path, "key = value configuration file")->required();
    app.add_option("--out", prefix, "Prefix for output files");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nlfem::ExitConfig;
    }
    nlfem::Config cfg;
    try {
        cfg = nlfem::Config::load(config_path);
    } catch (const nlfem::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return nlfem::ExitConfig;
    }
    return nlfem::run(command, cfg, prefix, std::cout, std::cerr);
}
