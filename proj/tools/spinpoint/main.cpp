#include <array>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw spinpoint::Error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace spinpoint::cli;

    CLI::App app{"spinpoint: spin-1/2 scattering on point interactions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "spinpoint 0.1.0");

    struct Options {
        std::string config;
        std::string out;
        int threads = -1;
    };
    Options opts;

    const std::array<std::pair<Command, const char*>, 4> commands{{
        {Command::Check, "Check current conservation of a defect's boundary matrix"},
        {Command::Scatter, "Write the 4x4 S-matrix over a momentum sweep"},
        {Command::Device, "Write channel probabilities of a device over a momentum sweep"},
        {Command::Bands, "Write the band diagram of a periodic comb"},
    }};
    for (const auto& [cmd, help] : commands) {
        auto* sub = app.add_subcommand(std::string(to_string(cmd)), help);
        sub->add_option("--config", opts.config, "JSON run configuration")->required();
        sub->add_option("--out", opts.out, "Output path (overrides the config's \"output\")");
        sub->add_option("--threads", opts.threads, "Worker threads for sweeps (0 = all cores)")
            ->check(CLI::NonNegativeNumber);
    }

    CLI11_PARSE(app, argc, argv);

    const auto* chosen = app.get_subcommands().front();
    const auto command = parse_command(chosen->get_name());

    RunConfig config;
    try {
        config = parse_config(read_file(opts.config), command);
    } catch (const ConfigError& e) {
        std::cerr << opts.config << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!opts.out.empty()) config.output = opts.out;
    if (opts.threads >= 0) config.threads = static_cast<unsigned>(opts.threads);

    return run(config, std::cout, std::cerr);
}
