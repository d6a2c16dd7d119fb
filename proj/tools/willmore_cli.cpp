#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "willmore/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Clamped Willmore graphs: fixed-point solves, norms and verification studies"};
    std::string config_path;
    std::string command = "solve";
    std::optional<std::string> out_dir;
    std::optional<int> resolution;
    std::optional<double> epsilon;
    bool quiet = false;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--command", command, "solve | verify-identity | norms | energy | sweep | convergence-study");
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--resolution", resolution, "cells per unit length (overrides resolution)");
    app.add_option("--epsilon", epsilon, "boundary amplitude (overrides amplitude)");
    app.add_flag("--quiet", quiet, "suppress the summary on standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : willmore::kExitConfiguration;
    }

    std::string text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "configuration error: cannot read " << config_path << '\n';
            return willmore::kExitConfiguration;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    std::vector<std::string> overrides;
    if (out_dir) overrides.push_back("output_dir = " + *out_dir);
    if (resolution) overrides.push_back("resolution = " + std::to_string(*resolution));
    if (epsilon) {
        std::ostringstream os;
        os.precision(17);
        os << *epsilon;
        overrides.push_back("amplitude = " + os.str());
    }

    willmore::RunOptions options;
    options.quiet = quiet;
    return willmore::run_text(command, text, overrides, options, out_dir.value_or("willmore-out"));
}
