// nsch - command-line driver: run | check-potential | compare-forms | twin-run
#include "nsch/commands.hpp"
#include "nsch/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum Exit { ok = 0, config_error = 1, divergence = 2, io_error = 3 };

int report(const char* kind, const std::exception& e, int code)
{
    std::cerr << "nsch: " << kind << ": " << e.what() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pseudo-spectral Navier-Stokes-Cahn-Hilliard-Keller-Segel simulator"};
    app.require_subcommand(1);

    std::string path;
    std::string ladder;
    auto* run = app.add_subcommand("run", "integrate a configuration");
    auto* check = app.add_subcommand("check-potential", "tabulate the regularized potential");
    auto* compare = app.add_subcommand("compare-forms", "paired runs of both sigma-equation forms");
    auto* twin = app.add_subcommand("twin-run", "perturbed twin runs over a delta ladder");
    for (auto* sc : {run, check, compare, twin})
        sc->add_option("config", path, "configuration file")->required();
    twin->add_option("--delta-ladder", ladder, "comma-separated perturbation sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    try {
        const nsch::RunConfig cfg = nsch::load_config(path);
        if (run->parsed())
            nsch::cmd_run(cfg, std::cout);
        else if (check->parsed())
            nsch::cmd_check_potential(cfg, std::cout);
        else if (compare->parsed())
            nsch::cmd_compare_forms(cfg, std::cout);
        else {
            std::vector<double> deltas;
            if (!ladder.empty()) {
                try {
                    deltas = nsch::parse_real_list(ladder);
                } catch (const nsch::Error& e) {
                    throw nsch::ConfigError(std::string("--delta-ladder: ") + e.what());
                }
            }
            nsch::cmd_twin_run(cfg, deltas, std::cout);
        }
    } catch (const nsch::IoError& e) {
        return report("I/O error", e, io_error);
    } catch (const nsch::DivergenceError& e) {
        return report("divergence", e, divergence);
    } catch (const nsch::StabilityError& e) {
        return report("divergence", e, divergence);
    } catch (const nsch::SingularityError& e) {
        return report("divergence", e, divergence);
    } catch (const nsch::Error& e) {
        return report("configuration error", e, config_error);
    } catch (const std::exception& e) {
        return report("error", e, io_error);
    }
    return ok;
}
