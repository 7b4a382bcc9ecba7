#include <cstdlib>
#include <iostream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "cli_commands.hpp"
#include "virtspin/version.hpp"

namespace {

using virtspin::cli::CommandOptions;

void add_common(CLI::App* sub, CommandOptions& opt) {
    sub->add_option("--config", opt.config_path, "path to the JSON run configuration")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory (default: current directory)");
    sub->add_option("--format", opt.format, "table output format: csv or json");
    sub->add_option("--seed", opt.seed, "override the perturbation seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-spin virtual-qubit encoding toolkit"};
    app.set_version_flag("--version", std::string("virtspin ") + virtspin::kVersion);
    app.require_subcommand(1);

    CommandOptions opt;
    opt.color = ::isatty(::fileno(stderr)) && std::getenv("VIRTSPIN_NO_COLOR") == nullptr;

    CLI::App* spectrum = app.add_subcommand("spectrum", "transition frequencies and intensities");
    add_common(spectrum, opt);

    CLI::App* gate = app.add_subcommand("gate", "synthesize and score a logical gate");
    add_common(gate, opt);
    gate->add_flag("--emit-pulses", opt.emit_pulses, "also write the pulse program JSON");
    gate->add_option("--fidelity-floor", opt.fidelity_floor,
                     "exit 5 when the phase-optimized fidelity is below this floor");

    CLI::App* stability = app.add_subcommand("stability", "encoded-state fidelity under free evolution");
    add_common(stability, opt);

    CLI::App* evolve = app.add_subcommand("evolve", "time-resolved logical populations");
    add_common(evolve, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << (opt.color ? "\x1b[31merror:\x1b[0m " : "error: ") << e.what() << "\n";
        return 2;
    }

    if (spectrum->parsed()) return virtspin::cli::cmd_spectrum(opt);
    if (gate->parsed()) return virtspin::cli::cmd_gate(opt);
    if (stability->parsed()) return virtspin::cli::cmd_stability(opt);
    if (evolve->parsed()) return virtspin::cli::cmd_evolve(opt);
    return 2;
}
