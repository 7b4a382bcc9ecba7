#pragma once

// Versioned JSON run configuration shared by all subcommands. Parsing is
// strict: unknown keys anywhere are rejected, diagnostics carry the JSON
// path of the offending field, and every default is materialized into the
// normalized echo that gets embedded in output files.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "virtspin/encoding.hpp"
#include "virtspin/gates.hpp"
#include "virtspin/pulse.hpp"
#include "virtspin/spinsys.hpp"

namespace virtspin::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;  // exit code 2
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;  // exit code 3
};

struct GateConfig {
    gates::GateSpec spec;
    std::optional<double> omega1;  // default: 0.02 * theta
    double dt_max = 1e-5;
    double fidelity_floor = 0.0;
};

struct StabilityConfig {
    encoding::LogicalState logical{};  // default |01>
    double threshold = 0.99;
    int grid_points = 2001;
    double grid_periods = 50.0;
    std::vector<double> j_values;
    std::vector<double> d_values;
};

struct EvolveConfig {
    encoding::LogicalState initial{};  // default |00>
    encoding::EncodingScheme initial_basis = encoding::EncodingScheme::virtual_spin;
    int grid_points = 501;
    double grid_periods = 5.0;
    std::optional<gates::GateSpec> gate;
    std::optional<double> gate_omega1;
    std::optional<pulse::PulseProgram> program;
    double dt_max = 1e-5;
};

enum class OutputFormat { csv, json };

struct RunConfig {
    spinsys::SystemParams system;
    bool seed_present = false;  // perturbation.seed appeared in config or via --seed
    GateConfig gate;
    StabilityConfig stability;
    EvolveConfig evolve;
    OutputFormat format = OutputFormat::csv;
};

RunConfig parse_config_text(const std::string& text);  // throws ConfigError
RunConfig parse_config_file(const std::string& path);  // + IoError on unreadable files

// Canonical JSON with every default resolved (omega1 etc.); deterministic.
std::string normalized_config_json(const RunConfig& cfg, bool pretty);

double resolved_gate_omega1(const RunConfig& cfg);  // config value or 0.02*theta

}  // namespace virtspin::cli
