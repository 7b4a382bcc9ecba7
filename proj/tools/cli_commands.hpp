#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace virtspin::cli {

struct CommandOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::string> format;          // "csv" | "json", overrides config
    bool emit_pulses = false;                   // gate only
    std::optional<double> fidelity_floor;       // gate only, overrides config
    std::optional<std::uint64_t> seed;          // overrides perturbation seed
    bool color = false;                         // ANSI diagnostics on stderr
};

// Exit codes: 0 ok, 2 config/validation, 3 I/O, 4 internal physics
// self-check failed, 5 fidelity below the configured floor.
int cmd_spectrum(const CommandOptions& opt);
int cmd_gate(const CommandOptions& opt);
int cmd_stability(const CommandOptions& opt);
int cmd_evolve(const CommandOptions& opt);

}  // namespace virtspin::cli
