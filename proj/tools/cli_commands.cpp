#include "cli_commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <nlohmann/json.hpp>

#include "cli_config.hpp"
#include "virtspin/encoding.hpp"
#include "virtspin/gates.hpp"
#include "virtspin/numfmt.hpp"
#include "virtspin/pulse.hpp"
#include "virtspin/spectrum.hpp"
#include "virtspin/spinsys.hpp"
#include "virtspin/stability.hpp"
#include "virtspin/version.hpp"

namespace virtspin::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

void print_err(const CommandOptions& o, const std::string& msg) {
    if (o.color)
        std::cerr << "\x1b[31merror:\x1b[0m " << msg << "\n";
    else
        std::cerr << "error: " << msg << "\n";
}

void print_warn(const CommandOptions& o, const std::string& msg) {
    if (o.color)
        std::cerr << "\x1b[33mwarning:\x1b[0m " << msg << "\n";
    else
        std::cerr << "warning: " << msg << "\n";
}

void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + p.string() + "'");
}

ojson meta_json(const RunConfig& cfg, const char* command) {
    ojson m;
    m["tool"] = "virtspin";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = ojson::parse(normalized_config_json(cfg, false));
    return m;
}

std::string csv_meta(const RunConfig& cfg, const char* command) {
    return std::string("# virtspin ") + kVersion + "\n# command: " + command +
           "\n# config: " + normalized_config_json(cfg, false) + "\n";
}

RunConfig load(const CommandOptions& opt) {
    RunConfig cfg = parse_config_file(opt.config_path);
    if (opt.format) {
        if (*opt.format == "csv")
            cfg.format = OutputFormat::csv;
        else if (*opt.format == "json")
            cfg.format = OutputFormat::json;
        else
            throw ConfigError("--format must be 'csv' or 'json'");
    }
    if (opt.seed && cfg.system.perturbation) {
        cfg.system.perturbation->seed = *opt.seed;
        cfg.seed_present = true;
    }
    if (opt.fidelity_floor) {
        if (*opt.fidelity_floor < 0 || *opt.fidelity_floor > 1)
            throw ConfigError("--fidelity-floor must lie in [0, 1]");
        cfg.gate.fidelity_floor = *opt.fidelity_floor;
    }
    return cfg;
}

void emit_validation_warnings(const CommandOptions& opt, const RunConfig& cfg) {
    for (const auto& w : spinsys::validate(cfg.system)) print_warn(opt, w);
}

void require_seed_for_ensembles(const RunConfig& cfg) {
    if (cfg.system.perturbation &&
        cfg.system.perturbation->kind == spinsys::PerturbationSpec::Kind::random_local_fields &&
        !cfg.seed_present)
        throw ConfigError(
            "random_local_fields requires an explicit seed ($.system.perturbation.seed or --seed)");
}

ojson finite_or_null(double v) {
    if (std::isfinite(v)) return ojson(v);
    return ojson(nullptr);
}

template <typename F>
int run_guarded(const CommandOptions& opt, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        print_err(opt, e.what());
        return 2;
    } catch (const IoError& e) {
        print_err(opt, e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        print_err(opt, e.what());
        return 2;
    } catch (const std::exception& e) {
        print_err(opt, std::string("internal error: ") + e.what());
        return 4;
    }
}

std::vector<double> linspace(double t0, double t1, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

}  // namespace

int cmd_spectrum(const CommandOptions& opt) {
    return run_guarded(opt, [&]() -> int {
        const RunConfig cfg = load(opt);
        emit_validation_warnings(opt, cfg);
        const spinsys::Eigensystem es = spinsys::diagonalize(cfg.system);
        const auto lines = spectrum::transition_table(es);
        const auto rules = spectrum::combination_rules_check(lines);

        const fs::path dir(opt.out_dir);
        std::string table_name;
        if (cfg.format == OutputFormat::csv) {
            table_name = "spectrum.csv";
            write_file(dir / table_name,
                       csv_meta(cfg, "spectrum") +
                           spectrum::export_spectrum(lines, spectrum::ExportFormat::csv));
        } else {
            table_name = "spectrum.json";
            ojson j;
            j["meta"] = meta_json(cfg, "spectrum");
            j["lines"] = ojson::parse(
                spectrum::export_spectrum(lines, spectrum::ExportFormat::json));
            write_file(dir / table_name, j.dump(2) + "\n");
        }

        ojson summary;
        summary["meta"] = meta_json(cfg, "spectrum");
        summary["theta"] = es.theta;
        summary["phi"] = es.phi;
        summary["sin_phi"] = std::sin(es.phi);
        summary["p"] = es.p;
        summary["q"] = es.q;
        summary["energies"] = es.energies;
        ojson rj;
        rj["pass"] = rules.pass;
        rj["common_sum"] = rules.common_sum;
        rj["theta_recovered"] = rules.theta_recovered;
        rj["rules"] = ojson::array();
        for (const auto& r : rules.rules)
            rj["rules"].push_back(
                {{"name", r.name}, {"residual", r.residual}, {"pass", r.pass}});
        summary["combination_rules"] = std::move(rj);
        write_file(dir / "spectrum_summary.json", summary.dump(2) + "\n");

        std::cout << "spectrum: " << rules.summary() << "\n";
        std::cout << "wrote " << (dir / table_name).string() << ", "
                  << (dir / "spectrum_summary.json").string() << "\n";
        if (!rules.pass) {
            print_err(opt, "internal combination-rule self-check failed");
            return 4;
        }
        return 0;
    });
}

int cmd_gate(const CommandOptions& opt) {
    return run_guarded(opt, [&]() -> int {
        const RunConfig cfg = load(opt);
        emit_validation_warnings(opt, cfg);
        const spinsys::Eigensystem es = spinsys::diagonalize(cfg.system);
        const double omega1 = resolved_gate_omega1(cfg);
        const pulse::PulseProgram prog = gates::synthesize(cfg.gate.spec, es, omega1);
        for (const auto& w : pulse::selectivity_warnings(prog, es)) print_warn(opt, w);

        const encoding::BasisMap map =
            encoding::basis_map(encoding::EncodingScheme::virtual_spin, es);
        const gates::GateReport rep =
            gates::score(prog, cfg.gate.spec, es, map, cfg.gate.dt_max);

        const fs::path dir(opt.out_dir);
        ojson j;
        j["meta"] = meta_json(cfg, "gate");
        j["omega1"] = omega1;
        j["duration"] = rep.duration;
        j["fidelity_raw"] = rep.fidelity_raw;
        j["fidelity_phase_opt"] = rep.fidelity_phase_opt;
        j["truth_table"] = rep.truth_table;
        j["segments"] = prog.segments.size();
        write_file(dir / "gate_report.json", j.dump(2) + "\n");
        std::cout << "wrote " << (dir / "gate_report.json").string() << "\n";

        if (opt.emit_pulses) {
            ojson pj = ojson::parse(pulse::program_to_json(prog));
            pj["meta"] = meta_json(cfg, "gate");
            write_file(dir / "gate_pulses.json", pj.dump(2) + "\n");
            std::cout << "wrote " << (dir / "gate_pulses.json").string() << "\n";
        }

        std::cout << "gate: duration " << numfmt::sci12(rep.duration)
                  << " s, fidelity_raw " << numfmt::sci12(rep.fidelity_raw)
                  << ", fidelity_phase_opt " << numfmt::sci12(rep.fidelity_phase_opt) << "\n";
        if (rep.fidelity_phase_opt < cfg.gate.fidelity_floor) {
            print_err(opt, "fidelity " + numfmt::sci12(rep.fidelity_phase_opt) +
                               " is below the configured floor " +
                               numfmt::sci12(cfg.gate.fidelity_floor));
            return 5;
        }
        return 0;
    });
}

int cmd_stability(const CommandOptions& opt) {
    return run_guarded(opt, [&]() -> int {
        const RunConfig cfg = load(opt);
        require_seed_for_ensembles(cfg);
        emit_validation_warnings(opt, cfg);
        const spinsys::Eigensystem es = spinsys::diagonalize(cfg.system);
        const std::vector<double> grid = stability::default_time_grid(
            es.theta, cfg.stability.grid_points, cfg.stability.grid_periods);
        const stability::StabilityReport rep = stability::compare_encodings(
            cfg.stability.logical, cfg.system, grid, cfg.stability.threshold);

        const fs::path dir(opt.out_dir);
        std::string curve_name;
        if (cfg.format == OutputFormat::csv) {
            curve_name = "stability_curve.csv";
            std::string out = csv_meta(cfg, "stability") + "t,f_zeeman,f_virtual\n";
            for (std::size_t i = 0; i < rep.times.size(); ++i)
                out += numfmt::sci12(rep.times[i]) + "," +
                       numfmt::sci12(rep.fidelity_zeeman[i]) + "," +
                       numfmt::sci12(rep.fidelity_virtual[i]) + "\n";
            write_file(dir / curve_name, out);
        } else {
            curve_name = "stability_curve.json";
            ojson j;
            j["meta"] = meta_json(cfg, "stability");
            j["t"] = rep.times;
            j["f_zeeman"] = rep.fidelity_zeeman;
            j["f_virtual"] = rep.fidelity_virtual;
            write_file(dir / curve_name, j.dump(2) + "\n");
        }

        ojson summary;
        summary["meta"] = meta_json(cfg, "stability");
        summary["threshold"] = cfg.stability.threshold;
        summary["zeeman_dip_amplitude"] = rep.zeeman_dip_amplitude;
        summary["virtual_max_infidelity"] = rep.virtual_max_infidelity;
        summary["t1_estimate"] = finite_or_null(rep.t1_estimate);
        summary["t2_estimate"] = finite_or_null(rep.t2_estimate);

        std::string sweep_note;
        if (!cfg.stability.j_values.empty() || !cfg.stability.d_values.empty()) {
            const stability::ScalingTable table = stability::timescale_scaling_sweep(
                cfg.system, cfg.stability.j_values, cfg.stability.d_values);
            ojson sj;
            sj["zeeman_time_exponent"] = finite_or_null(table.zeeman_time_exponent);
            sj["virtual_infidelity_exponent"] =
                finite_or_null(table.virtual_infidelity_exponent);
            sj["j_rows"] = ojson::array();
            for (const auto& r : table.j_rows)
                sj["j_rows"].push_back({{"j", r.value},
                                        {"theta", r.theta},
                                        {"first_min_time", finite_or_null(r.first_min_time)}});
            sj["d_rows"] = ojson::array();
            for (const auto& r : table.d_rows)
                sj["d_rows"].push_back(
                    {{"d", r.value}, {"max_infidelity", r.max_infidelity}});
            summary["sweep"] = std::move(sj);
            sweep_note = ", sweep exponents (zeeman t_min vs theta, virtual infidelity vs d): " +
                         numfmt::sci12(table.zeeman_time_exponent) + ", " +
                         numfmt::sci12(table.virtual_infidelity_exponent);
        }
        write_file(dir / "stability_summary.json", summary.dump(2) + "\n");

        std::cout << "stability: zeeman dip " << numfmt::sci12(rep.zeeman_dip_amplitude)
                  << ", virtual max infidelity " << numfmt::sci12(rep.virtual_max_infidelity)
                  << ", t1 " << numfmt::sci12(rep.t1_estimate) << ", t2 "
                  << numfmt::sci12(rep.t2_estimate) << sweep_note << "\n";
        std::cout << "wrote " << (dir / curve_name).string() << ", "
                  << (dir / "stability_summary.json").string() << "\n";
        return 0;
    });
}

int cmd_evolve(const CommandOptions& opt) {
    return run_guarded(opt, [&]() -> int {
        const RunConfig cfg = load(opt);
        if (cfg.system.perturbation) require_seed_for_ensembles(cfg);
        emit_validation_warnings(opt, cfg);
        const spinsys::Eigensystem es = spinsys::diagonalize(cfg.system);
        const encoding::BasisMap init_map = encoding::basis_map(cfg.evolve.initial_basis, es);
        const qlin::StateVec psi0 = encoding::encode(cfg.evolve.initial, init_map);

        pulse::PulseProgram prog;
        if (cfg.evolve.gate) {
            const double w1 = cfg.evolve.gate_omega1
                                  ? *cfg.evolve.gate_omega1
                                  : 0.02 * std::hypot(cfg.system.j_coupling, cfg.system.delta);
            prog = gates::synthesize(*cfg.evolve.gate, es, w1);
        } else if (cfg.evolve.program) {
            prog = *cfg.evolve.program;
        }
        for (const auto& w : pulse::selectivity_warnings(prog, es)) print_warn(opt, w);

        std::vector<double> times;
        if (prog.total_duration() > 0) {
            times = linspace(0.0, prog.total_duration(), cfg.evolve.grid_points);
        } else {
            times = stability::default_time_grid(es.theta, cfg.evolve.grid_points,
                                                 cfg.evolve.grid_periods);
            prog.segments.clear();
            prog.segments.push_back({{}, times.back()});
        }

        // member 0 of the ensemble when the perturbation is a random draw
        const qlin::CMatrix h = spinsys::build_hamiltonian(cfg.system, true, 0);
        const std::vector<qlin::CMatrix> us =
            pulse::lab_propagator_trace(prog, h, cfg.evolve.dt_max, times);

        const encoding::BasisMap zmap = encoding::basis_map(encoding::EncodingScheme::zeeman, es);
        const encoding::BasisMap vmap =
            encoding::basis_map(encoding::EncodingScheme::virtual_spin, es);

        std::vector<std::array<double, 8>> pops(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            qlin::StateVec psi = qlin::apply(us[i], psi0);
            // exact-exponential stepping is unitary only to roundoff; undo the
            // accumulated norm drift before projecting onto logical bases
            const double nrm = psi.norm();
            for (int k = 0; k < psi.dim(); ++k) psi[k] /= nrm;
            const encoding::LogicalState lz = encoding::decode(psi, zmap);
            const encoding::LogicalState lv = encoding::decode(psi, vmap);
            for (int k = 0; k < 4; ++k) {
                pops[i][k] = std::norm(lz.amps[k]);
                pops[i][4 + k] = std::norm(lv.amps[k]);
            }
        }

        const fs::path dir(opt.out_dir);
        static constexpr const char* kCols =
            "t,p_zeeman_00,p_zeeman_01,p_zeeman_10,p_zeeman_11,"
            "p_virtual_00,p_virtual_01,p_virtual_10,p_virtual_11";
        std::string curve_name;
        if (cfg.format == OutputFormat::csv) {
            curve_name = "evolve_curve.csv";
            std::string out = csv_meta(cfg, "evolve") + std::string(kCols) + "\n";
            for (std::size_t i = 0; i < times.size(); ++i) {
                out += numfmt::sci12(times[i]);
                for (double v : pops[i]) out += "," + numfmt::sci12(v);
                out += "\n";
            }
            write_file(dir / curve_name, out);
        } else {
            curve_name = "evolve_curve.json";
            ojson j;
            j["meta"] = meta_json(cfg, "evolve");
            j["t"] = times;
            ojson rows = ojson::array();
            for (const auto& row : pops) rows.push_back(row);
            j["columns"] = std::vector<std::string>{
                "p_zeeman_00", "p_zeeman_01", "p_zeeman_10", "p_zeeman_11",
                "p_virtual_00", "p_virtual_01", "p_virtual_10", "p_virtual_11"};
            j["populations"] = std::move(rows);
            write_file(dir / curve_name, j.dump(2) + "\n");
        }

        ojson summary;
        summary["meta"] = meta_json(cfg, "evolve");
        summary["window"] = times.back();
        summary["final_populations"] = {
            {"zeeman", std::vector<double>(pops.back().begin(), pops.back().begin() + 4)},
            {"virtual_spin", std::vector<double>(pops.back().begin() + 4, pops.back().end())}};
        write_file(dir / "evolve_summary.json", summary.dump(2) + "\n");

        std::cout << "evolve: window " << numfmt::sci12(times.back())
                  << " s, final virtual populations (" << numfmt::sci12(pops.back()[4]) << ", "
                  << numfmt::sci12(pops.back()[5]) << ", " << numfmt::sci12(pops.back()[6])
                  << ", " << numfmt::sci12(pops.back()[7]) << ")\n";
        std::cout << "wrote " << (dir / curve_name).string() << ", "
                  << (dir / "evolve_summary.json").string() << "\n";
        return 0;
    });
}

}  // namespace virtspin::cli
