#include "cli_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace virtspin::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config error at " + path + ": " + msg);
}

void check_keys(const json& o, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, val] : o.items()) {
        (void)val;
        bool ok = false;
        for (const char* k : allowed)
            if (key == k) { ok = true; break; }
        if (!ok) fail(path, "unknown key '" + key + "'");
    }
}

const json* get(const json& o, const char* key) {
    const auto it = o.find(key);
    return it == o.end() ? nullptr : &*it;
}

double need_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

double opt_number(const json& o, const std::string& path, const char* key, double def) {
    const json* v = get(o, key);
    return v ? need_number(*v, path + "." + key) : def;
}

int opt_int(const json& o, const std::string& path, const char* key, int def) {
    const json* v = get(o, key);
    if (!v) return def;
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    return v->get<int>();
}

encoding::LogicalState parse_logical(const json& v, const std::string& path) {
    encoding::LogicalState l{};
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s != "00" && s != "01" && s != "10" && s != "11")
            fail(path, "named logical states are 00, 01, 10, 11");
        l.amps[(s[0] - '0') * 2 + (s[1] - '0')] = 1.0;
        return l;
    }
    if (!v.is_array() || v.size() != 4)
        fail(path, "expected a named state or an array of 4 amplitudes");
    for (int i = 0; i < 4; ++i) {
        const json& a = v[i];
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (a.is_number()) {
            l.amps[i] = a.get<double>();
        } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
            l.amps[i] = qlin::cplx(a[0].get<double>(), a[1].get<double>());
        } else {
            fail(p, "amplitude must be a number or [re, im]");
        }
    }
    if (std::abs(l.norm() - 1.0) > 1e-6) fail(path, "amplitudes must be normalized");
    const double n = l.norm();
    for (auto& a : l.amps) a /= n;
    return l;
}

gates::GateSpec parse_gate_spec(const json& o, const std::string& path) {
    gates::GateSpec spec;
    const json* kind = get(o, "kind");
    if (kind) {
        if (!kind->is_string()) fail(path + ".kind", "expected a string");
        const std::string s = kind->get<std::string>();
        if (s == "rot_q") spec.kind = gates::GateKind::rot_q;
        else if (s == "rot_r") spec.kind = gates::GateKind::rot_r;
        else if (s == "cnot_q_to_r") spec.kind = gates::GateKind::cnot_q_to_r;
        else if (s == "cnot_r_to_q") spec.kind = gates::GateKind::cnot_r_to_q;
        else fail(path + ".kind", "unknown gate '" + s + "' (rot_q, rot_r, cnot_q_to_r, cnot_r_to_q)");
    }
    spec.angle = opt_number(o, path, "angle", spec.angle);
    spec.axis_phase = opt_number(o, path, "axis_phase", spec.axis_phase);
    return spec;
}

std::string gate_kind_name(gates::GateKind k) {
    switch (k) {
        case gates::GateKind::rot_q: return "rot_q";
        case gates::GateKind::rot_r: return "rot_r";
        case gates::GateKind::cnot_q_to_r: return "cnot_q_to_r";
        case gates::GateKind::cnot_r_to_q: return "cnot_r_to_q";
    }
    return "?";
}

ojson logical_to_json(const encoding::LogicalState& l) {
    ojson arr = ojson::array();
    for (const auto& a : l.amps) arr.push_back(ojson::array({a.real(), a.imag()}));
    return arr;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    check_keys(root, "$", {"schema_version", "system", "gate", "stability", "evolve", "output"});

    const json* sv = get(root, "schema_version");
    if (!sv) fail("$", "missing required key 'schema_version'");
    if (!sv->is_number_integer() || sv->get<int>() != 1)
        fail("$.schema_version", "supported schema_version is 1");

    RunConfig cfg;

    const json* sys = get(root, "system");
    if (!sys) fail("$", "missing required key 'system'");
    if (!sys->is_object()) fail("$.system", "expected an object");
    check_keys(*sys, "$.system", {"omega0", "delta", "j", "perturbation"});
    for (const char* k : {"omega0", "delta", "j"})
        if (!get(*sys, k)) fail("$.system", std::string("missing required key '") + k + "'");
    cfg.system.omega0 = need_number((*sys)["omega0"], "$.system.omega0");
    cfg.system.delta = need_number((*sys)["delta"], "$.system.delta");
    cfg.system.j_coupling = need_number((*sys)["j"], "$.system.j");

    if (const json* pert = get(*sys, "perturbation")) {
        const std::string pp = "$.system.perturbation";
        if (!pert->is_object()) fail(pp, "expected an object");
        check_keys(*pert, pp, {"kind", "strength", "seed", "ensemble_size"});
        spinsys::PerturbationSpec spec;
        const json* kind = get(*pert, "kind");
        if (!kind || !kind->is_string()) fail(pp + ".kind", "required string");
        const std::string ks = kind->get<std::string>();
        if (ks == "dipolar_zz") spec.kind = spinsys::PerturbationSpec::Kind::dipolar_zz;
        else if (ks == "random_local_fields")
            spec.kind = spinsys::PerturbationSpec::Kind::random_local_fields;
        else fail(pp + ".kind", "unknown kind '" + ks + "' (dipolar_zz, random_local_fields)");
        const json* strength = get(*pert, "strength");
        if (!strength) fail(pp, "missing required key 'strength'");
        spec.strength = need_number(*strength, pp + ".strength");
        if (const json* seed = get(*pert, "seed")) {
            if (!seed->is_number_unsigned() && !seed->is_number_integer())
                fail(pp + ".seed", "expected a non-negative integer");
            const auto v = seed->get<std::int64_t>();
            if (v < 0) fail(pp + ".seed", "expected a non-negative integer");
            spec.seed = static_cast<std::uint64_t>(v);
            cfg.seed_present = true;
        }
        spec.ensemble_size = opt_int(*pert, pp, "ensemble_size", spec.ensemble_size);
        cfg.system.perturbation = spec;
    }
    try {
        spinsys::validate(cfg.system);  // hard errors only; warnings surfaced by commands
    } catch (const std::invalid_argument& e) {
        fail("$.system", e.what());
    }

    if (const json* g = get(root, "gate")) {
        const std::string gp = "$.gate";
        if (!g->is_object()) fail(gp, "expected an object");
        check_keys(*g, gp, {"kind", "angle", "axis_phase", "omega1", "dt_max", "fidelity_floor"});
        cfg.gate.spec = parse_gate_spec(*g, gp);
        if (get(*g, "omega1")) {
            const double w = need_number((*g)["omega1"], gp + ".omega1");
            if (!(w > 0)) fail(gp + ".omega1", "must be > 0");
            cfg.gate.omega1 = w;
        }
        cfg.gate.dt_max = opt_number(*g, gp, "dt_max", cfg.gate.dt_max);
        if (!(cfg.gate.dt_max > 0)) fail(gp + ".dt_max", "must be > 0");
        cfg.gate.fidelity_floor = opt_number(*g, gp, "fidelity_floor", cfg.gate.fidelity_floor);
        if (cfg.gate.fidelity_floor < 0 || cfg.gate.fidelity_floor > 1)
            fail(gp + ".fidelity_floor", "must lie in [0, 1]");
    }

    cfg.stability.logical.amps[1] = 1.0;  // default |01>
    if (const json* s = get(root, "stability")) {
        const std::string sp = "$.stability";
        if (!s->is_object()) fail(sp, "expected an object");
        check_keys(*s, sp,
                   {"logical", "threshold", "grid_points", "grid_periods", "j_values", "d_values"});
        if (const json* l = get(*s, "logical")) cfg.stability.logical = parse_logical(*l, sp + ".logical");
        cfg.stability.threshold = opt_number(*s, sp, "threshold", cfg.stability.threshold);
        if (!(cfg.stability.threshold > 0) || cfg.stability.threshold > 1)
            fail(sp + ".threshold", "must lie in (0, 1]");
        cfg.stability.grid_points = opt_int(*s, sp, "grid_points", cfg.stability.grid_points);
        if (cfg.stability.grid_points < 2) fail(sp + ".grid_points", "must be >= 2");
        cfg.stability.grid_periods = opt_number(*s, sp, "grid_periods", cfg.stability.grid_periods);
        if (!(cfg.stability.grid_periods > 0)) fail(sp + ".grid_periods", "must be > 0");
        for (const char* key : {"j_values", "d_values"}) {
            if (const json* arr = get(*s, key)) {
                if (!arr->is_array()) fail(sp + "." + key, "expected an array of numbers");
                auto& dst = std::string(key) == "j_values" ? cfg.stability.j_values
                                                           : cfg.stability.d_values;
                for (std::size_t i = 0; i < arr->size(); ++i)
                    dst.push_back(need_number((*arr)[i], sp + "." + key + "[" +
                                                             std::to_string(i) + "]"));
            }
        }
    }

    cfg.evolve.initial.amps[0] = 1.0;  // default |00>
    if (const json* e = get(root, "evolve")) {
        const std::string ep = "$.evolve";
        if (!e->is_object()) fail(ep, "expected an object");
        check_keys(*e, ep,
                   {"initial", "initial_basis", "grid_points", "grid_periods", "gate", "program",
                    "dt_max"});
        if (const json* l = get(*e, "initial")) cfg.evolve.initial = parse_logical(*l, ep + ".initial");
        if (const json* b = get(*e, "initial_basis")) {
            if (!b->is_string()) fail(ep + ".initial_basis", "expected a string");
            const std::string s = b->get<std::string>();
            if (s == "zeeman") cfg.evolve.initial_basis = encoding::EncodingScheme::zeeman;
            else if (s == "virtual_spin")
                cfg.evolve.initial_basis = encoding::EncodingScheme::virtual_spin;
            else fail(ep + ".initial_basis", "expected 'zeeman' or 'virtual_spin'");
        }
        cfg.evolve.grid_points = opt_int(*e, ep, "grid_points", cfg.evolve.grid_points);
        if (cfg.evolve.grid_points < 2) fail(ep + ".grid_points", "must be >= 2");
        cfg.evolve.grid_periods = opt_number(*e, ep, "grid_periods", cfg.evolve.grid_periods);
        if (!(cfg.evolve.grid_periods > 0)) fail(ep + ".grid_periods", "must be > 0");
        cfg.evolve.dt_max = opt_number(*e, ep, "dt_max", cfg.evolve.dt_max);
        if (!(cfg.evolve.dt_max > 0)) fail(ep + ".dt_max", "must be > 0");
        const json* g = get(*e, "gate");
        const json* prog = get(*e, "program");
        if (g && prog) fail(ep, "'gate' and 'program' are mutually exclusive");
        if (g) {
            if (!g->is_object()) fail(ep + ".gate", "expected an object");
            check_keys(*g, ep + ".gate", {"kind", "angle", "axis_phase", "omega1"});
            cfg.evolve.gate = parse_gate_spec(*g, ep + ".gate");
            if (get(*g, "omega1")) {
                const double w = need_number((*g)["omega1"], ep + ".gate.omega1");
                if (!(w > 0)) fail(ep + ".gate.omega1", "must be > 0");
                cfg.evolve.gate_omega1 = w;
            }
        }
        if (prog) {
            try {
                cfg.evolve.program = pulse::program_from_json(prog->dump());
            } catch (const std::invalid_argument& err) {
                fail(ep + ".program", err.what());
            }
        }
    }

    if (const json* o = get(root, "output")) {
        if (!o->is_object()) fail("$.output", "expected an object");
        check_keys(*o, "$.output", {"format"});
        if (const json* f = get(*o, "format")) {
            if (!f->is_string()) fail("$.output.format", "expected a string");
            const std::string s = f->get<std::string>();
            if (s == "csv") cfg.format = OutputFormat::csv;
            else if (s == "json") cfg.format = OutputFormat::json;
            else fail("$.output.format", "expected 'csv' or 'json'");
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading config file '" + path + "'");
    return parse_config_text(ss.str());
}

double resolved_gate_omega1(const RunConfig& cfg) {
    if (cfg.gate.omega1) return *cfg.gate.omega1;
    return 0.02 * std::hypot(cfg.system.j_coupling, cfg.system.delta);
}

std::string normalized_config_json(const RunConfig& cfg, bool pretty) {
    ojson j;
    j["schema_version"] = 1;
    ojson sys;
    sys["omega0"] = cfg.system.omega0;
    sys["delta"] = cfg.system.delta;
    sys["j"] = cfg.system.j_coupling;
    if (cfg.system.perturbation) {
        const auto& p = *cfg.system.perturbation;
        ojson pj;
        pj["kind"] = p.kind == spinsys::PerturbationSpec::Kind::dipolar_zz
                         ? "dipolar_zz"
                         : "random_local_fields";
        pj["strength"] = p.strength;
        pj["seed"] = p.seed;
        pj["ensemble_size"] = p.ensemble_size;
        sys["perturbation"] = std::move(pj);
    }
    j["system"] = std::move(sys);

    ojson g;
    g["kind"] = gate_kind_name(cfg.gate.spec.kind);
    g["angle"] = cfg.gate.spec.angle;
    g["axis_phase"] = cfg.gate.spec.axis_phase;
    g["omega1"] = resolved_gate_omega1(cfg);
    g["dt_max"] = cfg.gate.dt_max;
    g["fidelity_floor"] = cfg.gate.fidelity_floor;
    j["gate"] = std::move(g);

    ojson s;
    s["logical"] = logical_to_json(cfg.stability.logical);
    s["threshold"] = cfg.stability.threshold;
    s["grid_points"] = cfg.stability.grid_points;
    s["grid_periods"] = cfg.stability.grid_periods;
    s["j_values"] = cfg.stability.j_values;
    s["d_values"] = cfg.stability.d_values;
    j["stability"] = std::move(s);

    ojson e;
    e["initial"] = logical_to_json(cfg.evolve.initial);
    e["initial_basis"] =
        cfg.evolve.initial_basis == encoding::EncodingScheme::zeeman ? "zeeman" : "virtual_spin";
    e["grid_points"] = cfg.evolve.grid_points;
    e["grid_periods"] = cfg.evolve.grid_periods;
    if (cfg.evolve.gate) {
        ojson ge;
        ge["kind"] = gate_kind_name(cfg.evolve.gate->kind);
        ge["angle"] = cfg.evolve.gate->angle;
        ge["axis_phase"] = cfg.evolve.gate->axis_phase;
        if (cfg.evolve.gate_omega1) ge["omega1"] = *cfg.evolve.gate_omega1;
        e["gate"] = std::move(ge);
    }
    if (cfg.evolve.program)
        e["program"] = ojson::parse(pulse::program_to_json(*cfg.evolve.program));
    e["dt_max"] = cfg.evolve.dt_max;
    j["evolve"] = std::move(e);

    j["output"]["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    return pretty ? j.dump(2) : j.dump();
}

}  // namespace virtspin::cli
