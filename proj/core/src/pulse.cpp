#include "virtspin/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace virtspin::pulse {

using qlin::CMatrix;
using qlin::cplx;

namespace {

constexpr std::array<std::array<int, 2>, 4> kAllowedPairs{{{0, 1}, {0, 2}, {1, 3}, {2, 3}}};

struct PairInfo {
    double freq;  // |E_a - E_b|
    cplx me;      // <E_a|Ix+Sx|E_b>
};

std::array<PairInfo, 4> pair_table(const spinsys::Eigensystem& es) {
    const CMatrix x = drive_operator(spinsys::spin_ops());
    std::array<PairInfo, 4> t;
    for (int i = 0; i < 4; ++i) {
        const auto [a, b] = kAllowedPairs[i];
        t[i].freq = std::abs(es.energies[a] - es.energies[b]);
        t[i].me = qlin::inner(es.states[a], qlin::apply(x, es.states[b]));
    }
    return t;
}

bool resonant(double carrier, double freq) {
    return std::abs(carrier - freq) <= 1e-6 * std::max(freq, 1e-6);
}

int nearest_pair(double carrier, const std::array<PairInfo, 4>& pairs) {
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(carrier - pairs[i].freq) < std::abs(carrier - pairs[best].freq)) best = i;
    return best;
}

[[noreturn]] void throw_not_resonant(double carrier, const std::array<PairInfo, 4>& pairs) {
    const int nb = nearest_pair(carrier, pairs);
    throw std::invalid_argument(
        "tone carrier " + std::to_string(carrier) +
        " is not resonant with any allowed transition (nearest: levels (" +
        std::to_string(kAllowedPairs[nb][0] + 1) + "," + std::to_string(kAllowedPairs[nb][1] + 1) +
        ") at " + std::to_string(pairs[nb].freq) + ")");
}

}  // namespace

double PulseProgram::total_duration() const {
    double t = 0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

void validate_program(const PulseProgram& prog) {
    int si = 0;
    for (const auto& seg : prog.segments) {
        const std::string where = "segment " + std::to_string(si++);
        if (!(seg.duration > 0) || !std::isfinite(seg.duration))
            throw std::invalid_argument(where + ": duration must be positive and finite");
        if (seg.tones.size() > 2)
            throw std::invalid_argument(where + ": at most 2 simultaneous tones are supported");
        for (const auto& tone : seg.tones) {
            if (!std::isfinite(tone.carrier) || tone.carrier < 0)
                throw std::invalid_argument(where + ": tone carrier must be finite and >= 0");
            if (!std::isfinite(tone.amplitude) || tone.amplitude < 0)
                throw std::invalid_argument(where + ": tone amplitude must be finite and >= 0");
            if (!std::isfinite(tone.phase))
                throw std::invalid_argument(where + ": tone phase must be finite");
        }
    }
}

std::vector<std::string> selectivity_warnings(const PulseProgram& prog,
                                              const spinsys::Eigensystem& es) {
    const auto pairs = pair_table(es);
    std::vector<std::string> out;
    for (const auto& seg : prog.segments) {
        for (const auto& tone : seg.tones) {
            int res = -1;
            for (int i = 0; i < 4; ++i)
                if (resonant(tone.carrier, pairs[i].freq)) { res = i; break; }
            if (res < 0) {
                const int nb = nearest_pair(tone.carrier, pairs);
                out.push_back("tone carrier " + std::to_string(tone.carrier) +
                              " is not resonant with any allowed transition (nearest: levels (" +
                              std::to_string(kAllowedPairs[nb][0] + 1) + "," +
                              std::to_string(kAllowedPairs[nb][1] + 1) + ") at " +
                              std::to_string(pairs[nb].freq) + ")");
                continue;
            }
            double gap = -1;
            for (int i = 0; i < 4; ++i) {
                if (i == res) continue;
                const double g = std::abs(pairs[i].freq - pairs[res].freq);
                if (gap < 0 || g < gap) gap = g;
            }
            if (tone.amplitude > 0.2 * gap)
                out.push_back("tone at carrier " + std::to_string(tone.carrier) + ": amplitude " +
                              std::to_string(tone.amplitude) + " exceeds 0.2 x spectral gap " +
                              std::to_string(gap) + "; selectivity is poor");
        }
    }
    return out;
}

CMatrix drive_operator(const spinsys::SpinOps& ops) { return ops.ix + ops.sx; }

double transition_matrix_element(int level_j, int level_k, const spinsys::Eigensystem& es) {
    if (level_j < 1 || level_j > 4 || level_k < 1 || level_k > 4 || level_j == level_k)
        throw std::invalid_argument("level labels must be distinct and in 1..4");
    const CMatrix x = drive_operator(spinsys::spin_ops());
    return std::abs(qlin::inner(es.states[level_j - 1], qlin::apply(x, es.states[level_k - 1])));
}

std::vector<CMatrix> lab_propagator_trace(const PulseProgram& prog, const CMatrix& h0,
                                          double dt_max, std::span<const double> times) {
    validate_program(prog);
    if (h0.dim() != 4) throw std::invalid_argument("h0 must be 4x4");
    if (!(dt_max > 0) || !std::isfinite(dt_max))
        throw std::invalid_argument("dt_max must be positive");
    const double total = prog.total_duration();
    const double tol_t = 1e-12 * std::max(1.0, total);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < -tol_t || times[i] > total + tol_t)
            throw std::invalid_argument("emission time outside [0, total_duration]");
        if (i > 0 && times[i] < times[i - 1])
            throw std::invalid_argument("emission times must be ascending");
    }

    double scale = h0.frobenius_norm();
    for (const auto& seg : prog.segments)
        for (const auto& tone : seg.tones)
            scale = std::max({scale, tone.carrier, tone.amplitude});
    const double dt_cap = std::min(dt_max, 1.0 / (50.0 * std::max(scale, 1e-12)));

    const CMatrix x = drive_operator(spinsys::spin_ops());
    CMatrix u = CMatrix::identity(4);
    std::vector<CMatrix> out;
    out.reserve(times.size());
    std::size_t ti = 0;
    auto emit_up_to = [&](double tcur) {
        while (ti < times.size() && times[ti] <= tcur + tol_t) {
            out.push_back(u);
            ++ti;
        }
    };

    emit_up_to(0.0);
    double a = 0.0;
    for (const auto& seg : prog.segments) {
        const double b = a + seg.duration;
        double cur = a;
        while (cur < b - tol_t) {
            double target = b;
            if (ti < times.size() && times[ti] > cur + tol_t && times[ti] < b - tol_t)
                target = times[ti];
            const double len = target - cur;
            if (seg.tones.empty()) {
                u = qlin::expm_i(h0, len) * u;
            } else {
                const auto n = static_cast<long long>(std::ceil(len / dt_cap));
                const double h = len / static_cast<double>(n);
                for (long long i = 0; i < n; ++i) {
                    const double tm = cur + (static_cast<double>(i) + 0.5) * h;
                    double f = 0;
                    for (const auto& tone : seg.tones)
                        f += tone.amplitude * std::cos(tone.carrier * tm + tone.phase);
                    u = qlin::expm_i(h0 + x * cplx(f, 0), h) * u;
                }
            }
            cur = target;
            emit_up_to(cur);
        }
        a = b;
        emit_up_to(b);
    }
    while (ti < times.size()) {
        out.push_back(u);
        ++ti;
    }
    return out;
}

Propagator lab_propagator(const PulseProgram& prog, const CMatrix& h0, double dt_max) {
    const std::array<double, 1> at{prog.total_duration()};
    Propagator p;
    p.matrix = lab_propagator_trace(prog, h0, dt_max, at).back();
    return p;
}

Propagator rwa_propagator(const PulseProgram& prog, const spinsys::Eigensystem& es) {
    validate_program(prog);
    const auto pairs = pair_table(es);
    CMatrix u = CMatrix::identity(4);  // interaction picture, eigenbasis
    for (const auto& seg : prog.segments) {
        CMatrix g(4);
        for (const auto& tone : seg.tones) {
            bool found = false;
            for (int i = 0; i < 4; ++i) {
                if (!resonant(tone.carrier, pairs[i].freq)) continue;
                found = true;
                const auto [hi, lo] = kAllowedPairs[i];  // E_hi > E_lo in-regime
                const cplx rot = 0.5 * tone.amplitude * pairs[i].me *
                                 std::exp(cplx(0, -tone.phase));
                g(hi, lo) += rot;
                g(lo, hi) += std::conj(rot);
            }
            if (!found) throw_not_resonant(tone.carrier, pairs);
        }
        u = qlin::expm_i(g, seg.duration) * u;
    }
    const CMatrix m = es.eigenvector_matrix();
    Propagator p;
    p.matrix = m * u * m.adjoint();
    return p;
}

PulseProgram calibrate_pi(int level_j, int level_k, double omega1,
                          const spinsys::Eigensystem& es) {
    if (!(omega1 > 0) || !std::isfinite(omega1))
        throw std::invalid_argument("omega1 must be positive");
    const double me = transition_matrix_element(level_j, level_k, es);
    if (me * me <= 1e-12)
        throw std::invalid_argument("transition (" + std::to_string(level_j) + "," +
                                    std::to_string(level_k) +
                                    ") is forbidden: |matrix element|^2 <= 1e-12");
    const double carrier = std::abs(es.energies[level_j - 1] - es.energies[level_k - 1]);
    PulseProgram prog;
    prog.segments.push_back({{{carrier, omega1, 0.0}}, std::numbers::pi / (omega1 * me)});
    return prog;
}

std::string program_to_json(const PulseProgram& prog) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["segments"] = nlohmann::ordered_json::array();
    for (const auto& seg : prog.segments) {
        nlohmann::ordered_json js;
        js["duration"] = seg.duration;
        js["tones"] = nlohmann::ordered_json::array();
        for (const auto& tone : seg.tones)
            js["tones"].push_back({{"carrier", tone.carrier},
                                   {"amplitude", tone.amplitude},
                                   {"phase", tone.phase}});
        j["segments"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

namespace {

void require_keys(const nlohmann::json& o, std::initializer_list<const char*> allowed,
                  const std::string& path) {
    for (const auto& [key, val] : o.items()) {
        (void)val;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end())
            throw std::invalid_argument("unknown key '" + key + "' at " + path);
    }
}

}  // namespace

PulseProgram program_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("pulse program parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("pulse program must be a JSON object");
    require_keys(j, {"format_version", "segments", "meta"}, "$");  // meta is ignored
    if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
        j["format_version"].get<int>() != 1)
        throw std::invalid_argument("pulse program format_version must be 1");
    PulseProgram prog;
    if (j.contains("segments")) {
        if (!j["segments"].is_array())
            throw std::invalid_argument("segments must be an array");
        int si = 0;
        for (const auto& js : j["segments"]) {
            const std::string path = "$.segments[" + std::to_string(si++) + "]";
            if (!js.is_object()) throw std::invalid_argument(path + " must be an object");
            require_keys(js, {"duration", "tones"}, path);
            PulseSegment seg;
            if (!js.contains("duration") || !js["duration"].is_number())
                throw std::invalid_argument(path + ".duration must be a number");
            seg.duration = js["duration"].get<double>();
            if (js.contains("tones")) {
                if (!js["tones"].is_array())
                    throw std::invalid_argument(path + ".tones must be an array");
                int ki = 0;
                for (const auto& jt : js["tones"]) {
                    const std::string tp = path + ".tones[" + std::to_string(ki++) + "]";
                    if (!jt.is_object()) throw std::invalid_argument(tp + " must be an object");
                    require_keys(jt, {"carrier", "amplitude", "phase"}, tp);
                    PulseTone tone;
                    for (const char* f : {"carrier", "amplitude", "phase"})
                        if (jt.contains(f) && !jt[f].is_number())
                            throw std::invalid_argument(tp + "." + f + " must be a number");
                    if (jt.contains("carrier")) tone.carrier = jt["carrier"].get<double>();
                    if (jt.contains("amplitude")) tone.amplitude = jt["amplitude"].get<double>();
                    if (jt.contains("phase")) tone.phase = jt["phase"].get<double>();
                    seg.tones.push_back(tone);
                }
            }
            prog.segments.push_back(std::move(seg));
        }
    }
    validate_program(prog);
    return prog;
}

}  // namespace virtspin::pulse
