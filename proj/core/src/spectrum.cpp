#include "virtspin/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "virtspin/numfmt.hpp"

namespace virtspin::spectrum {

using qlin::cplx;

std::vector<SpectrumLine> transition_table(const spinsys::Eigensystem& es) {
    const spinsys::SpinOps& op = spinsys::spin_ops();
    const qlin::CMatrix x = op.ix + op.sx;
    static constexpr std::array<std::array<int, 2>, 4> pairs{{{0, 1}, {0, 2}, {1, 3}, {2, 3}}};
    std::vector<SpectrumLine> lines;
    lines.reserve(4);
    for (const auto& [j, k] : pairs) {
        const cplx me = qlin::inner(es.states[j], qlin::apply(x, es.states[k]));
        lines.push_back({j + 1, k + 1, std::abs(es.energies[j] - es.energies[k]),
                         4.0 * std::norm(me)});
    }
    return lines;
}

CombinationReport combination_rules_check(std::span<const SpectrumLine> lines, double tol) {
    auto find = [&](int from, int to) -> const SpectrumLine& {
        for (const auto& l : lines)
            if (l.from_level == from && l.to_level == to) return l;
        throw std::invalid_argument("line (" + std::to_string(from) + "," + std::to_string(to) +
                                    ") missing from table");
    };
    if (lines.size() != 4) throw std::invalid_argument("expected exactly four lines");
    const SpectrumLine& l12 = find(1, 2);
    const SpectrumLine& l13 = find(1, 3);
    const SpectrumLine& l24 = find(2, 4);
    const SpectrumLine& l34 = find(3, 4);

    CombinationReport rep;
    rep.common_sum = l12.frequency + l24.frequency;
    rep.theta_recovered = l13.frequency - l12.frequency;

    auto add = [&](std::string name, double residual) {
        const bool ok = std::abs(residual) <= tol;
        rep.rules.push_back({std::move(name), residual, ok});
        rep.pass = rep.pass && ok;
    };
    add("f12+f24 == f13+f34", (l12.frequency + l24.frequency) - (l13.frequency + l34.frequency));
    add("f13-f12 == f24-f34", (l13.frequency - l12.frequency) - (l24.frequency - l34.frequency));
    add("A12 == A24", l12.rel_intensity - l24.rel_intensity);
    add("A13 == A34", l13.rel_intensity - l34.rel_intensity);
    return rep;
}

std::string CombinationReport::summary() const {
    if (pass)
        return "combination rules OK: common sum " + numfmt::sci12(common_sum) +
               ", theta " + numfmt::sci12(theta_recovered);
    std::string s = "combination rules FAILED:";
    for (const auto& r : rules)
        if (!r.pass) s += " [" + r.name + " residual " + numfmt::sci12(r.residual) + "]";
    return s;
}

std::string export_spectrum(std::vector<SpectrumLine> lines, ExportFormat fmt) {
    std::stable_sort(lines.begin(), lines.end(), [](const SpectrumLine& a, const SpectrumLine& b) {
        if (a.frequency != b.frequency) return a.frequency < b.frequency;
        if (a.from_level != b.from_level) return a.from_level < b.from_level;
        return a.to_level < b.to_level;
    });
    if (fmt == ExportFormat::csv) {
        std::string out = "from_level,to_level,frequency_rad_s,rel_intensity\n";
        for (const auto& l : lines) {
            out += std::to_string(l.from_level) + "," + std::to_string(l.to_level) + "," +
                   numfmt::sci12(l.frequency) + "," + numfmt::sci12(l.rel_intensity) + "\n";
        }
        return out;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& l : lines)
        arr.push_back({{"from_level", l.from_level},
                       {"to_level", l.to_level},
                       {"frequency_rad_s", l.frequency},
                       {"rel_intensity", l.rel_intensity}});
    return arr.dump(2) + "\n";
}

}  // namespace virtspin::spectrum
