#pragma once

// Single-quantum transition spectrum of the coupled two-spin system.
// Allowed lines connect (1,2), (1,3), (2,4), (3,4); (1,4) and (2,3) are
// forbidden for the transverse drive Ix+Sx. Relative intensities are
// 4*|<Ej|Ix+Sx|Ek>|^2, normalized so the four lines sum to 4.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "virtspin/spinsys.hpp"

namespace virtspin::spectrum {

struct SpectrumLine {
    int from_level = 0;       // 1-based level labels
    int to_level = 0;
    double frequency = 0;     // |E_from - E_to|, rad/s
    double rel_intensity = 0;
};

// The four allowed lines in label order (1,2), (1,3), (2,4), (3,4).
std::vector<SpectrumLine> transition_table(const spinsys::Eigensystem& es);

struct RuleCheck {
    std::string name;
    double residual = 0;
    bool pass = true;
};

struct CombinationReport {
    bool pass = true;
    double common_sum = 0;        // f12 + f24 = f13 + f34 = E1 - E4
    double theta_recovered = 0;   // f13 - f12 = f24 - f34
    std::vector<RuleCheck> rules;
    std::string summary() const;
};

// Frequency/intensity combination identities on a 4-line table; tol is the
// absolute residual allowed. Throws if the table does not contain exactly the
// four allowed (from,to) pairs.
CombinationReport combination_rules_check(std::span<const SpectrumLine> lines, double tol = 1e-9);

enum class ExportFormat { csv, json };

// Lines sorted by ascending frequency. CSV: header + one row per line, 12
// significant digits, LF endings. JSON: array of objects with the same fields.
std::string export_spectrum(std::vector<SpectrumLine> lines, ExportFormat fmt);

}  // namespace virtspin::spectrum
