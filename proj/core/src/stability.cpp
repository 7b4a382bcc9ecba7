#include "virtspin/stability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace virtspin::stability {

using encoding::BasisMap;
using encoding::EncodingScheme;
using encoding::LogicalState;
using qlin::CMatrix;
using qlin::cplx;
using qlin::StateVec;
using spinsys::SystemParams;

std::vector<double> default_time_grid(double theta, int points, double periods) {
    if (points < 2) throw std::invalid_argument("time grid needs at least 2 points");
    if (!(periods > 0)) throw std::invalid_argument("periods must be positive");
    const double tmax = theta > 0 ? periods * 2.0 * std::numbers::pi / theta : 1.0;
    std::vector<double> t(points);
    for (int i = 0; i < points; ++i)
        t[i] = tmax * static_cast<double>(i) / static_cast<double>(points - 1);
    return t;
}

namespace {

// |<psi_ref(t)|psi(t)>|^2 sampled on `times`, for one full Hamiltonian.
// Both evolutions reduce to phase sums over their eigenpairs, so each sample
// costs 16 complex terms.
std::vector<double> overlap_curve(const qlin::EigenDecomp& ref, const qlin::EigenDecomp& full,
                                  const StateVec& psi0, std::span<const double> times) {
    std::array<cplx, 4> r{}, c{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i) {
            r[k] += std::conj(ref.eigenvectors(i, k)) * psi0[i];
            c[k] += std::conj(full.eigenvectors(i, k)) * psi0[i];
        }
    // G_jk = conj(r_j) <w_j|v_k> c_k, phase (full_k - ref_j)
    std::array<std::array<cplx, 4>, 4> g{};
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            cplx ov{};
            for (int i = 0; i < 4; ++i)
                ov += std::conj(ref.eigenvectors(i, j)) * full.eigenvectors(i, k);
            g[j][k] = std::conj(r[j]) * ov * c[k];
        }
    std::vector<double> f(times.size());
    for (std::size_t it = 0; it < times.size(); ++it) {
        const double t = times[it];
        cplx s{};
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                const double w = -(full.eigenvalues[k] - ref.eigenvalues[j]) * t;
                s += g[j][k] * cplx(std::cos(w), std::sin(w));
            }
        f[it] = std::norm(s);
    }
    return f;
}

CMatrix encoding_hamiltonian(EncodingScheme scheme, const SystemParams& params) {
    const auto& op = spinsys::spin_ops();
    if (scheme == EncodingScheme::zeeman)
        return (op.iz + op.sz) * params.omega0 + (op.iz - op.sz) * (0.5 * params.delta);
    return spinsys::build_hamiltonian(params, false);
}

}  // namespace

std::vector<double> encoded_fidelity(const LogicalState& state, EncodingScheme scheme,
                                     const SystemParams& params, std::span<const double> times) {
    const spinsys::Eigensystem es = spinsys::diagonalize(params);
    const BasisMap map = encoding::basis_map(scheme, es);
    const StateVec psi0 = encoding::encode(state, map);
    const qlin::EigenDecomp ref = qlin::hermitian_eigensystem(encoding_hamiltonian(scheme, params));

    const bool ensemble = params.perturbation &&
                          params.perturbation->kind ==
                              spinsys::PerturbationSpec::Kind::random_local_fields;
    const int members = ensemble ? params.perturbation->ensemble_size : 1;

    std::vector<double> avg(times.size(), 0.0);
    for (int m = 0; m < members; ++m) {
        const CMatrix h = spinsys::build_hamiltonian(params, true, m);
        const qlin::EigenDecomp full = qlin::hermitian_eigensystem(h);
        const std::vector<double> f = overlap_curve(ref, full, psi0, times);
        for (std::size_t i = 0; i < f.size(); ++i) avg[i] += f[i];
    }
    for (auto& v : avg) v /= members;
    return avg;
}

namespace {

double first_crossing(std::span<const double> times, std::span<const double> f,
                      double threshold) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < threshold) {
            if (i == 0) return times[0];
            const double frac = (f[i - 1] - threshold) / (f[i - 1] - f[i]);
            return times[i - 1] + frac * (times[i] - times[i - 1]);
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace

StabilityReport compare_encodings(const LogicalState& state, const SystemParams& params,
                                  std::span<const double> times, double threshold) {
    if (!(threshold > 0) || !(threshold <= 1))
        throw std::invalid_argument("threshold must lie in (0, 1]");
    StabilityReport rep;
    rep.times.assign(times.begin(), times.end());
    rep.fidelity_zeeman = encoded_fidelity(state, EncodingScheme::zeeman, params, times);
    rep.fidelity_virtual = encoded_fidelity(state, EncodingScheme::virtual_spin, params, times);

    double min_z = 1, min_v = 1;
    for (double v : rep.fidelity_zeeman) min_z = std::min(min_z, v);
    for (double v : rep.fidelity_virtual) min_v = std::min(min_v, v);
    rep.zeeman_dip_amplitude = 1 - min_z;
    rep.virtual_max_infidelity = 1 - min_v;
    rep.t1_estimate = first_crossing(times, rep.fidelity_zeeman, threshold);
    rep.t2_estimate = first_crossing(times, rep.fidelity_virtual, threshold);
    return rep;
}

namespace {

// First local minimum of a sampled curve, parabolically refined; NaN when the
// curve never dips.
double first_local_min_time(std::span<const double> times, std::span<const double> f) {
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        if (f[i] <= f[i - 1] && f[i] <= f[i + 1] && f[i] < 1.0 - 1e-12) {
            const double denom = f[i + 1] - 2 * f[i] + f[i - 1];
            if (denom > 0) {
                const double h = times[i + 1] - times[i];
                return times[i] - 0.5 * h * (f[i + 1] - f[i - 1]) / denom;
            }
            return times[i];
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ScalingTable timescale_scaling_sweep(const SystemParams& base, std::span<const double> j_values,
                                     std::span<const double> d_values) {
    ScalingTable table;
    LogicalState l01;
    l01.amps[1] = 1.0;

    std::vector<double> fit_x, fit_y;
    for (double j : j_values) {
        SystemParams p = base;
        p.j_coupling = j;
        p.perturbation.reset();
        const double theta = std::hypot(j, p.delta);
        const std::vector<double> grid = default_time_grid(theta);
        const std::vector<double> f =
            encoded_fidelity(l01, EncodingScheme::zeeman, p, grid);
        ScalingRow row;
        row.value = j;
        row.theta = theta;
        row.first_min_time = first_local_min_time(grid, f);
        table.j_rows.push_back(row);
        if (std::isfinite(row.first_min_time)) {
            fit_x.push_back(theta);
            fit_y.push_back(row.first_min_time);
        }
    }
    table.zeeman_time_exponent = loglog_slope(fit_x, fit_y);

    if (!d_values.empty() && !base.perturbation)
        throw std::invalid_argument("d sweep requires a perturbation spec on the base parameters");
    fit_x.clear();
    fit_y.clear();
    for (double d : d_values) {
        SystemParams p = base;
        p.perturbation->strength = d;
        const double theta = std::hypot(p.j_coupling, p.delta);
        const std::vector<double> grid = default_time_grid(theta);
        const std::vector<double> f =
            encoded_fidelity(l01, EncodingScheme::virtual_spin, p, grid);
        double fmin = 1;
        for (double v : f) fmin = std::min(fmin, v);
        ScalingRow row;
        row.value = d;
        row.theta = theta;
        row.max_infidelity = 1 - fmin;
        table.d_rows.push_back(row);
        fit_x.push_back(d);
        fit_y.push_back(row.max_infidelity);
    }
    table.virtual_infidelity_exponent = loglog_slope(fit_x, fit_y);
    return table;
}

}  // namespace virtspin::stability
