#pragma once

// Range preprocessing: change of variable t_r -> t̄_r, phase compensation and
// the range transform. After these steps a point target at projected
// coordinate u has the spectrum exp{-j (4 pi / c)(f̄_c + f_r) u}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "sga/error.hpp"
#include "sga/fft.hpp"
#include "sga/geometry.hpp"
#include "sga/interp.hpp"
#include "sga/parallel.hpp"
#include "sga/raster.hpp"

namespace sga {

/// Carrier, bandwidth and wavelength seen in the resampled range variable,
/// frozen at the reference range.
struct ScaledConstants {
    double carrier = 0.0;     ///< f̄_c = -(R / r_ref) f_c, negative
    double bandwidth = 0.0;   ///< |B̄_r| = (R / r_ref) B_r
    double wavelength = 0.0;  ///< |λ̄| = c / |f̄_c|

    static ScaledConstants from(const AcquisitionGeometry& geom, const RadarParams& radar) {
        const double ratio = geom.orbit_radius / geom.reference_range;
        ScaledConstants sc;
        sc.carrier = -ratio * radar.carrier_frequency;
        sc.bandwidth = ratio * radar.bandwidth;
        sc.wavelength = kSpeedOfLight / std::abs(sc.carrier);
        return sc;
    }
};

/// Uniform grid in the resampled range time t̄_r = 2u / c.
struct RangeGrid {
    double origin = 0.0;
    double step = 0.0;
    std::size_t count = 0;
};

/// t_r = (2 / c) sqrt(R^2 + R0^2 - R c t̄_r).
inline double fast_time_of(double t_bar, const AcquisitionGeometry& geom) {
    const double R = geom.orbit_radius;
    const double R0 = geom.earth_radius;
    const double arg = R * R + R0 * R0 - R * kSpeedOfLight * t_bar;
    if (!(arg > 0.0)) throw CoverageError("resampled range time maps to no real slant range");
    return 2.0 / kSpeedOfLight * std::sqrt(arg);
}

/// Inverse of fast_time_of: t̄_r = (R^2 + R0^2 - (c t_r / 2)^2) / (R c).
inline double resampled_time_of(double t_r, const AcquisitionGeometry& geom) {
    const double R = geom.orbit_radius;
    const double R0 = geom.earth_radius;
    const double r = 0.5 * kSpeedOfLight * t_r;
    return (R * R + R0 * R0 - r * r) / (R * kSpeedOfLight);
}

/// Half-width (Hz) of the range band occupied after phase compensation by
/// targets with slant ranges in [r_min, r_max]. The compensation leaves a
/// target at range r centred on f_c R (1 / r_ref - 1 / r) with width R B_r / r.
inline double occupied_half_band(double r_min, double r_max, const AcquisitionGeometry& geom,
                                 const RadarParams& radar) {
    const double R = geom.orbit_radius;
    auto edge = [&](double r) {
        return std::abs(radar.carrier_frequency * R * (1.0 / geom.reference_range - 1.0 / r)) +
               0.5 * R * radar.bandwidth / r;
    };
    return std::max(edge(r_min), edge(r_max));
}

/// Resampled grid covering the recorded fast-time window, sampled to hold
/// the occupied band with a 10 % margin.
inline RangeGrid plan_range_grid(const AxisMeta& fast_time, std::size_t n_fast, const AcquisitionGeometry& geom,
                                 const RadarParams& radar) {
    const double t_first = fast_time.at(0.0);
    const double t_last = fast_time.at(static_cast<double>(n_fast - 1));
    const double r_min = 0.5 * kSpeedOfLight * t_first;
    const double r_max = 0.5 * kSpeedOfLight * t_last;
    const double tb_lo = resampled_time_of(t_last, geom);
    const double tb_hi = resampled_time_of(t_first, geom);
    const double rate = 1.1 * 2.0 * occupied_half_band(r_min, r_max, geom, radar);
    const auto needed = static_cast<std::size_t>(std::ceil((tb_hi - tb_lo) * rate)) + 1;
    RangeGrid g;
    g.count = fft::good_size(std::max<std::size_t>(needed, 2));
    g.step = (tb_hi - tb_lo) / static_cast<double>(g.count - 1);
    g.origin = tb_lo;
    return g;
}

inline ComplexRaster range_resample(const ComplexRaster& raw, const AcquisitionGeometry& geom,
                                    const RadarParams& radar, const RangeGrid& grid,
                                    const InterpKernel& kernel = {}) {
    (void)radar;
    require_domains(raw, Domain::time, Domain::time, "range_resample");
    if (grid.count < 2 || !(grid.step > 0.0)) throw ValidationError("range_resample: invalid output grid");

    const auto n_in = static_cast<double>(raw.cols());
    std::vector<double> pos(grid.count);
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < grid.count; ++j) {
        const double tb = grid.origin + static_cast<double>(j) * grid.step;
        pos[j] = raw.axis1.index_of(fast_time_of(tb, geom));
        if (j == 0) lo = hi = pos[j];
        lo = std::min(lo, pos[j]);
        hi = std::max(hi, pos[j]);
    }
    const double tol = 1e-6;
    if (lo < -tol || hi > n_in - 1.0 + tol) {
        std::ostringstream os;
        os << "range_resample: requested grid needs fast time [" << raw.axis1.at(lo) << ", " << raw.axis1.at(hi)
           << "] s but the recorded window is [" << raw.axis1.at(0.0) << ", " << raw.axis1.at(n_in - 1.0) << "] s";
        throw CoverageError(os.str());
    }
    for (auto& p : pos) p = std::clamp(p, 0.0, n_in - 1.0);

    const SincInterpolator interp(kernel);
    const ResamplePlan plan(interp, pos, static_cast<std::ptrdiff_t>(raw.cols()), Boundary::zero);
    ComplexRaster out(raw.rows(), grid.count, raw.axis0, {Domain::time, grid.origin, grid.step, 0.0},
                      "range_resampled");
    parallel_for(raw.rows(), [&](std::size_t i) {
        const auto in = raw.row(i);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < grid.count; ++j)
            dst[j] = plan(j, [&](std::ptrdiff_t k) { return in[static_cast<std::size_t>(k)]; });
    });
    return out;
}

/// Phase of the compensation function at projected coordinate u:
/// (4 pi / c)(f_c r(u) - f̄_c u).
inline double compensation_phase(double u, const AcquisitionGeometry& geom, const RadarParams& radar,
                                 const ScaledConstants& sc) {
    const double r = range_from_u(u, geom);
    return 4.0 * kPi / kSpeedOfLight * (radar.carrier_frequency * r - sc.carrier * u);
}

inline ComplexRaster phase_compensate(ComplexRaster rs, const AcquisitionGeometry& geom, const RadarParams& radar,
                                      const ScaledConstants& sc) {
    require_domains(rs, Domain::time, Domain::time, "phase_compensate");
    std::vector<std::complex<double>> h(rs.cols());
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double u = 0.5 * kSpeedOfLight * rs.axis1.at(static_cast<double>(j));
        h[j] = std::polar(1.0, compensation_phase(u, geom, radar, sc));
    }
    parallel_for(rs.rows(), [&](std::size_t i) {
        auto line = rs.row(i);
        for (std::size_t j = 0; j < line.size(); ++j) line[j] *= h[j];
    });
    rs.stage_tag = "phase_compensated";
    return rs;
}

inline ComplexRaster range_fft(ComplexRaster pc) {
    require_domains(pc, Domain::time, Domain::time, "range_fft");
    fft::transform_rows(pc, fft::Direction::forward);
    pc.stage_tag = "range_spectrum";
    return pc;
}

}  // namespace sga
