#pragma once

// Point-target echo synthesis in the demodulated, pulse-compressed domain:
//
//   S(t_a, t_r) = sum_i a_i A_i(t_a) sinc(B_r (t_r - 2 r_i / c)) exp(-j 4 pi f_c r_i / c)

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "sga/error.hpp"
#include "sga/geometry.hpp"
#include "sga/interp.hpp"
#include "sga/parallel.hpp"
#include "sga/raster.hpp"

namespace sga {

/// Range envelope is truncated at this many sinc lobes on each side.
inline constexpr int kEnvelopeLobes = 32;

inline double pulse_time(std::size_t n, const RadarParams& radar) {
    return (static_cast<double>(n) - static_cast<double>(radar.pulses / 2)) / radar.prf;
}

inline AxisMeta azimuth_time_axis(const RadarParams& radar) {
    return {Domain::time, -static_cast<double>(radar.pulses / 2) / radar.prf, 1.0 / radar.prf, 0.0};
}

/// Fast-time window start that centres the window on the scene-centre echo.
inline double default_range_window_start(const RadarParams& radar, const AcquisitionGeometry& geom) {
    return 2.0 * geom.reference_range / kSpeedOfLight - static_cast<double>(radar.range_samples / 2) / radar.sampling_rate;
}

inline ComplexRaster simulate_echo(std::span<const PointTarget> targets, const RadarParams& radar,
                                   const AcquisitionGeometry& geom, double range_window_start) {
    geom.validate();
    radar.validate(geom);
    for (const auto& t : targets) t.validate(geom);

    const AxisMeta az = azimuth_time_axis(radar);
    const AxisMeta rg{Domain::time, range_window_start, 1.0 / radar.sampling_rate, 0.0};
    ComplexRaster out(static_cast<std::size_t>(radar.pulses), static_cast<std::size_t>(radar.range_samples), az, rg,
                      "echo");
    const auto n_rg = static_cast<std::ptrdiff_t>(radar.range_samples);

    for (std::size_t k = 0; k < targets.size(); ++k) {
        for (std::size_t n = 0; n < out.rows(); ++n) {
            const double ta = pulse_time(n, radar);
            if (beam_support(ta, targets[k], geom) == 0.0) continue;
            const double r = range_at_angle(orbit_angle(ta, geom), targets[k].position, geom);
            const double pos = rg.index_of(2.0 * r / kSpeedOfLight);
            if (pos < 0.0 || pos > static_cast<double>(n_rg - 1)) {
                std::ostringstream os;
                os << "target " << k << " at (" << targets[k].position.x << ", " << targets[k].position.y << ", "
                   << targets[k].position.z << ") leaves the range window at t_a = " << ta << " s (slant range " << r
                   << " m)";
                throw CoverageError(os.str());
            }
        }
    }

    const double half_span = kEnvelopeLobes * radar.sampling_rate / radar.bandwidth;
    const double phase_scale = 4.0 * kPi * radar.carrier_frequency / kSpeedOfLight;
    parallel_for(out.rows(), [&](std::size_t n) {
        const double ta = pulse_time(n, radar);
        const double theta = orbit_angle(ta, geom);
        auto line = out.row(n);
        for (const auto& tgt : targets) {
            if (beam_support(ta, tgt, geom) == 0.0) continue;
            const double r = range_at_angle(theta, tgt.position, geom);
            const double tau = 2.0 * r / kSpeedOfLight;
            const double centre = rg.index_of(tau);
            const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(centre - half_span)));
            const auto hi = std::min<std::ptrdiff_t>(n_rg - 1, static_cast<std::ptrdiff_t>(std::floor(centre + half_span)));
            const std::complex<double> carrier = tgt.amplitude * std::polar(1.0, -phase_scale * r);
            for (std::ptrdiff_t j = lo; j <= hi; ++j) {
                const double tr = rg.at(static_cast<double>(j));
                line[static_cast<std::size_t>(j)] += carrier * normalized_sinc(radar.bandwidth * (tr - tau));
            }
        }
    });
    return out;
}

inline ComplexRaster simulate_echo(std::span<const PointTarget> targets, const RadarParams& radar,
                                   const AcquisitionGeometry& geom) {
    return simulate_echo(targets, radar, geom, default_range_window_start(radar, geom));
}

}  // namespace sga
