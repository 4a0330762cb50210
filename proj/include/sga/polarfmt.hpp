#pragma once

// Polar reformatting of the range spectrum S(t_a, f_r) and instantaneous
// Doppler-centroid removal.
//
// Order used by the focusing pipeline:
//   range_freq_scale -> tan_theta_regrid -> centroid_removal -> keystone_resample

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "sga/error.hpp"
#include "sga/geometry.hpp"
#include "sga/interp.hpp"
#include "sga/parallel.hpp"
#include "sga/raster.hpp"
#include "sga/rangeproc.hpp"

namespace sga {

/// Physical azimuth time at which the orbit angle satisfies
/// (R_c / v) tan(theta) = t_uniform.
inline double tan_grid_source_time(double t_uniform, const AcquisitionGeometry& geom) {
    const double theta = std::atan(geom.velocity * t_uniform / geom.aperture_radius);
    return geom.orbit_radius * theta / geom.velocity;
}

/// Resamples azimuth so rows are uniform in (R_c / v) tan(theta) instead of
/// physical time. Rows are combined with shared weights, so the operation is
/// applied row-wise over all columns at once.
inline ComplexRaster tan_theta_regrid(const ComplexRaster& spec, const AcquisitionGeometry& geom,
                                      const InterpKernel& kernel = {}) {
    if (spec.axis0.domain != Domain::time) throw PreconditionError("tan_theta_regrid: axis0 must be azimuth time");
    const std::size_t n = spec.rows();
    std::vector<double> pos(n);
    for (std::size_t m = 0; m < n; ++m) {
        pos[m] = spec.axis0.index_of(tan_grid_source_time(spec.axis0.at(static_cast<double>(m)), geom));
        if (m > 0 && !(pos[m] > pos[m - 1])) throw NumericalError("tan_theta_regrid: non-monotonic azimuth mapping");
    }
    const SincInterpolator interp(kernel);
    const std::size_t W = static_cast<std::size_t>(interp.stencil());
    ComplexRaster out = spec.like();
    out.stage_tag = "tan_regridded";
    parallel_for(n, [&](std::size_t m) {
        auto dst = out.row(m);
        if (pos[m] < 0.0 || pos[m] > static_cast<double>(n - 1)) return;
        double w[128];
        const std::ptrdiff_t first = interp.weights(pos[m], std::span<double>(w, W));
        for (std::size_t k = 0; k < W; ++k) {
            const std::ptrdiff_t src = first + static_cast<std::ptrdiff_t>(k);
            if (src < 0 || src >= static_cast<std::ptrdiff_t>(n)) continue;
            const auto line = spec.row(static_cast<std::size_t>(src));
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += w[k] * line[j];
        }
    });
    return out;
}

/// Half-width of the occupied band of a range spectrum whose transform
/// window spans the t̄_r extent recorded in `freq_axis`.
inline double occupied_half_band(const AxisMeta& freq_axis, const AcquisitionGeometry& geom,
                                 const RadarParams& radar) {
    const double window = 1.0 / freq_axis.step;
    const double r_min = range_from_u(0.5 * kSpeedOfLight * (freq_axis.ref + 0.5 * window), geom);
    const double r_max = range_from_u(0.5 * kSpeedOfLight * (freq_axis.ref - 0.5 * window), geom);
    return occupied_half_band(r_min, r_max, geom, radar);
}

/// Source range frequency f_r = delta f̄_r + f̄_c (delta - 1) for output bin f̄_r, delta = 1 / cos(theta).
inline double scaled_range_frequency(double f_bar, double theta, const ScaledConstants& sc) {
    const double delta = 1.0 / std::cos(theta);
    return delta * f_bar + sc.carrier * (delta - 1.0);
}

/// Range-frequency scaling f_r = delta f̄_r + f̄_c (delta - 1), delta = 1 / cos(theta),
/// applied per pulse at its orbit angle (axis0 must be physical azimuth time).
/// Bins within +/-`occupied` Hz must map inside the sampled band; 0 means the
/// whole band is occupied.
inline ComplexRaster range_freq_scale(const ComplexRaster& spec, const AcquisitionGeometry& geom,
                                      const ScaledConstants& sc, const InterpKernel& kernel = {},
                                      double occupied = 0.0) {
    require_domains(spec, Domain::time, Domain::frequency, "range_freq_scale");
    const std::size_t nf = spec.cols();
    const AxisMeta& fa = spec.axis1;
    const double f_lo = fa.at(0.0) - 0.5 * fa.step;
    const double f_hi = fa.at(static_cast<double>(nf - 1)) + 0.5 * fa.step;
    if (occupied <= 0.0) occupied = 0.5 * (f_hi - f_lo);

    for (std::size_t i = 0; i < spec.rows(); ++i) {
        const double theta = orbit_angle(spec.axis0.at(static_cast<double>(i)), geom);
        for (double fb : {-occupied, occupied}) {
            const double f = scaled_range_frequency(fb, theta, sc);
            if (f < f_lo || f > f_hi) {
                std::ostringstream os;
                os << "range_freq_scale: range frequency " << fb << " Hz maps to " << f
                   << " Hz, outside the sampled band [" << f_lo << ", " << f_hi << "] Hz at theta = " << theta;
                throw CoverageError(os.str());
            }
        }
    }
    const SincInterpolator interp(kernel);
    ComplexRaster out = spec.like();
    out.stage_tag = "range_scaled";
    parallel_for(spec.rows(), [&](std::size_t i) {
        const double theta = orbit_angle(spec.axis0.at(static_cast<double>(i)), geom);
        const auto in = spec.row(i);
        auto dst = out.row(i);
        auto get = [&](std::ptrdiff_t k) { return in[static_cast<std::size_t>(k)]; };
        for (std::size_t k = 0; k < nf; ++k) {
            const double fb = fa.at(static_cast<double>(k));
            const double f = scaled_range_frequency(fb, theta, sc);
            const std::complex<double> v =
                interp.at(fa.index_of(f), get, static_cast<std::ptrdiff_t>(nf), Boundary::periodic);
            // Spectra are referenced to fa.ref; restore the reference after moving in frequency.
            dst[k] = v * std::polar(1.0, 2.0 * kPi * (fb - f) * fa.ref);
        }
    });
    return out;
}

/// Multiplies by exp{-j pi k_t ((f̄_c + f̄_r) / f̄_c)^2 t_a^2}.
inline ComplexRaster centroid_removal(ComplexRaster spec, double centroid_rate, const ScaledConstants& sc) {
    require_domains(spec, Domain::time, Domain::frequency, "centroid_removal");
    if (!std::isfinite(centroid_rate) || centroid_rate == 0.0)
        throw NumericalError("centroid_removal: centroid rate must be finite and non-zero");
    std::vector<double> ratio2(spec.cols());
    for (std::size_t k = 0; k < ratio2.size(); ++k) {
        const double rho = (sc.carrier + spec.axis1.at(static_cast<double>(k))) / sc.carrier;
        ratio2[k] = rho * rho;
    }
    parallel_for(spec.rows(), [&](std::size_t i) {
        const double t = spec.axis0.at(static_cast<double>(i));
        const double a = -kPi * centroid_rate * t * t;
        auto line = spec.row(i);
        for (std::size_t k = 0; k < line.size(); ++k) line[k] *= std::polar(1.0, a * ratio2[k]);
    });
    spec.stage_tag = "centroid_removed";
    return spec;
}

/// Mode-aware overload: spotlight data has no centroid drift to remove.
inline ComplexRaster centroid_removal(ComplexRaster spec, const AcquisitionGeometry& geom, const RadarParams& radar,
                                      const ScaledConstants& sc) {
    const double kt = doppler_centroid_rate(geom, radar.wavelength());
    return centroid_removal(std::move(spec), kt, sc);
}

/// Azimuth scale f̄_c / (f̄_c + f̄_r) of the keystone transform.
inline double keystone_scale(double f_bar, const ScaledConstants& sc) { return sc.carrier / (sc.carrier + f_bar); }

/// Keystone transform: column f̄_r is resampled at t_a = f̄_c / (f̄_c + f̄_r) * t̄_a.
/// Output rows outside the recorded span are zero. `oversample` > 1 writes a
/// proportionally denser azimuth grid.
inline ComplexRaster keystone_resample(const ComplexRaster& spec, const ScaledConstants& sc,
                                       const InterpKernel& kernel = {}, int oversample = 1) {
    require_domains(spec, Domain::time, Domain::frequency, "keystone_resample");
    if (oversample < 1) throw ValidationError("keystone_resample: oversample must be >= 1");
    const std::size_t n_in = spec.rows();
    const std::size_t n_out = n_in * static_cast<std::size_t>(oversample);
    AxisMeta az = spec.axis0;
    az.step = spec.axis0.step / oversample;
    az.origin = -static_cast<double>(n_out / 2) * az.step;
    ComplexRaster out(n_out, spec.cols(), az, spec.axis1, "keystoned");

    const SincInterpolator interp(kernel);
    parallel_chunks(spec.cols(), [&](std::size_t begin, std::size_t end) {
        std::vector<std::complex<double>> column(n_in);
        auto get = [&](std::ptrdiff_t i) { return column[static_cast<std::size_t>(i)]; };
        for (std::size_t k = begin; k < end; ++k) {
            for (std::size_t i = 0; i < n_in; ++i) column[i] = spec(i, k);
            const double fb = spec.axis1.at(static_cast<double>(k));
            const double scale = keystone_scale(fb, sc);
            for (std::size_t m = 0; m < n_out; ++m) {
                const double t = scale * az.at(static_cast<double>(m));
                out(m, k) = interp.at(spec.axis0.index_of(t), get, static_cast<std::ptrdiff_t>(n_in), Boundary::zero);
            }
        }
    });
    return out;
}

}  // namespace sga
