#pragma once

// End-to-end focusing: range preprocessing, polar reformatting and final
// compression.

#include <string>
#include <vector>

#include "sga/azcomp.hpp"
#include "sga/error.hpp"
#include "sga/geometry.hpp"
#include "sga/interp.hpp"
#include "sga/polarfmt.hpp"
#include "sga/rangeproc.hpp"
#include "sga/raster.hpp"

namespace sga {

struct FocusOptions {
    Algorithm algo = Algorithm::extended;
    InterpKernel kernel{};
    int azimuth_oversample = 1;  ///< keystone output density factor
    bool keep_intermediates = false;
};

struct FocusResult {
    FocusedImage image;
    ScaledConstants scaled;
    double centroid_rate = 0.0;  ///< k_t used by the matched filter, 0 on the classic path
    std::vector<std::string> notices;
    /// Range spectrum after range preprocessing and the decoupled spectrum
    /// handed to compression; filled when keep_intermediates is set.
    ComplexRaster range_spectrum;
    ComplexRaster decoupled;
};

/// Range preprocessing: resample to t̄_r, compensate, range transform.
inline ComplexRaster range_preprocess(const ComplexRaster& raw, const RadarParams& radar,
                                      const AcquisitionGeometry& geom, const InterpKernel& kernel = {}) {
    const ScaledConstants sc = ScaledConstants::from(geom, radar);
    const RangeGrid grid = plan_range_grid(raw.axis1, raw.cols(), geom, radar);
    return range_fft(phase_compensate(range_resample(raw, geom, radar, grid, kernel), geom, radar, sc));
}

inline FocusResult focus(const ComplexRaster& raw, const RadarParams& radar, const AcquisitionGeometry& geom,
                         const FocusOptions& opt = {}) {
    geom.validate();
    radar.validate(geom);
    opt.kernel.validate();
    require_domains(raw, Domain::time, Domain::time, "focus");
    if (opt.algo == Algorithm::backprojection)
        throw ValidationError("focus: backprojection is an analysis oracle, not a focusing algorithm");

    FocusResult res;
    res.scaled = ScaledConstants::from(geom, radar);
    const ScaledConstants& sc = res.scaled;
    Algorithm algo = opt.algo;
    if (algo == Algorithm::extended && geom.mode == Mode::spotlight) {
        res.notices.emplace_back("extended algorithm requested for spotlight data; using classic");
        algo = Algorithm::classic;
    }

    ComplexRaster spec = range_preprocess(raw, radar, geom, opt.kernel);
    if (opt.keep_intermediates) res.range_spectrum = spec;
    const double occupied = occupied_half_band(spec.axis1, geom, radar);
    spec = range_freq_scale(spec, geom, sc, opt.kernel, occupied);
    spec = tan_theta_regrid(spec, geom, opt.kernel);
    if (algo == Algorithm::extended) {
        res.centroid_rate = doppler_centroid_rate(geom, radar.wavelength());
        spec = centroid_removal(std::move(spec), res.centroid_rate, sc);
    }
    spec = keystone_resample(spec, sc, opt.kernel, opt.azimuth_oversample);
    if (opt.keep_intermediates) res.decoupled = spec;

    FocusedImage img = algo == Algorithm::classic ? spectral_compress(std::move(spec))
                                                  : matched_filter_compress(std::move(spec), res.centroid_rate, geom);
    res.image = to_ground_coords(std::move(img), geom, sc);
    return res;
}

}  // namespace sga
