#pragma once

// Final compression and image coordinates.
//
// Transform conventions: "forward" uses exp(-j 2 pi f t). The classic path
// applies the forward transform in azimuth so that a target with positive
// along-track position lands at positive azimuth frequency.

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "sga/error.hpp"
#include "sga/fft.hpp"
#include "sga/geometry.hpp"
#include "sga/parallel.hpp"
#include "sga/raster.hpp"
#include "sga/rangeproc.hpp"

namespace sga {

enum class Algorithm { classic, extended, backprojection };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::classic: return "classic";
        case Algorithm::extended: return "extended";
        case Algorithm::backprojection: return "backprojection";
    }
    return "unknown";
}

inline Algorithm algorithm_from_string(std::string_view s) {
    if (s == "classic") return Algorithm::classic;
    if (s == "extended") return Algorithm::extended;
    if (s == "backprojection") return Algorithm::backprojection;
    throw ValidationError("unknown algorithm '" + std::string(s) + "'");
}

/// value = offset + scale * index
struct AffineMap {
    double offset = 0.0;
    double scale = 1.0;

    double operator()(double index) const { return offset + scale * index; }
    double inverse(double value) const { return (value - offset) / scale; }

    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

struct FocusedImage {
    ComplexRaster raster;
    AffineMap x_map;  ///< axis0 index -> along-track image coordinate (m)
    AffineMap y_map;  ///< axis1 index -> orbital-plane y (m)
    Algorithm algo = Algorithm::extended;
    Mode mode = Mode::stripmap;
    /// Image x divided by target x; R_centre / (R_scene + R_centre) for TOPS
    /// images from the matched-filter path, 1 otherwise.
    double x_scale = 1.0;

    double target_x(double x_image) const { return x_image / x_scale; }
};

/// Range inverse transform then azimuth forward transform (spectral analysis).
inline FocusedImage spectral_compress(ComplexRaster dec) {
    require_domains(dec, Domain::time, Domain::frequency, "spectral_compress");
    fft::transform_rows(dec, fft::Direction::inverse);
    fft::transform_cols(dec, fft::Direction::forward);
    dec.stage_tag = "focused_classic";
    FocusedImage img;
    img.raster = std::move(dec);
    img.algo = Algorithm::classic;
    return img;
}

/// Azimuth reference function H(f̄_a) = exp{-j pi f̄_a^2 / k_t}.
inline std::complex<double> azimuth_reference(double fa, double centroid_rate) {
    return std::polar(1.0, -kPi * fa * fa / centroid_rate);
}

/// Azimuth forward transform, reference multiply, azimuth inverse transform,
/// then range inverse transform.
inline FocusedImage matched_filter_compress(ComplexRaster dec, double centroid_rate, const AcquisitionGeometry& geom) {
    require_domains(dec, Domain::time, Domain::frequency, "matched_filter_compress");
    if (!std::isfinite(centroid_rate) || centroid_rate == 0.0)
        throw NumericalError("matched_filter_compress: degenerate reference function (k_t = 0)");

    const std::size_t n = dec.rows();
    const AxisMeta freq = fft::transformed_axis(dec.axis0, n, fft::Direction::forward);
    std::vector<std::complex<double>> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = azimuth_reference(freq.at(static_cast<double>(i)), centroid_rate);

    parallel_chunks(dec.cols(), [&](std::size_t begin, std::size_t end) {
        fft::LineTransform fwd(n, fft::Direction::forward);
        fft::LineTransform inv(n, fft::Direction::inverse);
        std::vector<std::complex<double>> line(n);
        for (std::size_t k = begin; k < end; ++k) {
            fwd.apply([&](std::size_t i) { return dec(i, k); }, [&](std::size_t i, std::complex<double> v) { line[i] = v * h[i]; });
            inv.apply([&](std::size_t i) { return line[i]; }, [&](std::size_t i, std::complex<double> v) { dec(i, k) = v; });
        }
    });
    fft::transform_rows(dec, fft::Direction::inverse);
    dec.stage_tag = "focused_extended";
    FocusedImage img;
    img.raster = std::move(dec);
    img.algo = Algorithm::extended;
    img.mode = geom.mode;
    return img;
}

/// Populates the coordinate maps:
///   classic:  x = (|λ̄| R_c / 2v) f̄_a,  y = c t̄_r / 2
///   extended: x = v t̄_a,              y = c t̄_r / 2
inline FocusedImage to_ground_coords(FocusedImage img, const AcquisitionGeometry& geom, const ScaledConstants& sc) {
    const auto& a0 = img.raster.axis0;
    const auto& a1 = img.raster.axis1;
    const double half_c = 0.5 * kSpeedOfLight;
    img.mode = geom.mode;
    img.y_map = {half_c * a1.origin, half_c * a1.step};
    if (img.algo == Algorithm::classic) {
        if (a0.domain != Domain::frequency) throw PreconditionError("to_ground_coords: classic image needs azimuth frequency");
        const double s = sc.wavelength * geom.aperture_radius / (2.0 * geom.velocity);
        img.x_map = {s * a0.origin, s * a0.step};
        img.x_scale = 1.0;
    } else if (img.algo == Algorithm::extended) {
        if (a0.domain != Domain::time) throw PreconditionError("to_ground_coords: extended image needs azimuth time");
        img.x_map = {geom.velocity * a0.origin, geom.velocity * a0.step};
        img.x_scale = tops_scale(geom);
    }
    return img;
}

}  // namespace sga
