#pragma once

// 8-bit grayscale PNG quicklooks of 20 log10 |data|, clipped to the 1st and
// 99th percentiles.

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "sga/error.hpp"
#include "sga/raster.hpp"

namespace sga {

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  ///< row-major, height rows of width bytes
};

/// Rows follow axis0 (azimuth), columns follow axis1 (range). A raster whose
/// clipped dynamic range is empty renders as uniform mid-gray.
template <typename T>
GrayImage render_quicklook(const Raster<T>& r) {
    const std::size_t n = r.size();
    std::vector<double> db(n);
    double floor_db = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double m = std::abs(std::complex<double>(r.data()[k]));
        db[k] = m > 0.0 ? 20.0 * std::log10(m) : -std::numeric_limits<double>::infinity();
        if (m > 0.0) floor_db = std::min(floor_db, db[k]);
    }
    if (!std::isfinite(floor_db)) floor_db = 0.0;
    for (auto& v : db)
        if (!std::isfinite(v)) v = floor_db;

    std::vector<double> sorted = db;
    auto pct = [&](double q) {
        const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(n - 1)));
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(idx), sorted.end());
        return sorted[idx];
    };
    const double lo = pct(0.01);
    const double hi = pct(0.99);

    GrayImage img;
    img.width = r.cols();
    img.height = r.rows();
    img.pixels.resize(n);
    const double span = hi - lo;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(span > 1e-9)) {
            img.pixels[k] = 128;
            continue;
        }
        const double t = std::clamp((db[k] - lo) / span, 0.0, 1.0);
        img.pixels[k] = static_cast<std::uint8_t>(std::lround(255.0 * t));
    }
    return img;
}

namespace detail {

inline bool png_write_rows(std::FILE* fp, const GrayImage& img) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(img.pixels.data() + y * img.width));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace detail

inline void write_png(const std::string& path, const GrayImage& img) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw ValidationError("cannot write '" + path + "'");
    const bool ok = detail::png_write_rows(fp, img);
    const bool closed = std::fclose(fp) == 0;
    if (!ok || !closed) throw ValidationError("PNG encoding failed for '" + path + "'");
}

/// Reads an 8-bit grayscale PNG (used to check quicklooks).
inline GrayImage read_png(const std::string& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw ValidationError("cannot read PNG '" + path + "'");
    image.format = PNG_FORMAT_GRAY;
    GrayImage out;
    out.width = image.width;
    out.height = image.height;
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw ValidationError("cannot decode PNG '" + path + "'");
    }
    return out;
}

}  // namespace sga
