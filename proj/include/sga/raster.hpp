#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sga/error.hpp"

namespace sga {

enum class Domain { time, frequency };

inline std::string_view to_string(Domain d) { return d == Domain::time ? "time" : "frequency"; }

inline Domain domain_from_string(std::string_view s) {
    if (s == "time") return Domain::time;
    if (s == "frequency") return Domain::frequency;
    throw ValidationError("unknown axis domain '" + std::string(s) + "'");
}

/// Sample positions along one raster axis.
///
/// Frequency axes produced by a transform also record `ref`, the time at the
/// centre sample of the transformed grid. Spectra are phase-referenced to that
/// instant; the physical spectrum is X(f) * exp(-j 2 pi f ref).
struct AxisMeta {
    Domain domain = Domain::time;
    double origin = 0.0;
    double step = 1.0;
    double ref = 0.0;

    double at(double index) const { return origin + index * step; }
    double index_of(double value) const { return (value - origin) / step; }
    std::string_view unit() const { return domain == Domain::time ? "s" : "Hz"; }

    friend bool operator==(const AxisMeta&, const AxisMeta&) = default;
};

/// 2-D sample grid; axis0 is azimuth (slow, rows), axis1 is range (fast, columns).
template <typename T>
class Raster {
public:
    using value_type = T;

    Raster() = default;

    Raster(std::size_t rows, std::size_t cols, AxisMeta axis0, AxisMeta axis1, std::string stage_tag = {})
        : axis0(axis0), axis1(axis1), stage_tag(std::move(stage_tag)), rows_(rows), cols_(cols),
          data_(rows * cols, T{}) {
        if (rows < 2 || cols < 2) throw ValidationError("raster dimensions must be at least 2x2");
        if (!(axis0.step > 0.0) || !(axis1.step > 0.0)) throw ValidationError("raster axis steps must be > 0");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    /// Same shape and metadata, zero samples.
    Raster like() const {
        Raster out;
        out.axis0 = axis0;
        out.axis1 = axis1;
        out.stage_tag = stage_tag;
        out.rows_ = rows_;
        out.cols_ = cols_;
        out.data_.assign(data_.size(), T{});
        return out;
    }

    AxisMeta axis0;
    AxisMeta axis1;
    std::string stage_tag;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexRaster = Raster<std::complex<double>>;
using ComplexRasterF = Raster<std::complex<float>>;

template <typename To, typename From>
Raster<To> convert(const Raster<From>& in) {
    Raster<To> out(in.rows(), in.cols(), in.axis0, in.axis1, in.stage_tag);
    auto& dst = out.data();
    const auto& src = in.data();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = To(src[k]);
    return out;
}

template <typename T>
double energy(const Raster<T>& r) {
    double e = 0.0;
    for (const auto& v : r.data()) e += std::norm(std::complex<double>(v));
    return e;
}

template <typename T>
void require_domains(const Raster<T>& r, Domain d0, Domain d1, std::string_view op) {
    if (r.axis0.domain != d0 || r.axis1.domain != d1) {
        throw PreconditionError(std::string(op) + ": expected axes (" + std::string(to_string(d0)) + ", " +
                                std::string(to_string(d1)) + "), got (" + std::string(to_string(r.axis0.domain)) +
                                ", " + std::string(to_string(r.axis1.domain)) + ")");
    }
}

}  // namespace sga
