#pragma once

// Unitary, centred discrete Fourier transforms on top of FFTW.
//
// For a sequence of length N with centre index c = N / 2 the forward transform is
//
//     X[k] = N^{-1/2} sum_n x[n] exp(-j 2 pi (k - c)(n - c) / N)
//
// so index c holds DC on both sides and frequency increases with k. The
// inverse uses the opposite sign. Both directions preserve energy exactly up
// to rounding.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "sga/parallel.hpp"
#include "sga/raster.hpp"

namespace sga::fft {

enum class Direction { forward, inverse };

namespace detail {

/// Owning fftw_malloc buffer; keeps SIMD alignment identical across workers.
class AlignedBuffer {
public:
    explicit AlignedBuffer(std::size_t n)
        : n_(n), ptr_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)))) {}
    ~AlignedBuffer() { fftw_free(ptr_); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;

    fftw_complex* get() { return ptr_; }
    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(ptr_); }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    fftw_complex* ptr_;
};

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// Plans are created once per (length, sign) and live for the process.
inline fftw_plan plan_for(std::size_t n, Direction dir) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    AlignedBuffer in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), sign, FFTW_ESTIMATE);
    cache.emplace(key, p);
    return p;
}

}  // namespace detail

/// Reusable per-worker state for transforming many lines of the same length.
class LineTransform {
public:
    LineTransform(std::size_t n, Direction dir)
        : n_(n), centre_(n / 2), scale_(1.0 / std::sqrt(static_cast<double>(n))),
          plan_(detail::plan_for(n, dir)), in_(n), out_(n) {}

    /// In-place centred unitary transform of a strided line.
    template <typename Getter, typename Setter>
    void apply(Getter&& get, Setter&& set) {
        std::complex<double>* in = in_.data();
        std::complex<double>* out = out_.data();
        for (std::size_t m = 0; m < n_; ++m) in[m] = get((m + centre_) % n_);
        fftw_execute_dft(plan_, in_.get(), out_.get());
        for (std::size_t k = 0; k < n_; ++k) set(k, out[(k + n_ - centre_) % n_] * scale_);
    }

    void apply(std::span<std::complex<double>> line) {
        apply([&](std::size_t i) { return line[i]; }, [&](std::size_t i, std::complex<double> v) { line[i] = v; });
    }

private:
    std::size_t n_;
    std::size_t centre_;
    double scale_;
    fftw_plan plan_;
    detail::AlignedBuffer in_;
    detail::AlignedBuffer out_;
};

inline void centered_dft(std::span<std::complex<double>> line, Direction dir) {
    LineTransform t(line.size(), dir);
    t.apply(line);
}

inline std::vector<std::complex<double>> centered_dft(std::vector<std::complex<double>> line, Direction dir) {
    centered_dft(std::span<std::complex<double>>(line), dir);
    return line;
}

/// Axis metadata after transforming an axis of length n.
inline AxisMeta transformed_axis(const AxisMeta& a, std::size_t n, Direction dir) {
    const double c = static_cast<double>(n / 2);
    AxisMeta out;
    if (a.domain == Domain::time) {
        if (dir != Direction::forward) throw PreconditionError("inverse transform of a time axis is not defined");
        out.domain = Domain::frequency;
        out.step = 1.0 / (static_cast<double>(n) * a.step);
        out.origin = -c * out.step;
        out.ref = a.origin + c * a.step;
    } else {
        if (dir != Direction::inverse) throw PreconditionError("forward transform of a frequency axis is not defined");
        out.domain = Domain::time;
        out.step = 1.0 / (static_cast<double>(n) * a.step);
        out.origin = a.ref - c * out.step;
        out.ref = 0.0;
    }
    return out;
}

/// Transforms every row (along axis1, range).
inline void transform_rows(ComplexRaster& r, Direction dir) {
    const AxisMeta next = transformed_axis(r.axis1, r.cols(), dir);
    parallel_chunks(r.rows(), [&](std::size_t begin, std::size_t end) {
        LineTransform t(r.cols(), dir);
        for (std::size_t i = begin; i < end; ++i) t.apply(r.row(i));
    });
    r.axis1 = next;
}

/// Transforms every column (along axis0, azimuth).
inline void transform_cols(ComplexRaster& r, Direction dir) {
    const AxisMeta next = transformed_axis(r.axis0, r.rows(), dir);
    const std::size_t cols = r.cols();
    parallel_chunks(cols, [&](std::size_t begin, std::size_t end) {
        LineTransform t(r.rows(), dir);
        for (std::size_t j = begin; j < end; ++j) {
            t.apply([&](std::size_t i) { return r(i, j); }, [&](std::size_t i, std::complex<double> v) { r(i, j) = v; });
        }
    });
    r.axis0 = next;
}

/// Smallest length >= n whose prime factors are all in {2, 3, 5}.
inline std::size_t good_size(std::size_t n) {
    for (std::size_t m = std::max<std::size_t>(n, 2);; ++m) {
        std::size_t k = m;
        for (std::size_t p : {2u, 3u, 5u})
            while (k % p == 0) k /= p;
        if (k == 1) return m;
    }
}

}  // namespace sga::fft
