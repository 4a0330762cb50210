#pragma once

// Kaiser-windowed sinc interpolation from a lookup table.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sga/error.hpp"
#include "sga/geometry.hpp"

namespace sga {

struct InterpKernel {
    int taps = 8;          ///< half-width in samples; the stencil spans 2 * taps samples
    double beta = 8.0;     ///< Kaiser shape parameter
    int oversample = 512;  ///< table entries per sample

    void validate() const {
        if (taps < 4 || taps > 64) throw ValidationError("kernel: taps must be in [4, 64]");
        if (!(beta > 0.0)) throw ValidationError("kernel: beta must be > 0");
        if (oversample < 64) throw ValidationError("kernel: oversample must be >= 64");
    }

    friend bool operator==(const InterpKernel&, const InterpKernel&) = default;
};

enum class Boundary {
    zero,      ///< samples outside [0, n) are zero
    periodic,  ///< indices wrap modulo n
};

inline double normalized_sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

/// Kaiser window evaluated at offset d from the centre of a window of half-width w.
inline double kaiser(double d, double w, double beta) {
    const double t = d / w;
    if (std::abs(t) >= 1.0) return 0.0;
    return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - t * t)) / std::cyl_bessel_i(0.0, beta);
}

class SincInterpolator {
public:
    explicit SincInterpolator(const InterpKernel& k = {}) : kernel_(k) {
        k.validate();
        const std::size_t n = static_cast<std::size_t>(k.taps) * k.oversample + 2;
        table_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = static_cast<double>(i) / k.oversample;
            table_[i] = normalized_sinc(d) * kaiser(d, k.taps, k.beta);
        }
    }

    const InterpKernel& kernel() const { return kernel_; }
    int half_width() const { return kernel_.taps; }
    int stencil() const { return 2 * kernel_.taps; }

    /// Untabulated kernel value.
    double exact(double d) const { return normalized_sinc(d) * kaiser(d, kernel_.taps, kernel_.beta); }

    /// Tabulated kernel value (linear interpolation between table entries).
    double value(double d) const {
        const double x = std::abs(d) * kernel_.oversample;
        const auto i = static_cast<std::size_t>(x);
        if (i + 1 >= table_.size()) return 0.0;
        const double t = x - static_cast<double>(i);
        return table_[i] + t * (table_[i + 1] - table_[i]);
    }

    /// Fills `w` (size 2 * taps) with weights for position `pos`; the weights
    /// apply to samples first, first + 1, ... and sum to one. Returns first.
    std::ptrdiff_t weights(double pos, std::span<double> w) const {
        const double base = std::floor(pos);
        const double frac = pos - base;
        const int W = kernel_.taps;
        double sum = 0.0;
        for (int k = -W + 1; k <= W; ++k) {
            const double v = value(frac - k);
            w[static_cast<std::size_t>(k + W - 1)] = v;
            sum += v;
        }
        for (auto& v : w) v /= sum;
        return static_cast<std::ptrdiff_t>(base) - W + 1;
    }

    /// Interpolates the sequence get(0..n-1) at fractional index pos.
    template <typename Get>
    std::complex<double> at(double pos, Get&& get, std::ptrdiff_t n, Boundary boundary) const {
        if (boundary == Boundary::zero && (pos < 0.0 || pos > static_cast<double>(n - 1))) return {};
        double w[128];
        const std::span<double> ws(w, static_cast<std::size_t>(stencil()));
        const std::ptrdiff_t first = weights(pos, ws);
        return apply(first, ws, get, n, boundary);
    }

    template <typename Get>
    static std::complex<double> apply(std::ptrdiff_t first, std::span<const double> w, Get&& get, std::ptrdiff_t n,
                                      Boundary boundary) {
        std::complex<double> acc{};
        const auto m = static_cast<std::ptrdiff_t>(w.size());
        if (first >= 0 && first + m <= n) {
            for (std::ptrdiff_t k = 0; k < m; ++k) acc += w[static_cast<std::size_t>(k)] * std::complex<double>(get(first + k));
            return acc;
        }
        for (std::ptrdiff_t k = 0; k < m; ++k) {
            std::ptrdiff_t idx = first + k;
            if (boundary == Boundary::periodic) {
                idx %= n;
                if (idx < 0) idx += n;
            } else if (idx < 0 || idx >= n) {
                continue;
            }
            acc += w[static_cast<std::size_t>(k)] * std::complex<double>(get(idx));
        }
        return acc;
    }

private:
    InterpKernel kernel_;
    std::vector<double> table_;
};

/// Precomputed stencils for resampling many lines onto the same positions.
class ResamplePlan {
public:
    ResamplePlan(const SincInterpolator& interp, std::span<const double> positions, std::ptrdiff_t n_in,
                 Boundary boundary)
        : stencil_(static_cast<std::size_t>(interp.stencil())), n_in_(n_in), boundary_(boundary),
          first_(positions.size()), valid_(positions.size()), weights_(positions.size() * stencil_) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const double p = positions[i];
            valid_[i] = boundary == Boundary::periodic || (p >= 0.0 && p <= static_cast<double>(n_in - 1));
            if (!valid_[i]) continue;
            first_[i] = interp.weights(p, std::span<double>(weights_.data() + i * stencil_, stencil_));
        }
    }

    std::size_t size() const { return first_.size(); }

    template <typename Get>
    std::complex<double> operator()(std::size_t i, Get&& get) const {
        if (!valid_[i]) return {};
        return SincInterpolator::apply(first_[i], std::span<const double>(weights_.data() + i * stencil_, stencil_),
                                       get, n_in_, boundary_);
    }

private:
    std::size_t stencil_;
    std::ptrdiff_t n_in_;
    Boundary boundary_;
    std::vector<std::ptrdiff_t> first_;
    std::vector<char> valid_;
    std::vector<double> weights_;
};

}  // namespace sga
