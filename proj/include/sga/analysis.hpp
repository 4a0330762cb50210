#pragma once

// Image-quality metrics, aliasing prediction, spectrograms, sub-look range
// tracking and a time-domain backprojection reference.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "sga/azcomp.hpp"
#include "sga/error.hpp"
#include "sga/fft.hpp"
#include "sga/geometry.hpp"
#include "sga/interp.hpp"
#include "sga/parallel.hpp"
#include "sga/raster.hpp"
#include "sga/rangeproc.hpp"

namespace sga {

struct IrfReport {
    std::array<double, 2> peak_xy{};  ///< image coordinates (m)
    std::array<double, 2> peak_index{};  ///< fractional (axis0, axis1) index
    double width_az = 0.0;            ///< -3 dB width along axis0 (m)
    double width_rg = 0.0;            ///< -3 dB width along axis1 (m)
    double pslr_az = 0.0;             ///< dB
    double pslr_rg = 0.0;
    double islr_az = 0.0;             ///< dB
    double islr_rg = 0.0;
    double peak_mag = 0.0;            ///< linear magnitude at the interpolated peak
};

struct IrfOptions {
    int chip = 128;     ///< chip edge length (samples) cut around the peak
    int upsample = 8;   ///< interpolation factor applied to the chip
    double islr_widths = 20.0;  ///< annulus extent in mainlobe (null-to-null) widths
};

namespace detail {

/// Index of the lowest-energy bin of a centred spectrum, smoothed over 5 bins.
inline std::size_t quietest_bin(std::span<const double> power) {
    const std::size_t n = power.size();
    std::size_t best = 0;
    double best_e = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        double e = 0.0;
        for (std::size_t d = 0; d < 5; ++d) e += power[(k + n + d - 2) % n];
        if (best_e < 0.0 || e < best_e) {
            best_e = e;
            best = k;
        }
    }
    return best;
}

/// Spectral zero-padding of a square chip by factor u in both axes. The
/// spectrum is split at its quietest bin so band-pass content is preserved.
inline std::vector<std::complex<double>> upsample_chip(std::vector<std::complex<double>> chip, std::size_t n,
                                                       std::size_t u) {
    const std::size_t m = n * u;
    // Transform rows then columns.
    fft::LineTransform fwd(n, fft::Direction::forward);
    for (std::size_t i = 0; i < n; ++i) fwd.apply(std::span<std::complex<double>>(chip.data() + i * n, n));
    for (std::size_t j = 0; j < n; ++j) {
        fwd.apply([&](std::size_t i) { return chip[i * n + j]; },
                  [&](std::size_t i, std::complex<double> v) { chip[i * n + j] = v; });
    }
    std::vector<double> p0(n, 0.0), p1(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double e = std::norm(chip[i * n + j]);
            p0[i] += e;
            p1[j] += e;
        }
    // Each bin gets a representative frequency in a window of n bins that
    // ends at the quietest bin, so the occupied band stays contiguous.
    const auto c = static_cast<std::ptrdiff_t>(n / 2);
    const auto cm = static_cast<std::ptrdiff_t>(m / 2);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    auto place = [&](std::size_t k, std::size_t split) {
        const std::ptrdiff_t fs = static_cast<std::ptrdiff_t>(split) - c;
        const std::ptrdiff_t lo = fs >= 0 ? fs + 1 - sn : fs + 1;
        std::ptrdiff_t f = static_cast<std::ptrdiff_t>(k) - c;
        while (f < lo) f += sn;
        while (f >= lo + sn) f -= sn;
        return static_cast<std::size_t>(cm + f);
    };
    const std::size_t s0 = quietest_bin(p0);
    const std::size_t s1 = quietest_bin(p1);
    std::vector<std::complex<double>> big(m * m);
    std::vector<std::size_t> r0(n), r1(n);
    for (std::size_t k = 0; k < n; ++k) {
        r0[k] = place(k, s0);
        r1[k] = place(k, s1);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) big[r0[i] * m + r1[j]] = chip[i * n + j];
    fft::LineTransform inv(m, fft::Direction::inverse);
    for (std::size_t i = 0; i < m; ++i) inv.apply(std::span<std::complex<double>>(big.data() + i * m, m));
    for (std::size_t j = 0; j < m; ++j) {
        inv.apply([&](std::size_t i) { return big[i * m + j]; },
                  [&](std::size_t i, std::complex<double> v) { big[i * m + j] = v; });
    }
    return big;
}

/// Vertex offset in (-0.5, 0.5) of the parabola through three samples.
inline double parabolic_offset(double a, double b, double c) {
    const double den = a - 2.0 * b + c;
    if (den >= 0.0) return 0.0;
    return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

struct CutMetrics {
    double width = 0.0;  ///< samples
    double pslr = 0.0;
    double islr = 0.0;
};

/// Metrics of a magnitude cut whose maximum sits at index p.
inline CutMetrics cut_metrics(std::span<const double> mag, std::size_t p, double islr_widths) {
    const std::size_t n = mag.size();
    const double peak = mag[p];
    const double half = peak / std::sqrt(2.0);
    auto crossing = [&](int dir) {
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(p);
        while (true) {
            const std::ptrdiff_t j = i + dir;
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(n))
                throw NotFoundError("irf_metrics: -3 dB point outside the analysis chip");
            if (mag[static_cast<std::size_t>(j)] <= half) {
                const double a = mag[static_cast<std::size_t>(i)];
                const double b = mag[static_cast<std::size_t>(j)];
                return static_cast<double>(i) + dir * (a - half) / (a - b);
            }
            i = j;
        }
    };
    CutMetrics m;
    m.width = crossing(+1) - crossing(-1);

    auto first_null = [&](int dir) {
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(p);
        while (true) {
            const std::ptrdiff_t j = i + dir;
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) return i;
            if (mag[static_cast<std::size_t>(j)] > mag[static_cast<std::size_t>(i)]) return i;
            i = j;
        }
    };
    const std::ptrdiff_t lo = first_null(-1);
    const std::ptrdiff_t hi = first_null(+1);
    const double lobe = static_cast<double>(hi - lo);
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(0.5 * islr_widths * lobe));
    const std::ptrdiff_t a_lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(p) - reach);
    const std::ptrdiff_t a_hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1,
                                                         static_cast<std::ptrdiff_t>(p) + reach);
    double side_peak = 0.0, e_main = 0.0, e_side = 0.0;
    for (std::ptrdiff_t i = a_lo; i <= a_hi; ++i) {
        const double v = mag[static_cast<std::size_t>(i)];
        if (i > lo && i < hi) {
            e_main += v * v;
        } else {
            e_side += v * v;
            side_peak = std::max(side_peak, v);
        }
    }
    m.pslr = side_peak > 0.0 ? 20.0 * std::log10(side_peak / peak) : -400.0;
    m.islr = e_side > 0.0 ? 10.0 * std::log10(e_side / e_main) : -400.0;
    return m;
}

}  // namespace detail

/// Impulse-response metrics of the dominant peak within +/- window_cells
/// samples of approx_xy (image coordinates).
inline IrfReport irf_metrics(const FocusedImage& img, std::array<double, 2> approx_xy, int window_cells,
                             const IrfOptions& opt = {}) {
    const auto& r = img.raster;
    const auto rows = static_cast<std::ptrdiff_t>(r.rows());
    const auto cols = static_cast<std::ptrdiff_t>(r.cols());
    if (window_cells < 1) throw ValidationError("irf_metrics: window_cells must be >= 1");
    const auto ci = static_cast<std::ptrdiff_t>(std::lround(img.x_map.inverse(approx_xy[0])));
    const auto cj = static_cast<std::ptrdiff_t>(std::lround(img.y_map.inverse(approx_xy[1])));

    double best = 0.0;
    std::ptrdiff_t bi = -1, bj = -1;
    for (std::ptrdiff_t i = ci - window_cells; i <= ci + window_cells; ++i) {
        if (i < 0 || i >= rows) continue;
        for (std::ptrdiff_t j = cj - window_cells; j <= cj + window_cells; ++j) {
            if (j < 0 || j >= cols) continue;
            const double p = std::norm(r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            if (p > best) {
                best = p;
                bi = i;
                bj = j;
            }
        }
    }
    if (bi < 0 || !(best > 0.0)) throw NotFoundError("irf_metrics: no peak in the search window");
    if (bi == ci - window_cells || bi == ci + window_cells || bj == cj - window_cells || bj == cj + window_cells) {
        if (bi > 0 && bi < rows - 1 && bj > 0 && bj < cols - 1)
            throw NotFoundError("irf_metrics: maximum lies on the search-window border, no local peak");
    }

    const auto n = static_cast<std::size_t>(opt.chip);
    const auto u = static_cast<std::size_t>(opt.upsample);
    const std::ptrdiff_t h = opt.chip / 2;
    std::vector<std::complex<double>> chip(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        const std::ptrdiff_t i = bi - h + static_cast<std::ptrdiff_t>(a);
        if (i < 0 || i >= rows) continue;
        for (std::size_t b = 0; b < n; ++b) {
            const std::ptrdiff_t j = bj - h + static_cast<std::ptrdiff_t>(b);
            if (j < 0 || j >= cols) continue;
            chip[a * n + b] = r(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    const auto big = detail::upsample_chip(std::move(chip), n, u);
    const std::size_t m = n * u;
    // Search the upsampled chip near its centre, within one original sample.
    std::size_t pi = 0, pj = 0;
    double pb = -1.0;
    const std::size_t c = (n / 2) * u;
    for (std::size_t a = c - u; a <= c + u; ++a)
        for (std::size_t b = c - u; b <= c + u; ++b) {
            const double p = std::norm(big[a * m + b]);
            if (p > pb) {
                pb = p;
                pi = a;
                pj = b;
            }
        }
    const double di = detail::parabolic_offset(std::norm(big[(pi - 1) * m + pj]), pb, std::norm(big[(pi + 1) * m + pj]));
    const double dj = detail::parabolic_offset(std::norm(big[pi * m + pj - 1]), pb, std::norm(big[pi * m + pj + 1]));

    std::vector<double> cut_az(m), cut_rg(m);
    for (std::size_t a = 0; a < m; ++a) cut_az[a] = std::abs(big[a * m + pj]);
    for (std::size_t b = 0; b < m; ++b) cut_rg[b] = std::abs(big[pi * m + b]);
    const auto az = detail::cut_metrics(cut_az, pi, opt.islr_widths);
    const auto rg = detail::cut_metrics(cut_rg, pj, opt.islr_widths);

    // The chip was scaled by the unitary transforms; restore image magnitude.
    const double gain = static_cast<double>(u);
    IrfReport rep;
    rep.peak_index = {static_cast<double>(bi - h) + (static_cast<double>(pi) + di) / static_cast<double>(u),
                      static_cast<double>(bj - h) + (static_cast<double>(pj) + dj) / static_cast<double>(u)};
    rep.peak_xy = {img.x_map(rep.peak_index[0]), img.y_map(rep.peak_index[1])};
    rep.width_az = az.width / static_cast<double>(u) * std::abs(img.x_map.scale);
    rep.width_rg = rg.width / static_cast<double>(u) * std::abs(img.y_map.scale);
    rep.pslr_az = az.pslr;
    rep.pslr_rg = rg.pslr;
    rep.islr_az = az.islr;
    rep.islr_rg = rg.islr;
    rep.peak_mag = std::sqrt(pb) * gain;
    return rep;
}

/// Azimuth image coordinate at which the classic path places a target with
/// along-track position x_t once its frequency is folded into (-PRF/2, PRF/2].
inline double predict_alias_position(double x_t, const AcquisitionGeometry& geom, const RadarParams& radar,
                                     const ScaledConstants& sc) {
    const double ks = position_frequency_rate(geom, radar.wavelength());
    const double ft = ks * x_t / geom.velocity;
    const double fa = ft - std::ceil(ft / radar.prf - 0.5) * radar.prf;
    return sc.wavelength * geom.aperture_radius / (2.0 * geom.velocity) * fa;
}

// ---------------------------------------------------------------------------
// Spectrograms

struct Spectrogram {
    std::vector<double> times;  ///< frame centre times (s)
    std::vector<double> freqs;  ///< centred frequency bins (Hz)
    std::vector<double> power;  ///< row-major times x freqs

    double at(std::size_t frame, std::size_t bin) const { return power[frame * freqs.size() + bin]; }
};

/// Hann-windowed short-time transform of a signal sampled on `time`.
inline Spectrogram spectrogram(std::span<const std::complex<double>> signal, const AxisMeta& time,
                               std::size_t win_len, std::size_t hop) {
    if (time.domain != Domain::time) throw PreconditionError("spectrogram: axis must be time");
    if (win_len < 4 || win_len > signal.size()) throw ValidationError("spectrogram: window length out of range");
    if (hop < 1) throw ValidationError("spectrogram: hop must be >= 1");
    Spectrogram s;
    const AxisMeta fa = fft::transformed_axis(time, win_len, fft::Direction::forward);
    for (std::size_t k = 0; k < win_len; ++k) s.freqs.push_back(fa.at(static_cast<double>(k)));
    std::vector<double> w(win_len);
    for (std::size_t k = 0; k < win_len; ++k)
        w[k] = 0.5 - 0.5 * std::cos(2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(win_len));
    fft::LineTransform t(win_len, fft::Direction::forward);
    std::vector<std::complex<double>> buf(win_len);
    for (std::size_t start = 0; start + win_len <= signal.size(); start += hop) {
        for (std::size_t k = 0; k < win_len; ++k) buf[k] = w[k] * signal[start + k];
        t.apply(buf);
        s.times.push_back(time.at(static_cast<double>(start) + 0.5 * static_cast<double>(win_len - 1)));
        for (const auto& v : buf) s.power.push_back(std::norm(v));
    }
    return s;
}

/// Incoherent sum of the spectrograms of columns [col_begin, col_end).
inline Spectrogram spectrogram(const ComplexRaster& r, std::size_t col_begin, std::size_t col_end,
                               std::size_t win_len, std::size_t hop) {
    if (r.axis0.domain != Domain::time) throw PreconditionError("spectrogram: axis0 must be azimuth time");
    if (!(col_begin < col_end && col_end <= r.cols())) throw ValidationError("spectrogram: invalid column range");
    Spectrogram total;
    std::vector<std::complex<double>> column(r.rows());
    for (std::size_t k = col_begin; k < col_end; ++k) {
        for (std::size_t i = 0; i < r.rows(); ++i) column[i] = r(i, k);
        Spectrogram s = spectrogram(column, r.axis0, win_len, hop);
        if (total.power.empty()) {
            total = std::move(s);
        } else {
            for (std::size_t q = 0; q < s.power.size(); ++q) total.power[q] += s.power[q];
        }
    }
    return total;
}

/// Frequency of the strongest bin in each frame.
inline std::vector<double> spectrogram_ridge(const Spectrogram& s) {
    std::vector<double> ridge;
    const std::size_t nf = s.freqs.size();
    for (std::size_t f = 0; f < s.times.size(); ++f) {
        const auto* row = s.power.data() + f * nf;
        ridge.push_back(s.freqs[static_cast<std::size_t>(std::max_element(row, row + nf) - row)]);
    }
    return ridge;
}

/// Power-weighted circular mean frequency of each frame, in (-span/2, span/2]
/// where span is the full frequency extent (the sampling rate).
inline std::vector<double> spectrogram_centroid(const Spectrogram& s) {
    const std::size_t nf = s.freqs.size();
    const double span = (s.freqs[1] - s.freqs[0]) * static_cast<double>(nf);
    std::vector<double> out;
    for (std::size_t f = 0; f < s.times.size(); ++f) {
        std::complex<double> acc{};
        for (std::size_t k = 0; k < nf; ++k) acc += s.at(f, k) * std::polar(1.0, 2.0 * kPi * s.freqs[k] / span);
        out.push_back(std::arg(acc) / (2.0 * kPi) * span);
    }
    return out;
}

/// Removes jumps larger than half of `period` from a sampled track.
inline std::vector<double> unwrap_track(std::vector<double> track, double period) {
    for (std::size_t k = 1; k < track.size(); ++k) {
        const double d = track[k] - track[k - 1];
        track[k] -= std::round(d / period) * period;
    }
    return track;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_line: need at least two matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double e = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) e += std::pow(y[k] - f.slope * x[k] - f.intercept, 2);
    f.rms = std::sqrt(e / n);
    return f;
}

// ---------------------------------------------------------------------------
// Phase and migration diagnostics

struct QuadraticFit {
    double a = 0.0;  ///< phase = a t^2 + b t + c (rad)
    double b = 0.0;
    double c = 0.0;
    double rms = 0.0;
};

/// Least-squares quadratic fit to the unwrapped phase of samples [begin, end).
inline QuadraticFit fit_quadratic_phase(std::span<const std::complex<double>> s, const AxisMeta& time,
                                        std::size_t begin, std::size_t end) {
    if (!(begin + 3 <= end && end <= s.size())) throw ValidationError("fit_quadratic_phase: need >= 3 samples");
    std::vector<double> t, ph;
    double prev = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        double p = std::arg(s[k]);
        if (!ph.empty()) p -= 2.0 * kPi * std::round((p - prev) / (2.0 * kPi));
        prev = p;
        ph.push_back(p);
        t.push_back(time.at(static_cast<double>(k)));
    }
    // Normal equations on centred, scaled time for conditioning.
    const double t0 = 0.5 * (t.front() + t.back());
    const double ts = std::max(1e-300, 0.5 * std::abs(t.back() - t.front()));
    double m[3][4] = {};
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double x = (t[k] - t0) / ts;
        const double basis[3] = {1.0, x, x * x};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
            m[i][3] += basis[i] * ph[k];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int i = col + 1; i < 3; ++i)
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
        for (int j = 0; j < 4; ++j) std::swap(m[col][j], m[piv][j]);
        for (int i = 0; i < 3; ++i) {
            if (i == col) continue;
            const double f = m[i][col] / m[col][col];
            for (int j = col; j < 4; ++j) m[i][j] -= f * m[col][j];
        }
    }
    const double p0 = m[0][3] / m[0][0], p1 = m[1][3] / m[1][1], p2 = m[2][3] / m[2][2];
    QuadraticFit q;
    q.a = p2 / (ts * ts);
    q.b = p1 / ts - 2.0 * p2 * t0 / (ts * ts);
    q.c = p0 - p1 * t0 / ts + p2 * t0 * t0 / (ts * ts);
    double e = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) e += std::pow(ph[k] - (q.a * t[k] * t[k] + q.b * t[k] + q.c), 2);
    q.rms = std::sqrt(e / static_cast<double>(t.size()));
    return q;
}

/// Range peak (fractional column index of a range-compressed raster) in each
/// of `looks` contiguous azimuth segments covering [t_centre - span/2, t_centre + span/2].
/// Peaks are searched within +/- search columns of `col_hint`.
inline std::vector<double> sublook_range_peaks(const ComplexRaster& rc, double t_centre, double span, int looks,
                                               double col_hint, int search) {
    require_domains(rc, Domain::time, Domain::time, "sublook_range_peaks");
    if (looks < 2) throw ValidationError("sublook_range_peaks: need at least two looks");
    std::vector<double> peaks;
    const auto hint = static_cast<std::ptrdiff_t>(std::lround(col_hint));
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(1, hint - search);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(rc.cols()) - 2, hint + search);
    if (lo > hi) throw ValidationError("sublook_range_peaks: column hint outside the raster");
    for (int l = 0; l < looks; ++l) {
        const double ta = t_centre - 0.5 * span + span * l / looks;
        const double tb = ta + span / looks;
        const auto ia = static_cast<std::ptrdiff_t>(std::max(0.0, std::ceil(rc.axis0.index_of(ta))));
        const auto ib = static_cast<std::ptrdiff_t>(
            std::min(static_cast<double>(rc.rows()) - 1.0, std::floor(rc.axis0.index_of(tb))));
        if (ia > ib) throw CoverageError("sublook_range_peaks: sub-look outside the azimuth span");
        std::vector<double> profile(rc.cols(), 0.0);
        for (std::ptrdiff_t i = ia; i <= ib; ++i)
            for (std::ptrdiff_t j = lo - 1; j <= hi + 1; ++j)
                profile[static_cast<std::size_t>(j)] += std::norm(rc(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        std::ptrdiff_t best = lo;
        for (std::ptrdiff_t j = lo; j <= hi; ++j)
            if (profile[static_cast<std::size_t>(j)] > profile[static_cast<std::size_t>(best)]) best = j;
        const auto b = static_cast<std::size_t>(best);
        peaks.push_back(static_cast<double>(best) + detail::parabolic_offset(profile[b - 1], profile[b], profile[b + 1]));
    }
    return peaks;
}

// ---------------------------------------------------------------------------
// Backprojection reference

struct GridSpec {
    double x0 = 0.0;  ///< along-track origin (m)
    double dx = 1.0;
    std::size_t nx = 2;
    double y0 = 0.0;  ///< orbital-plane y origin (m)
    double dy = 1.0;
    std::size_t ny = 2;
};

struct BackprojectionResult {
    FocusedImage image;
    std::size_t skipped = 0;  ///< grid points whose echo never falls inside the range window
};

/// Time-domain matched filter on a grid in the orbital-plane (x, y) with
/// z = +sqrt(R0^2 - x^2 - y^2). Sums every pulse; the beam pattern is not used.
inline BackprojectionResult backprojection_oracle(const ComplexRaster& raw, const GridSpec& grid,
                                                  const AcquisitionGeometry& geom, const RadarParams& radar,
                                                  const InterpKernel& kernel = {}) {
    require_domains(raw, Domain::time, Domain::time, "backprojection_oracle");
    if (grid.nx < 2 || grid.ny < 2 || grid.nx > 256 || grid.ny > 256)
        throw ValidationError("backprojection_oracle: grid must be between 2x2 and 256x256");
    if (!(grid.dx > 0.0) || !(grid.dy > 0.0)) throw ValidationError("backprojection_oracle: grid steps must be > 0");

    const SincInterpolator interp(kernel);
    const double R0 = geom.earth_radius;
    const double k = 4.0 * kPi * radar.carrier_frequency / kSpeedOfLight;
    const auto n_rg = static_cast<std::ptrdiff_t>(raw.cols());
    ComplexRaster out(grid.nx, grid.ny, {Domain::time, grid.x0, grid.dx, 0.0}, {Domain::time, grid.y0, grid.dy, 0.0},
                      "backprojection");
    std::vector<char> skipped(grid.nx * grid.ny, 0);
    std::vector<Vec3> radar_pos(raw.rows());
    for (std::size_t n = 0; n < raw.rows(); ++n)
        radar_pos[n] = radar_position_at_angle(orbit_angle(raw.axis0.at(static_cast<double>(n)), geom), geom);

    parallel_for(grid.nx * grid.ny, [&](std::size_t q) {
        const std::size_t ix = q / grid.ny, iy = q % grid.ny;
        const double x = grid.x0 + static_cast<double>(ix) * grid.dx;
        const double y = grid.y0 + static_cast<double>(iy) * grid.dy;
        const double z2 = R0 * R0 - x * x - y * y;
        if (z2 < 0.0) {
            skipped[q] = 1;
            return;
        }
        const Vec3 p{x, y, std::sqrt(z2)};
        std::complex<double> acc{};
        bool any = false;
        for (std::size_t n = 0; n < raw.rows(); ++n) {
            const double r = (radar_pos[n] - p).norm();
            const double pos = raw.axis1.index_of(2.0 * r / kSpeedOfLight);
            if (pos < 0.0 || pos > static_cast<double>(n_rg - 1)) continue;
            any = true;
            const auto line = raw.row(n);
            const std::complex<double> v =
                interp.at(pos, [&](std::ptrdiff_t j) { return line[static_cast<std::size_t>(j)]; }, n_rg, Boundary::zero);
            acc += v * std::polar(1.0, k * r);
        }
        if (!any) skipped[q] = 1;
        out(ix, iy) = acc;
    });

    BackprojectionResult res;
    res.skipped = static_cast<std::size_t>(std::count(skipped.begin(), skipped.end(), 1));
    res.image.raster = std::move(out);
    res.image.x_map = {grid.x0, grid.dx};
    res.image.y_map = {grid.y0, grid.dy};
    res.image.algo = Algorithm::backprojection;
    res.image.mode = geom.mode;
    return res;
}

struct PeakEstimate {
    std::array<double, 2> xy{};     ///< image coordinates (m)
    std::array<double, 2> index{};  ///< fractional (axis0, axis1) index
    double magnitude = 0.0;
};

/// Strongest sample within +/- half_rows x half_cols samples of approx_xy,
/// refined by separable parabolic fits on |.|^2. Unlike irf_metrics this needs
/// no compact mainlobe, so it also locates defocused responses.
inline PeakEstimate local_peak(const FocusedImage& img, std::array<double, 2> approx_xy, int half_rows,
                               int half_cols) {
    const auto& r = img.raster;
    const auto ci = static_cast<std::ptrdiff_t>(std::lround(img.x_map.inverse(approx_xy[0])));
    const auto cj = static_cast<std::ptrdiff_t>(std::lround(img.y_map.inverse(approx_xy[1])));
    const auto rows = static_cast<std::ptrdiff_t>(r.rows());
    const auto cols = static_cast<std::ptrdiff_t>(r.cols());
    double best = 0.0;
    std::ptrdiff_t bi = -1, bj = -1;
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, ci - half_rows); i <= std::min(rows - 1, ci + half_rows); ++i)
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, cj - half_cols); j <= std::min(cols - 1, cj + half_cols); ++j) {
            const double p = std::norm(r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            if (p > best) {
                best = p;
                bi = i;
                bj = j;
            }
        }
    if (bi < 0) throw NotFoundError("local_peak: no energy in the search window");
    const auto ui = static_cast<std::size_t>(bi), uj = static_cast<std::size_t>(bj);
    double fi = static_cast<double>(bi), fj = static_cast<double>(bj);
    if (bi > 0 && bi + 1 < rows) fi += detail::parabolic_offset(std::norm(r(ui - 1, uj)), best, std::norm(r(ui + 1, uj)));
    if (bj > 0 && bj + 1 < cols) fj += detail::parabolic_offset(std::norm(r(ui, uj - 1)), best, std::norm(r(ui, uj + 1)));
    PeakEstimate pe;
    pe.index = {fi, fj};
    pe.xy = {img.x_map(fi), img.y_map(fj)};
    pe.magnitude = std::sqrt(best);
    return pe;
}

/// Centre of a possibly defocused response: the azimuth profile (power summed
/// over +/- band_cols range samples around the strongest sample) is reduced to
/// the midpoint of its outermost half-power points. Range uses the strongest
/// sample's refined position.
inline PeakEstimate response_centre(const FocusedImage& img, std::array<double, 2> approx_xy, int half_rows,
                                    int half_cols, int band_cols = 3) {
    PeakEstimate pk = local_peak(img, approx_xy, half_rows, half_cols);
    const auto& r = img.raster;
    const auto rows = static_cast<std::ptrdiff_t>(r.rows());
    const auto cols = static_cast<std::ptrdiff_t>(r.cols());
    const auto ci = static_cast<std::ptrdiff_t>(std::lround(img.x_map.inverse(approx_xy[0])));
    const auto pj = static_cast<std::ptrdiff_t>(std::lround(pk.index[1]));
    const std::ptrdiff_t i0 = std::max<std::ptrdiff_t>(0, ci - half_rows);
    const std::ptrdiff_t i1 = std::min(rows - 1, ci + half_rows);
    std::vector<double> prof(static_cast<std::size_t>(i1 - i0 + 1), 0.0);
    for (std::ptrdiff_t i = i0; i <= i1; ++i)
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, pj - band_cols); j <= std::min(cols - 1, pj + band_cols); ++j)
            prof[static_cast<std::size_t>(i - i0)] += std::norm(r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    const double top = *std::max_element(prof.begin(), prof.end());
    const double half = 0.5 * top;
    std::size_t a = 0, b = prof.size() - 1;
    while (prof[a] < half) ++a;
    while (prof[b] < half) --b;
    // Linear interpolation of the two outer crossings.
    const double lo = a > 0 ? static_cast<double>(a) - (prof[a] - half) / (prof[a] - prof[a - 1]) : 0.0;
    const double hi = b + 1 < prof.size() ? static_cast<double>(b) + (prof[b] - half) / (prof[b] - prof[b + 1])
                                          : static_cast<double>(b);
    pk.index[0] = static_cast<double>(i0) + 0.5 * (lo + hi);
    pk.xy[0] = img.x_map(pk.index[0]);
    return pk;
}

/// Fractional-index peak of an image refined by separable parabolic fits on |.|^2.
inline std::array<double, 2> refined_peak(const FocusedImage& img) {
    const auto& r = img.raster;
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (std::norm(r(i, j)) > best) {
                best = std::norm(r(i, j));
                bi = i;
                bj = j;
            }
    if (!(best > 0.0)) throw NotFoundError("refined_peak: image is zero");
    double fi = static_cast<double>(bi), fj = static_cast<double>(bj);
    if (bi > 0 && bi + 1 < r.rows())
        fi += detail::parabolic_offset(std::norm(r(bi - 1, bj)), best, std::norm(r(bi + 1, bj)));
    if (bj > 0 && bj + 1 < r.cols())
        fj += detail::parabolic_offset(std::norm(r(bi, bj - 1)), best, std::norm(r(bi, bj + 1)));
    return {img.x_map(fi), img.y_map(fj)};
}

}  // namespace sga
