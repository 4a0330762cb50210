// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../support.hpp"

using namespace sga;
using cd = std::complex<double>;

namespace {

// Tolerances.
constexpr double kPlacementFraction = 0.25;  // of the resolution
constexpr double kTopsRatioTol = 0.01;       // relative
constexpr double kWidthTol = 0.10;           // relative
constexpr double kPslrTarget = -13.26;       // dB
constexpr double kPslrTol = 1.0;             // dB
constexpr double kAliasCells = 2.0;          // image cells
constexpr double kClassicMigrationMin = 1.0; // range cells
constexpr double kExtendedMigrationMax = 0.5;
constexpr double kCommutationDb = -50.0;
constexpr double kQuadraticTol = 0.01;  // relative
constexpr double kOracleCells = 1.0;
constexpr double kEnergyTol = 1e-6;  // relative
constexpr double kInterpToneDb = -60.0;
constexpr double kCentroidRateTol = 0.05;  // relative

int failures = 0;

void report(int n, const char* name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d %s: %s\n", pass ? "PASS" : "FAIL", n, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void run_criterion(int n, const char* name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(n, name, false, std::string("exception: ") + e.what());
    }
}

struct Scene {
    SceneConfig cfg;
    std::vector<PointTarget> targets;
    ComplexRaster raw;
    FocusResult ext;
    double seconds = 0.0;  // extended focus wall time
    double kt = 0.0;
    double rho_a = 0.0;
    double rho_r = 0.0;
};

FocusResult timed_focus(const ComplexRaster& raw, const SceneConfig& c, Algorithm algo, bool keep, double* seconds) {
    FocusOptions opt;
    opt.algo = algo;
    opt.kernel = c.kernel;
    opt.azimuth_oversample = c.azimuth_oversample;
    opt.keep_intermediates = keep;
    const auto t0 = std::chrono::steady_clock::now();
    FocusResult r = focus(raw, c.radar, c.geom, opt);
    if (seconds) *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Scene load_scene(const std::string& name) {
    Scene s;
    s.cfg = load_config(testing::config_path(name));
    s.targets = s.cfg.point_targets();
    s.raw = simulate_echo(s.targets, s.cfg.radar, s.cfg.geom, s.cfg.window_start());
    s.ext = timed_focus(s.raw, s.cfg, Algorithm::extended, true, &s.seconds);
    s.kt = doppler_centroid_rate(s.cfg.geom, s.cfg.radar.wavelength());
    s.rho_a = 0.886 * s.cfg.geom.velocity / (std::abs(s.kt) * s.cfg.geom.dwell_time);
    s.rho_r = 0.886 * kSpeedOfLight / (2.0 * s.ext.scaled.bandwidth);
    return s;
}

bool bitwise_equal(const ComplexRaster& a, const ComplexRaster& b) {
    return a.size() == b.size() && std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(cd)) == 0;
}

double rel_energy_change(const ComplexRaster& before, const ComplexRaster& after) {
    return std::abs(energy(after) - energy(before)) / energy(before);
}

/// Range-compressed view of a decoupled (azimuth time, range frequency) raster.
ComplexRaster range_compressed(ComplexRaster dec) {
    fft::transform_rows(dec, fft::Direction::inverse);
    return dec;
}

double migration_cells(const ComplexRaster& rc, const PointTarget& t, const SceneConfig& c) {
    const double tc = support_centre(t, c.geom);
    const double hint = rc.axis1.index_of(2.0 * t.position.y / kSpeedOfLight);
    const auto p = sublook_range_peaks(rc, tc, 0.8 * c.geom.dwell_time, 4, hint, 24);
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    return *hi - *lo;
}

/// Smooth band-limited column under a Hann-power taper.
std::vector<cd> band_limited(std::size_t n, double dt, double fmax, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uf(-fmax, fmax), up(0.0, 2.0 * kPi);
    std::vector<std::pair<double, double>> tones;
    for (int k = 0; k < 6; ++k) tones.emplace_back(uf(rng), up(rng));
    std::vector<cd> x(n);
    const double half = 0.5 * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - half) * dt;
        const double s = (static_cast<double>(i) - half) / (0.35 * static_cast<double>(n));
        const double taper = std::abs(s) < 1.0 ? std::pow(std::cos(0.5 * kPi * s), 4) : 0.0;
        cd acc{};
        for (auto [f, p] : tones) acc += std::polar(1.0, 2.0 * kPi * f * t + p);
        x[i] = taper * acc;
    }
    return x;
}

/// Centroid rate of a dense along-track line of targets, measured on the
/// azimuth spectrogram after range frequency scaling and the tan regrid.
double measured_centroid_rate(SceneConfig c, double x_max, double spacing) {
    std::vector<PointTarget> line;
    for (double x = -x_max; x <= x_max + 1e-9; x += spacing) line.push_back({target_on_sphere(x, 0.0, c.geom)});
    const auto raw = simulate_echo(line, c.radar, c.geom, c.window_start());
    const auto sc = ScaledConstants::from(c.geom, c.radar);
    auto spec = range_preprocess(raw, c.radar, c.geom, c.kernel);
    spec = range_freq_scale(spec, c.geom, sc, c.kernel, occupied_half_band(spec.axis1, c.geom, c.radar));
    spec = tan_theta_regrid(spec, c.geom, c.kernel);
    const auto dc = static_cast<std::size_t>(std::lround(spec.axis1.index_of(0.0)));
    const Spectrogram s = spectrogram(spec, dc - 8, dc + 8, 64, 16);
    const auto track = unwrap_track(spectrogram_centroid(s), c.radar.prf);
    // Frames whose whole beam footprint lies on the target line.
    const double lit = support_centre(line.back(), c.geom) - 0.5 * support_duration(c.geom);
    const double t_max = std::min(0.4 * c.geom.acquisition_time, lit);
    std::vector<double> t, f;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        if (std::abs(s.times[k]) > t_max) continue;
        t.push_back(s.times[k]);
        f.push_back(track[k]);
    }
    return fit_line(t, f).slope;
}

}  // namespace

int main() {
    set_thread_count(1);
    std::printf("building stripmap and TOPS scenes...\n");
    std::fflush(stdout);
    Scene strip = load_scene("desk_stripmap.json");
    Scene tops = load_scene("ref_tops.json");
    std::printf("extended focus: stripmap %zux%zu in %.1f s, TOPS %zux%zu in %.1f s\n", strip.raw.rows(),
                strip.raw.cols(), strip.seconds, tops.raw.rows(), tops.raw.cols(), tops.seconds);

    std::vector<IrfReport> strip_irf(strip.targets.size()), tops_irf(tops.targets.size());
    for (std::size_t k = 0; k < strip.targets.size(); ++k) {
        const auto& p = strip.targets[k].position;
        strip_irf[k] = irf_metrics(strip.ext.image, {p.x, p.y}, 8);
    }
    const double ratio = tops.cfg.geom.rotation_centre_range /
                         (tops.cfg.geom.scene_range + tops.cfg.geom.rotation_centre_range);
    for (std::size_t k = 0; k < tops.targets.size(); ++k) {
        const auto& p = tops.targets[k].position;
        tops_irf[k] = irf_metrics(tops.ext.image, {ratio * p.x, p.y}, 8);
    }
    std::size_t centre = 0;
    for (std::size_t k = 0; k < strip.targets.size(); ++k)
        if (strip.cfg.targets[k].along_track == 0.0 && strip.cfg.targets[k].ground_offset == 0.0) centre = k;

    run_criterion(1, "geometric placement", [&] {
        double worst_a = 0.0, worst_r = 0.0;
        for (std::size_t k = 0; k < strip.targets.size(); ++k) {
            const auto& p = strip.targets[k].position;
            worst_a = std::max(worst_a, std::abs(strip.ext.image.target_x(strip_irf[k].peak_xy[0]) - p.x) / strip.rho_a);
            worst_r = std::max(worst_r, std::abs(strip_irf[k].peak_xy[1] - p.y) / strip.rho_r);
        }
        report(1, "geometric placement", worst_a < kPlacementFraction && worst_r < kPlacementFraction,
               fmt("%zu targets, worst error %.4f rho_a (rho_a %.3f m), %.4f rho_r (rho_r %.3f m), limit %.2f",
                   strip.targets.size(), worst_a, strip.rho_a, worst_r, strip.rho_r, kPlacementFraction));
    });

    run_criterion(2, "TOPS scaling", [&] {
        double worst = 0.0;
        int n = 0;
        for (std::size_t k = 0; k < tops.targets.size(); ++k) {
            const double x = tops.targets[k].position.x;
            if (std::abs(x) < 1.0) continue;
            worst = std::max(worst, std::abs(tops_irf[k].peak_xy[0] / x / ratio - 1.0));
            ++n;
        }
        report(2, "TOPS scaling", n > 0 && worst < kTopsRatioTol,
               fmt("%d off-centre targets, expected ratio %.6f, worst relative error %.4f, limit %.2f", n, ratio,
                   worst, kTopsRatioTol));
    });

    run_criterion(3, "resolution", [&] {
        const auto& irf = strip_irf[centre];
        const double ea = irf.width_az / strip.rho_a - 1.0;
        const double er = irf.width_rg / strip.rho_r - 1.0;
        report(3, "resolution", std::abs(ea) < kWidthTol && std::abs(er) < kWidthTol,
               fmt("azimuth %.3f m vs %.3f m (%+.2f%%), range %.4f m vs %.4f m (%+.2f%%), limit %.0f%%", irf.width_az,
                   strip.rho_a, 100.0 * ea, irf.width_rg, strip.rho_r, 100.0 * er, 100.0 * kWidthTol));
    });

    run_criterion(4, "sidelobes", [&] {
        const auto& irf = strip_irf[centre];
        const bool ok = std::abs(irf.pslr_az - kPslrTarget) < kPslrTol && std::abs(irf.pslr_rg - kPslrTarget) < kPslrTol;
        report(4, "sidelobes", ok,
               fmt("PSLR azimuth %.2f dB, range %.2f dB, target %.2f +/- %.1f dB", irf.pslr_az, irf.pslr_rg,
                   kPslrTarget, kPslrTol));
    });

    run_criterion(5, "aliasing reproduction", [&] {
        const FocusResult cls = timed_focus(strip.raw, strip.cfg, Algorithm::classic, true, nullptr);
        const auto rc_cls = range_compressed(cls.decoupled);
        const auto rc_ext = range_compressed(strip.ext.decoupled);
        const double prf = strip.cfg.radar.prf;
        const double ks = position_frequency_rate(strip.cfg.geom, strip.cfg.radar.wavelength());
        const double cell = std::abs(cls.image.x_map.scale);
        bool ok = true;
        int n = 0;
        std::string detail;
        for (std::size_t k = 0; k < strip.targets.size(); ++k) {
            const auto& p = strip.targets[k].position;
            if (std::abs(ks * p.x / strip.cfg.geom.velocity) <= 0.5 * prf || strip.cfg.targets[k].ground_offset != 0.0)
                continue;
            ++n;
            const double pred = predict_alias_position(p.x, strip.cfg.geom, strip.cfg.radar, cls.scaled);
            const auto pc = response_centre(cls.image, {pred, p.y}, 150, 8);
            const double alias_err = std::abs(pc.xy[0] - pred) / cell;
            const double mig_cls = migration_cells(rc_cls, strip.targets[k], strip.cfg);
            const double mig_ext = migration_cells(rc_ext, strip.targets[k], strip.cfg);
            const double ext_err = std::abs(strip.ext.image.target_x(strip_irf[k].peak_xy[0]) - p.x) / strip.rho_a;
            ok = ok && alias_err < kAliasCells && mig_cls > kClassicMigrationMin && mig_ext < kExtendedMigrationMax &&
                 ext_err < kPlacementFraction;
            detail += fmt("[x %.0f m: classic at %.2f m vs predicted %.2f m (%.2f cells), migration classic %.2f / "
                          "extended %.2f cells, extended error %.4f rho_a] ",
                          p.x, pc.xy[0], pred, alias_err, mig_cls, mig_ext, ext_err);
        }
        report(5, "aliasing reproduction", ok && n > 0,
               fmt("%d aliased targets ", n) + detail +
                   fmt("limits: %.0f cells, classic > %.1f, extended < %.1f, %.2f rho_a", kAliasCells,
                       kClassicMigrationMin, kExtendedMigrationMax, kPlacementFraction));
    });

    run_criterion(6, "decoupling", [&] {
        // Commutation of centroid removal with the keystone on band-limited columns.
        ScaledConstants sc;
        sc.carrier = -6e10;
        sc.bandwidth = 0.04 * 6e10;
        const std::size_t n = 2048, cols = 9;
        const double prf = 1000.0;
        ComplexRaster s(n, cols, {Domain::time, -1.024, 1.0 / prf, 0.0},
                        {Domain::frequency, -0.5 * sc.bandwidth, sc.bandwidth / (cols - 1), 0.0});
        for (std::size_t k = 0; k < cols; ++k) {
            const auto col = band_limited(n, 1.0 / prf, 0.2 * prf, 100 + static_cast<unsigned>(k));
            for (std::size_t i = 0; i < n; ++i) s(i, k) = col[i];
        }
        const double kt_syn = 0.1 * prf / 1.024;
        const auto lhs = keystone_resample(centroid_removal(s, kt_syn, sc), sc);
        auto rhs = keystone_resample(s, sc);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = rhs.axis0.at(static_cast<double>(i));
            for (std::size_t k = 0; k < cols; ++k) rhs(i, k) *= std::polar(1.0, -kPi * kt_syn * t * t);
        }
        double e = 0.0, p = 0.0;
        for (std::size_t q = 0; q < lhs.size(); ++q) {
            e += std::norm(lhs.data()[q] - rhs.data()[q]);
            p += std::norm(rhs.data()[q]);
        }
        const double comm_db = 10.0 * std::log10(e / p);

        // Residual chirp of a single decoupled stripmap target.
        const auto& c = strip.cfg;
        const PointTarget t{target_on_sphere(0.0, 0.0, c.geom)};
        const auto raw = simulate_echo(std::vector<PointTarget>{t}, c.radar, c.geom, c.window_start());
        const auto dec = timed_focus(raw, c, Algorithm::extended, true, nullptr).decoupled;
        const double tc = support_centre(t, c.geom);
        const double half = 0.4 * c.geom.dwell_time;
        double worst = 0.0;
        for (double f : {-0.3, 0.0, 0.3}) {
            const auto k = static_cast<std::size_t>(std::lround(dec.axis1.index_of(f * strip.ext.scaled.bandwidth)));
            std::vector<cd> col(dec.rows());
            for (std::size_t i = 0; i < dec.rows(); ++i) col[i] = dec(i, k);
            const auto b = static_cast<std::size_t>(std::ceil(dec.axis0.index_of(tc - half)));
            const auto en = static_cast<std::size_t>(std::floor(dec.axis0.index_of(tc + half)));
            const QuadraticFit q = fit_quadratic_phase(col, dec.axis0, b, en);
            worst = std::max(worst, std::abs(q.a / (-kPi * strip.kt) - 1.0));
        }
        report(6, "decoupling", comm_db < kCommutationDb && worst < kQuadraticTol,
               fmt("commutation error %.1f dB (limit %.0f), residual quadratic vs -pi k_t worst %.4f%% (limit %.0f%%)",
                   comm_db, kCommutationDb, 100.0 * worst, 100.0 * kQuadraticTol));
    });

    run_criterion(7, "oracle equivalence", [&] {
        double worst = 0.0;
        int n = 0;
        auto check = [&](const Scene& s, const std::vector<IrfReport>& irf) {
            const auto& img = s.ext.image;
            const double cx = std::abs(img.x_map.scale) / img.x_scale;
            const double cy = std::abs(img.y_map.scale);
            for (std::size_t k = 0; k < s.targets.size(); ++k) {
                const auto& p = s.targets[k].position;
                const GridSpec grid{p.x - 4.0 * cx, 0.25 * cx, 33, p.y - 4.0 * cy, 0.25 * cy, 33};
                const auto bp = backprojection_oracle(s.raw, grid, s.cfg.geom, s.cfg.radar, s.cfg.kernel);
                const auto pk = local_peak(bp.image, {p.x, p.y}, 16, 16);
                const double ex = std::abs(pk.xy[0] - img.target_x(irf[k].peak_xy[0])) / cx;
                const double ey = std::abs(pk.xy[1] - irf[k].peak_xy[1]) / cy;
                worst = std::max({worst, ex, ey});
                ++n;
            }
        };
        check(strip, strip_irf);
        check(tops, tops_irf);
        report(7, "oracle equivalence", worst < kOracleCells,
               fmt("%d targets, worst backprojection vs SGA offset %.3f cells (limit %.0f)", n, worst, kOracleCells));
    });

    run_criterion(8, "numerical hygiene", [&] {
        const auto& c = strip.cfg;
        const auto sc = strip.ext.scaled;
        const RangeGrid grid = plan_range_grid(strip.raw.axis1, strip.raw.cols(), c.geom, c.radar);
        const auto rs = range_resample(strip.raw, c.geom, c.radar, grid, c.kernel);
        const auto pc = phase_compensate(rs, c.geom, c.radar, sc);
        const auto spec = range_fft(pc);
        auto az = spec;
        fft::transform_cols(az, fft::Direction::forward);
        const auto& dec = strip.ext.decoupled;
        const double e_energy = std::max({rel_energy_change(rs, pc), rel_energy_change(pc, spec),
                                          rel_energy_change(spec, az),
                                          rel_energy_change(dec, matched_filter_compress(dec, strip.kt, c.geom).raster),
                                          rel_energy_change(dec, spectral_compress(dec).raster)});

        const SincInterpolator interp(c.kernel);
        const std::size_t n = 512;
        const double f = 0.2;
        std::vector<cd> x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = std::polar(1.0, 2.0 * kPi * f * static_cast<double>(k));
        auto get = [&](std::ptrdiff_t i) { return x[static_cast<std::size_t>(i)]; };
        double tone = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const double pos = 50.0 + 400.0 * k / 2000.0 + 0.37 * (k % 3);
            tone = std::max(tone, std::abs(interp.at(pos, get, n, Boundary::zero) - std::polar(1.0, 2.0 * kPi * f * pos)));
        }
        const double tone_db = 20.0 * std::log10(tone);

        bool same = true;
        for (int threads : {2, 4}) {
            set_thread_count(threads);
            const auto raw = simulate_echo(strip.targets, c.radar, c.geom, c.window_start());
            same = same && bitwise_equal(raw, strip.raw) &&
                   bitwise_equal(timed_focus(raw, c, Algorithm::extended, false, nullptr).image.raster,
                                 strip.ext.image.raster);
        }
        set_thread_count(1);
        report(8, "numerical hygiene", e_energy < kEnergyTol && tone_db < kInterpToneDb && same,
               fmt("worst unitary-stage energy change %.2e (limit %.0e), interpolator tone error %.1f dB (limit %.0f), "
                   "threads 1/2/4 bitwise %s",
                   e_energy, kEnergyTol, tone_db, kInterpToneDb, same ? "identical" : "DIFFERENT"));
    });

    run_criterion(9, "spectrogram centroid rate", [&] {
        const double ks = measured_centroid_rate(strip.cfg, 13000.0, 100.0);
        const double kt_tops = measured_centroid_rate(tops.cfg, 11000.0, 100.0);
        const double es = ks / strip.kt - 1.0;
        const double et = kt_tops / tops.kt - 1.0;
        report(9, "spectrogram centroid rate", std::abs(es) < kCentroidRateTol && std::abs(et) < kCentroidRateTol,
               fmt("stripmap %.1f Hz/s vs %.1f (%+.2f%%), TOPS %.1f Hz/s vs %.1f (%+.2f%%), limit %.0f%%", ks,
                   strip.kt, 100.0 * es, kt_tops, tops.kt, 100.0 * et, 100.0 * kCentroidRateTol));
    });

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
