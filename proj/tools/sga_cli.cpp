// Command-line driver: simulate, focus, analyze, quicklook, compare.
//
// Exit codes: 0 success, 2 validation or file-format error, 3 numerical or
// coverage error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sga/sga.hpp"
#include "sga/quicklook.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int cmd_simulate(const std::string& config_path, const std::string& out) {
    const sga::SceneConfig cfg = sga::load_config(config_path);
    const auto targets = cfg.point_targets();
    const sga::ComplexRaster raw = sga::simulate_echo(targets, cfg.radar, cfg.geom, cfg.window_start());
    sga::Json extra;
    extra["scene"] = sga::config_to_json(cfg);
    sga::write_sgar(out, raw, extra);
    return 0;
}

int cmd_focus(const std::string& in, const std::string& algo_name, const std::string& out, int oversample) {
    const sga::SgarFile file = sga::read_sgar(in);
    const sga::SceneConfig cfg = file.scene();
    sga::FocusOptions opt;
    opt.algo = sga::algorithm_from_string(algo_name);
    if (opt.algo == sga::Algorithm::backprojection)
        throw sga::ValidationError("--algo must be classic or extended");
    opt.kernel = cfg.kernel;
    opt.azimuth_oversample = oversample > 0 ? oversample : cfg.azimuth_oversample;
    const auto raw = sga::convert<std::complex<double>>(file.raster);
    const sga::FocusResult res = sga::focus(raw, cfg.radar, cfg.geom, opt);
    for (const auto& n : res.notices) std::cerr << "notice: " << n << "\n";
    sga::Json extra;
    extra["scene"] = sga::config_to_json(cfg);
    extra["image"] = sga::image_to_json(res.image);
    extra["notices"] = res.notices;
    sga::write_sgar(out, res.image.raster, extra);
    return 0;
}

int cmd_analyze(const std::string& in, const std::string& config_path, const std::string& report_path) {
    const sga::SgarFile file = sga::read_sgar(in);
    const sga::FocusedImage img = file.image();
    const sga::SceneConfig cfg = sga::load_config(config_path);
    const auto sc = sga::ScaledConstants::from(cfg.geom, cfg.radar);

    sga::Json rep;
    rep["image"] = {{"algo", std::string(sga::to_string(img.algo))}, {"mode", std::string(sga::to_string(img.mode))}};
    sga::Json theory;
    theory["range_resolution"] = 0.886 * sga::kSpeedOfLight / (2.0 * sc.bandwidth);
    if (cfg.geom.mode != sga::Mode::spotlight) {
        const double kt = sga::doppler_centroid_rate(cfg.geom, cfg.radar.wavelength());
        theory["centroid_rate"] = kt;
        theory["azimuth_resolution"] = 0.886 * cfg.geom.velocity / (kt * cfg.geom.dwell_time);
    }
    rep["theory"] = theory;

    bool missing = false;
    sga::Json list = sga::Json::array();
    const auto targets = cfg.point_targets();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto& p = targets[k].position;
        double x_expect = p.x * img.x_scale;
        if (img.algo == sga::Algorithm::classic && cfg.geom.mode != sga::Mode::spotlight)
            x_expect = sga::predict_alias_position(p.x, cfg.geom, cfg.radar, sc);
        sga::Json t;
        t["index"] = k;
        t["truth"] = sga::Json::array({p.x, p.y});
        t["expected_image_xy"] = sga::Json::array({x_expect, p.y});
        try {
            const sga::IrfReport irf = sga::irf_metrics(img, {x_expect, p.y}, 8);
            t["status"] = "focused";
            t["irf"] = sga::irf_to_json(irf);
            t["x_estimate"] = img.target_x(irf.peak_xy[0]);
        } catch (const sga::NotFoundError& e) {
            try {
                const auto pc = sga::response_centre(img, {x_expect, p.y}, 200, 200);
                t["status"] = "defocused";
                t["response_centre"] = sga::Json::array({pc.xy[0], pc.xy[1]});
                t["x_estimate"] = img.target_x(pc.xy[0]);
            } catch (const sga::NotFoundError&) {
                t["status"] = "not_found";
                t["error"] = e.what();
                missing = true;
            }
        }
        list.push_back(t);
    }
    rep["targets"] = list;
    sga::write_text(report_path, rep.dump(2) + "\n");
    if (missing) {
        std::cerr << "error: at least one target has no peak in the image\n";
        return kExitNumerical;
    }
    return 0;
}

int cmd_quicklook(const std::string& in, const std::string& png) {
    const sga::SgarFile file = sga::read_sgar(in);
    sga::write_png(png, sga::render_quicklook(file.raster));
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b) {
    const auto fa = sga::read_sgar(a);
    const auto fb = sga::read_sgar(b);
    std::cout << sga::compare_to_json(sga::compare_rasters(fa.raster, fb.raster)).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical-geometry SAR simulation and focusing"};
    app.require_subcommand(1);
    int threads = -1;
    app.add_option("--threads", threads, "worker threads (0 = auto; default from SGA_THREADS)");

    std::string config, out, in, algo = "extended", report, png, a, b;
    int oversample = 0;
    auto* sim = app.add_subcommand("simulate", "simulate point-target echoes");
    sim->add_option("--config", config, "scene configuration (JSON)")->required();
    sim->add_option("--out", out, "output raster (SGAR)")->required();

    auto* foc = app.add_subcommand("focus", "focus a raw raster");
    foc->add_option("--in", in, "raw raster (SGAR)")->required();
    foc->add_option("--algo", algo, "classic or extended")->check(CLI::IsMember({"classic", "extended"}));
    foc->add_option("--out", out, "output image (SGAR)")->required();
    foc->add_option("--oversample", oversample, "azimuth oversampling factor (default from scene)");

    auto* ana = app.add_subcommand("analyze", "impulse-response report for each configured target");
    ana->add_option("--in", in, "focused image (SGAR)")->required();
    ana->add_option("--config", config, "scene configuration (JSON)")->required();
    ana->add_option("--report", report, "report path (JSON)")->required();

    auto* ql = app.add_subcommand("quicklook", "render a dB quicklook PNG");
    ql->add_option("--in", in, "raster (SGAR)")->required();
    ql->add_option("--png", png, "output PNG")->required();

    auto* cmp = app.add_subcommand("compare", "difference statistics of two rasters");
    cmp->add_option("--a", a, "first raster")->required();
    cmp->add_option("--b", b, "second raster")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (threads >= 0) sga::set_thread_count(threads);
        if (*sim) return cmd_simulate(config, out);
        if (*foc) return cmd_focus(in, algo, out, oversample);
        if (*ana) return cmd_analyze(in, config, report);
        if (*ql) return cmd_quicklook(in, png);
        if (*cmp) return cmd_compare(a, b);
    } catch (const sga::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const sga::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const sga::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kExitNumerical;
    }
    return kExitValidation;
}
