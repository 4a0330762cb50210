#pragma once

// Scene configuration (JSON), SGAR v1 raster files and analysis reports.
//
// SGAR v1 is a pair of files: `<name>.sgar` holds interleaved little-endian
// IEEE-754 binary32 (re, im) pairs, row-major with azimuth as the slow axis,
// and `<name>.sgar.json` holds the metadata.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sga/analysis.hpp"
#include "sga/azcomp.hpp"
#include "sga/echosim.hpp"
#include "sga/error.hpp"
#include "sga/geometry.hpp"
#include "sga/interp.hpp"
#include "sga/raster.hpp"

namespace sga {

using Json = nlohmann::ordered_json;

/// Target given by along-track position and ground offset from the scene centre.
struct TargetSpec {
    double along_track = 0.0;
    double ground_offset = 0.0;
    std::complex<double> amplitude{1.0, 0.0};
};

struct SceneConfig {
    RadarParams radar;
    AcquisitionGeometry geom;
    std::vector<TargetSpec> targets;
    std::optional<double> range_window_start;  ///< fast-time window start (s); centred on r_ref when absent
    int azimuth_oversample = 1;
    InterpKernel kernel;
    std::int64_t seed = 0;  ///< reserved; the simulator is deterministic

    std::vector<PointTarget> point_targets() const {
        std::vector<PointTarget> out;
        for (const auto& t : targets) out.push_back({target_on_sphere(t.along_track, t.ground_offset, geom), t.amplitude});
        return out;
    }

    double window_start() const {
        return range_window_start ? *range_window_start : default_range_window_start(radar, geom);
    }

    void validate() const {
        geom.validate();
        radar.validate(geom);
        kernel.validate();
        if (azimuth_oversample < 1 || azimuth_oversample > 8)
            throw ValidationError("grids.azimuth_oversample: must be in [1, 8]");
        for (std::size_t k = 0; k < targets.size(); ++k) {
            if (std::abs(targets[k].along_track) >= geom.earth_radius)
                throw ValidationError("targets[" + std::to_string(k) + "].along_track: exceeds the Earth radius");
        }
    }
};

namespace detail {

class FieldReader {
public:
    FieldReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ValidationError(path_ + ": expected an object");
    }

    double number(const char* key) const {
        const Json& v = require(key);
        if (!v.is_number()) throw ValidationError(field(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ValidationError(field(key) + ": must be finite");
        return d;
    }

    double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const char* key) const {
        const Json& v = require(key);
        if (!v.is_number_integer()) throw ValidationError(field(key) + ": expected an integer");
        return v.get<std::int64_t>();
    }

    std::int64_t integer_or(const char* key, std::int64_t fallback) const { return has(key) ? integer(key) : fallback; }

    std::string string(const char* key) const {
        const Json& v = require(key);
        if (!v.is_string()) throw ValidationError(field(key) + ": expected a string");
        return v.get<std::string>();
    }

    bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }
    const Json& require(const char* key) const {
        if (!obj_.contains(key)) throw ValidationError(field(key) + ": missing");
        return obj_.at(key);
    }

    void reject_unknown(std::initializer_list<const char*> known) const {
        for (const auto& [k, v] : obj_.items()) {
            bool ok = false;
            for (const char* n : known) ok = ok || k == n;
            if (!ok) throw ValidationError(field(k.c_str()) + ": unknown field");
        }
    }

    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    const Json& obj_;
    std::string path_;
};

inline Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

inline std::complex<double> complex_from_json(const Json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ValidationError(path + ": expected a number or [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace detail

inline Json radar_to_json(const RadarParams& r) {
    Json j;
    j["carrier_frequency"] = r.carrier_frequency;
    j["bandwidth"] = r.bandwidth;
    j["prf"] = r.prf;
    j["sampling_rate"] = r.sampling_rate;
    j["pulses"] = r.pulses;
    j["range_samples"] = r.range_samples;
    return j;
}

inline RadarParams radar_from_json(const Json& j, const std::string& path = "radar") {
    detail::FieldReader f(j, path);
    f.reject_unknown({"carrier_frequency", "bandwidth", "prf", "sampling_rate", "pulses", "range_samples"});
    RadarParams r;
    r.carrier_frequency = f.number("carrier_frequency");
    r.bandwidth = f.number("bandwidth");
    r.prf = f.number("prf");
    r.sampling_rate = f.number("sampling_rate");
    const auto pulses = f.integer("pulses");
    const auto samples = f.integer("range_samples");
    if (pulses < 2 || pulses > (1 << 24)) throw ValidationError(f.field("pulses") + ": out of range");
    if (samples < 2 || samples > (1 << 24)) throw ValidationError(f.field("range_samples") + ": out of range");
    r.pulses = static_cast<int>(pulses);
    r.range_samples = static_cast<int>(samples);
    return r;
}

inline Json geometry_to_json(const AcquisitionGeometry& g) {
    Json j;
    j["mode"] = std::string(to_string(g.mode));
    j["earth_radius"] = g.earth_radius;
    j["orbit_radius"] = g.orbit_radius;
    j["aperture_radius"] = g.aperture_radius;
    j["reference_range"] = g.reference_range;
    j["scene_range"] = g.scene_range;
    j["rotation_centre_range"] = g.rotation_centre_range;
    j["velocity"] = g.velocity;
    j["acquisition_time"] = g.acquisition_time;
    j["dwell_time"] = g.dwell_time;
    return j;
}

inline AcquisitionGeometry geometry_from_json(const Json& j, const std::string& path = "geometry") {
    detail::FieldReader f(j, path);
    f.reject_unknown({"mode", "earth_radius", "orbit_radius", "aperture_radius", "reference_range", "scene_range",
                      "rotation_centre_range", "velocity", "acquisition_time", "dwell_time"});
    AcquisitionGeometry g;
    try {
        g.mode = mode_from_string(f.string("mode"));
    } catch (const ValidationError& e) {
        throw ValidationError(f.field("mode") + ": " + e.what());
    }
    g.earth_radius = f.number("earth_radius");
    g.orbit_radius = f.number("orbit_radius");
    g.aperture_radius = f.number_or("aperture_radius", g.orbit_radius);
    g.reference_range = f.number("reference_range");
    g.scene_range = f.number_or("scene_range", g.reference_range);
    g.rotation_centre_range = f.number_or("rotation_centre_range", 0.0);
    g.velocity = f.number("velocity");
    g.acquisition_time = f.number("acquisition_time");
    g.dwell_time = f.number_or("dwell_time", g.acquisition_time);
    return g;
}

inline Json kernel_to_json(const InterpKernel& k) {
    Json j;
    j["taps"] = k.taps;
    j["beta"] = k.beta;
    j["oversample"] = k.oversample;
    return j;
}

inline InterpKernel kernel_from_json(const Json& j, const std::string& path = "kernel") {
    detail::FieldReader f(j, path);
    f.reject_unknown({"taps", "beta", "oversample"});
    InterpKernel k;
    k.taps = static_cast<int>(f.integer_or("taps", k.taps));
    k.beta = f.number_or("beta", k.beta);
    k.oversample = static_cast<int>(f.integer_or("oversample", k.oversample));
    return k;
}

inline Json config_to_json(const SceneConfig& c) {
    Json j;
    j["radar"] = radar_to_json(c.radar);
    j["geometry"] = geometry_to_json(c.geom);
    Json targets = Json::array();
    for (const auto& t : c.targets) {
        Json tj;
        tj["along_track"] = t.along_track;
        tj["ground_offset"] = t.ground_offset;
        tj["amplitude"] = detail::complex_to_json(t.amplitude);
        targets.push_back(tj);
    }
    j["targets"] = targets;
    Json grids;
    grids["range_window_start"] = c.range_window_start ? Json(*c.range_window_start) : Json(nullptr);
    grids["azimuth_oversample"] = c.azimuth_oversample;
    j["grids"] = grids;
    j["kernel"] = kernel_to_json(c.kernel);
    j["seed"] = c.seed;
    return j;
}

/// Parses and validates a scene; error messages name the offending field.
inline SceneConfig config_from_json(const Json& j) {
    detail::FieldReader f(j, "");
    f.reject_unknown({"radar", "geometry", "targets", "grids", "kernel", "seed"});
    SceneConfig c;
    c.radar = radar_from_json(f.require("radar"));
    c.geom = geometry_from_json(f.require("geometry"));
    if (f.has("targets")) {
        const Json& arr = f.require("targets");
        if (!arr.is_array()) throw ValidationError("targets: expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string path = "targets[" + std::to_string(k) + "]";
            detail::FieldReader t(arr[k], path);
            t.reject_unknown({"along_track", "ground_offset", "amplitude"});
            TargetSpec ts;
            ts.along_track = t.number("along_track");
            ts.ground_offset = t.number_or("ground_offset", 0.0);
            if (t.has("amplitude")) ts.amplitude = detail::complex_from_json(t.require("amplitude"), path + ".amplitude");
            c.targets.push_back(ts);
        }
    }
    if (f.has("grids")) {
        detail::FieldReader gr(f.require("grids"), "grids");
        gr.reject_unknown({"range_window_start", "azimuth_oversample"});
        if (gr.has("range_window_start")) c.range_window_start = gr.number("range_window_start");
        c.azimuth_oversample = static_cast<int>(gr.integer_or("azimuth_oversample", 1));
    }
    if (f.has("kernel")) c.kernel = kernel_from_json(f.require("kernel"));
    c.seed = f.integer_or("seed", 0);
    c.validate();
    return c;
}

inline std::string emit_config(const SceneConfig& c) { return config_to_json(c).dump(2) + "\n"; }

inline SceneConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

inline SceneConfig load_config(const std::string& path) { return parse_config(read_text(path)); }

// ---------------------------------------------------------------------------
// SGAR v1

struct SgarPaths {
    std::string payload;
    std::string sidecar;
};

/// Accepts either the payload path (`x.sgar`) or the bare name (`x`).
inline SgarPaths sgar_paths(const std::string& name) {
    const std::string ext = ".sgar";
    std::string base = name;
    if (base.size() >= 10 && base.compare(base.size() - 10, 10, ".sgar.json") == 0) base.resize(base.size() - 5);
    if (base.size() < ext.size() || base.compare(base.size() - ext.size(), ext.size(), ext) != 0) base += ext;
    return {base, base + ".json"};
}

inline Json axis_to_json(const AxisMeta& a) {
    Json j;
    j["domain"] = std::string(to_string(a.domain));
    j["origin"] = a.origin;
    j["step"] = a.step;
    j["unit"] = std::string(a.unit());
    j["ref"] = a.ref;
    return j;
}

inline AxisMeta axis_from_json(const Json& j, const std::string& path) {
    detail::FieldReader f(j, path);
    AxisMeta a;
    try {
        a.domain = domain_from_string(f.string("domain"));
    } catch (const ValidationError& e) {
        throw ValidationError(f.field("domain") + ": " + e.what());
    }
    a.origin = f.number("origin");
    a.step = f.number("step");
    a.ref = f.number_or("ref", 0.0);
    if (f.has("unit") && f.string("unit") != a.unit())
        throw ValidationError(f.field("unit") + ": does not match the domain");
    if (!(a.step > 0.0)) throw ValidationError(f.field("step") + ": must be > 0");
    return a;
}

inline Json image_to_json(const FocusedImage& img) {
    Json j;
    j["algo"] = std::string(to_string(img.algo));
    j["mode"] = std::string(to_string(img.mode));
    j["x_map"] = {{"offset", img.x_map.offset}, {"scale", img.x_map.scale}};
    j["y_map"] = {{"offset", img.y_map.offset}, {"scale", img.y_map.scale}};
    j["x_scale"] = img.x_scale;
    return j;
}

struct SgarFile {
    ComplexRasterF raster;
    Json meta;  ///< full sidecar contents

    bool has_scene() const { return meta.contains("scene"); }
    SceneConfig scene() const {
        if (!has_scene()) throw ValidationError("raster sidecar carries no scene description");
        return config_from_json(meta.at("scene"));
    }
    bool has_image() const { return meta.contains("image"); }

    /// Image view of the raster; axes and maps come from the sidecar.
    FocusedImage image() const {
        if (!has_image()) throw ValidationError("raster sidecar carries no image metadata");
        const Json& im = meta.at("image");
        detail::FieldReader f(im, "image");
        FocusedImage out;
        out.raster = convert<std::complex<double>>(raster);
        out.algo = algorithm_from_string(f.string("algo"));
        out.mode = mode_from_string(f.string("mode"));
        detail::FieldReader xm(f.require("x_map"), "image.x_map"), ym(f.require("y_map"), "image.y_map");
        out.x_map = {xm.number("offset"), xm.number("scale")};
        out.y_map = {ym.number("offset"), ym.number("scale")};
        out.x_scale = f.number("x_scale");
        return out;
    }
};

namespace detail {

inline std::uint32_t to_le(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

}  // namespace detail

/// Writes payload and sidecar. `extra` members are merged into the sidecar.
inline void write_sgar(const std::string& name, const ComplexRasterF& r, const Json& extra = Json::object()) {
    const SgarPaths p = sgar_paths(name);
    Json j;
    j["format"] = "SGAR";
    j["version"] = 1;
    j["dims"] = Json::array({r.rows(), r.cols()});
    j["axis0"] = axis_to_json(r.axis0);
    j["axis1"] = axis_to_json(r.axis1);
    j["stage_tag"] = r.stage_tag;
    j["byte_order"] = "LE";
    j["sample_type"] = "complex64";
    j["transform_convention"] = "centred unitary DFT; forward kernel exp(-j 2 pi f t)";
    for (const auto& [k, v] : extra.items()) j[k] = v;

    std::vector<std::uint32_t> words(2 * r.size());
    const auto& d = r.data();
    for (std::size_t k = 0; k < d.size(); ++k) {
        words[2 * k] = detail::to_le(std::bit_cast<std::uint32_t>(d[k].real()));
        words[2 * k + 1] = detail::to_le(std::bit_cast<std::uint32_t>(d[k].imag()));
    }
    std::ofstream out(p.payload, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + p.payload + "'");
    out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * 4));
    if (!out) throw ValidationError("write failed for '" + p.payload + "'");
    out.close();
    write_text(p.sidecar, j.dump(2) + "\n");
}

inline void write_sgar(const std::string& name, const ComplexRaster& r, const Json& extra = Json::object()) {
    write_sgar(name, convert<std::complex<float>>(r), extra);
}

inline SgarFile read_sgar(const std::string& name) {
    const SgarPaths p = sgar_paths(name);
    Json j;
    try {
        j = Json::parse(read_text(p.sidecar));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("sidecar '" + p.sidecar + "': malformed JSON: " + e.what());
    }
    detail::FieldReader f(j, "sidecar");
    if (f.integer("version") != 1) throw ValidationError("sidecar.version: unsupported SGAR version");
    if (f.string("byte_order") != "LE") throw ValidationError("sidecar.byte_order: only LE is supported");
    const Json& dims = f.require("dims");
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() || !dims[1].is_number_integer())
        throw ValidationError("sidecar.dims: expected [n_az, n_rg]");
    const auto rows = dims[0].get<std::int64_t>(), cols = dims[1].get<std::int64_t>();
    if (rows < 2 || cols < 2) throw ValidationError("sidecar.dims: raster must be at least 2x2");

    SgarFile file;
    file.raster = ComplexRasterF(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                                 axis_from_json(f.require("axis0"), "sidecar.axis0"),
                                 axis_from_json(f.require("axis1"), "sidecar.axis1"),
                                 f.has("stage_tag") ? f.string("stage_tag") : std::string{});
    std::ifstream in(p.payload, std::ios::binary | std::ios::ate);
    if (!in) throw ValidationError("cannot open '" + p.payload + "'");
    const auto bytes = static_cast<std::size_t>(in.tellg());
    const std::size_t expected = file.raster.size() * 8;
    if (bytes != expected) {
        std::ostringstream os;
        os << "payload '" << p.payload << "' holds " << bytes << " bytes, dims require " << expected;
        throw ValidationError(os.str());
    }
    in.seekg(0);
    std::vector<std::uint32_t> words(2 * file.raster.size());
    in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw ValidationError("read failed for '" + p.payload + "'");
    auto& d = file.raster.data();
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = {std::bit_cast<float>(detail::to_le(words[2 * k])), std::bit_cast<float>(detail::to_le(words[2 * k + 1]))};
    }
    file.meta = std::move(j);
    return file;
}

// ---------------------------------------------------------------------------
// Comparison and reports

struct CompareStats {
    bool same_shape = false;
    bool same_axes = false;
    bool bitwise_equal = false;
    std::size_t differing = 0;  ///< samples whose bits differ
    double max_abs_diff = 0.0;
    double rms_diff = 0.0;
    double max_abs_a = 0.0;
};

inline CompareStats compare_rasters(const ComplexRasterF& a, const ComplexRasterF& b) {
    CompareStats s;
    s.same_shape = a.rows() == b.rows() && a.cols() == b.cols();
    s.same_axes = a.axis0 == b.axis0 && a.axis1 == b.axis1;
    if (!s.same_shape) return s;
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto va = a.data()[k], vb = b.data()[k];
        if (std::memcmp(&va, &vb, sizeof va) != 0) ++s.differing;
        const double d = std::abs(std::complex<double>(va) - std::complex<double>(vb));
        s.max_abs_diff = std::max(s.max_abs_diff, d);
        s.max_abs_a = std::max(s.max_abs_a, static_cast<double>(std::abs(va)));
        sum += d * d;
    }
    s.rms_diff = std::sqrt(sum / static_cast<double>(a.size()));
    s.bitwise_equal = s.differing == 0 && s.same_axes;
    return s;
}

inline Json compare_to_json(const CompareStats& s) {
    Json j;
    j["same_shape"] = s.same_shape;
    j["same_axes"] = s.same_axes;
    j["bitwise_equal"] = s.bitwise_equal;
    j["differing_samples"] = s.differing;
    j["max_abs_diff"] = s.max_abs_diff;
    j["rms_diff"] = s.rms_diff;
    j["max_abs_a"] = s.max_abs_a;
    return j;
}

inline Json irf_to_json(const IrfReport& r) {
    Json j;
    j["peak_xy"] = Json::array({r.peak_xy[0], r.peak_xy[1]});
    j["width_az"] = r.width_az;
    j["width_rg"] = r.width_rg;
    j["pslr_az"] = r.pslr_az;
    j["pslr_rg"] = r.pslr_rg;
    j["islr_az"] = r.islr_az;
    j["islr_rg"] = r.islr_rg;
    j["peak_mag"] = r.peak_mag;
    return j;
}

}  // namespace sga
