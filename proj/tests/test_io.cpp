#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "sga/quicklook.hpp"
#include "support.hpp"

using namespace sga;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("sga_test_io_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("shipped configs parse and round-trip stably", "[io]") {
    for (const char* name : {"ref_stripmap.json", "ref_stripmap_desk.json", "ref_tops.json",
                             "desk_stripmap.json", "desk_spotlight.json"}) {
        INFO(name);
        const SceneConfig c = load_config(testing::config_path(name));
        const std::string once = emit_config(c);
        const std::string twice = emit_config(parse_config(once));
        CHECK(once == twice);
    }
}

TEST_CASE("reference parameter configs ship verbatim", "[io]") {
    const auto s = load_config(testing::config_path("ref_stripmap.json"));
    CHECK(s.radar.carrier_frequency == 5.4e9);
    CHECK(s.radar.bandwidth == 200e6);
    CHECK(s.radar.prf == 3900.0);
    CHECK(s.geom.acquisition_time == 4.0);
    CHECK(s.geom.orbit_radius - s.geom.earth_radius == Approx(532e3));
    CHECK(s.geom.reference_range == 597e3);
    CHECK(s.geom.mode == Mode::stripmap);

    const auto t = load_config(testing::config_path("ref_tops.json"));
    CHECK(t.radar.carrier_frequency == 5.4e9);
    CHECK(t.radar.bandwidth == 40e6);
    CHECK(t.radar.prf == 4965.0);
    CHECK(t.geom.acquisition_time == 0.8);
    CHECK(t.geom.orbit_radius - t.geom.earth_radius == Approx(544e3));
    CHECK(t.geom.reference_range == 646e3);
    CHECK(t.geom.rotation_centre_range == 150e3);
    CHECK(t.geom.mode == Mode::tops);

    CHECK(load_config(testing::config_path("ref_stripmap_desk.json")).radar.pulses <= 4096);
}

TEST_CASE("config errors name the offending field", "[io]") {
    Json j = config_to_json(testing::small_stripmap());
    {
        Json k = j;
        k["radar"]["colour"] = 1;
        CHECK(error_of(k.dump()).find("radar.colour") != std::string::npos);
    }
    {
        Json k = j;
        k["geometry"].erase("velocity");
        CHECK(error_of(k.dump()).find("geometry.velocity") != std::string::npos);
    }
    {
        Json k = j;
        k["radar"]["pulses"] = "many";
        CHECK(error_of(k.dump()).find("radar.pulses") != std::string::npos);
    }
    {
        Json k = j;
        k["targets"] = Json::array({{{"along_track", 1.0}, {"amplitude", "loud"}}});
        CHECK(error_of(k.dump()).find("targets[0].amplitude") != std::string::npos);
    }
    {
        Json k = j;
        k["geometry"]["velocity"] = -1.0;
        CHECK(error_of(k.dump()).find("velocity") != std::string::npos);
    }
    {
        Json k = j;
        k["grids"]["azimuth_oversample"] = 0;
        CHECK(error_of(k.dump()).find("grids.azimuth_oversample") != std::string::npos);
    }
    CHECK(error_of("{ not json").find("malformed") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("targets and optional grids survive the round trip", "[io]") {
    auto c = testing::small_stripmap();
    c.targets = {{100.0, -50.0, {0.5, -0.25}}, {0.0, 0.0, {1.0, 0.0}}};
    c.range_window_start = 3.9e-3;
    c.azimuth_oversample = 2;
    c.seed = 42;
    const auto back = parse_config(emit_config(c));
    REQUIRE(back.targets.size() == 2);
    CHECK(back.targets[0].amplitude == std::complex<double>(0.5, -0.25));
    CHECK(back.range_window_start.value() == 3.9e-3);
    CHECK(back.azimuth_oversample == 2);
    CHECK(back.seed == 42);
    CHECK(back.point_targets()[0].position.x == 100.0);
}

TEST_CASE("SGAR payload round trip is bitwise", "[io]") {
    const auto dir = scratch_dir("roundtrip");
    ComplexRasterF r(7, 5, {Domain::time, -0.1, 0.01, 0.0}, {Domain::frequency, -3e6, 1e6, 4.25e-3}, "range_spectrum");
    std::mt19937 rng(1);
    std::normal_distribution<float> d;
    for (auto& v : r.data()) v = {d(rng), d(rng)};
    r.data()[3] = {-0.0f, std::numeric_limits<float>::denorm_min()};
    const std::string name = (dir / "x").string();
    write_sgar(name, r, Json{{"note", "kept"}});
    CHECK(fs::exists(dir / "x.sgar"));
    CHECK(fs::exists(dir / "x.sgar.json"));
    CHECK(fs::file_size(dir / "x.sgar") == 7 * 5 * 8);

    for (const std::string& form : {name, name + ".sgar", name + ".sgar.json"}) {
        const SgarFile f = read_sgar(form);
        CHECK(f.raster.axis0 == r.axis0);
        CHECK(f.raster.axis1 == r.axis1);
        CHECK(f.raster.stage_tag == "range_spectrum");
        CHECK(std::memcmp(f.raster.data().data(), r.data().data(), r.size() * sizeof(r.data()[0])) == 0);
        CHECK(f.meta.at("note") == "kept");
        CHECK(compare_rasters(f.raster, r).bitwise_equal);
    }
    const Json side = Json::parse(read_text(name + ".sgar.json"));
    CHECK(side.at("version") == 1);
    CHECK(side.at("byte_order") == "LE");
    CHECK(side.at("dims") == Json::array({7, 5}));
    CHECK(side.at("axis1").at("unit") == "Hz");
}

TEST_CASE("SGAR reader rejects malformed files", "[io]") {
    const auto dir = scratch_dir("malformed");
    ComplexRasterF r(4, 4, {Domain::time, 0.0, 1.0, 0.0}, {Domain::time, 0.0, 1.0, 0.0});
    const std::string name = (dir / "y").string();
    write_sgar(name, r);
    {
        std::ofstream(name + ".sgar", std::ios::binary | std::ios::app) << "x";
        CHECK_THROWS_AS(read_sgar(name), ValidationError);
    }
    write_sgar(name, r);
    Json side = Json::parse(read_text(name + ".sgar.json"));
    side["version"] = 2;
    write_text(name + ".sgar.json", side.dump());
    CHECK_THROWS_AS(read_sgar(name), ValidationError);
    side["version"] = 1;
    side["byte_order"] = "BE";
    write_text(name + ".sgar.json", side.dump());
    CHECK_THROWS_AS(read_sgar(name), ValidationError);
    CHECK_THROWS_AS(read_sgar((dir / "missing").string()), ValidationError);
    CHECK_THROWS_AS(read_sgar(name).image(), ValidationError);
}

TEST_CASE("image metadata round trip", "[io]") {
    const auto dir = scratch_dir("image");
    FocusedImage img;
    img.raster = ComplexRaster(4, 6, {Domain::frequency, -2.0, 1.0, 0.0}, {Domain::time, 0.04, 1e-9, 0.0});
    img.x_map = {-4.4, 2.2};
    img.y_map = {6e6, 0.15};
    img.algo = Algorithm::classic;
    img.mode = Mode::tops;
    img.x_scale = 0.25;
    const std::string name = (dir / "img").string();
    write_sgar(name, img.raster, Json{{"image", image_to_json(img)}});
    const FocusedImage back = read_sgar(name).image();
    CHECK(back.x_map == img.x_map);
    CHECK(back.y_map == img.y_map);
    CHECK(back.algo == Algorithm::classic);
    CHECK(back.mode == Mode::tops);
    CHECK(back.x_scale == 0.25);
}

TEST_CASE("compare statistics", "[io]") {
    ComplexRasterF a(3, 3, {Domain::time, 0, 1, 0}, {Domain::time, 0, 1, 0});
    for (std::size_t k = 0; k < a.size(); ++k) a.data()[k] = {static_cast<float>(k), 1.0f};
    const auto same = compare_rasters(a, a);
    CHECK(same.bitwise_equal);
    CHECK(same.max_abs_diff == 0.0);
    auto b = a;
    b.data()[4] += std::complex<float>(0.5f, 0.0f);
    const auto diff = compare_rasters(a, b);
    CHECK_FALSE(diff.bitwise_equal);
    CHECK(diff.differing == 1);
    CHECK(diff.max_abs_diff == Approx(0.5));
    CHECK(compare_to_json(diff).at("differing_samples") == 1);
}

TEST_CASE("quicklook rendering", "[io][quicklook]") {
    ComplexRasterF flat(10, 12, {Domain::time, 0, 1, 0}, {Domain::time, 0, 1, 0});
    for (auto& v : flat.data()) v = std::polar(3.0f, 0.7f);
    const GrayImage g = render_quicklook(flat);
    CHECK(g.width == 12);
    CHECK(g.height == 10);
    for (auto p : g.pixels) CHECK(p == 128);

    ComplexRasterF ramp = flat;
    for (std::size_t k = 0; k < ramp.size(); ++k) ramp.data()[k] = static_cast<float>(std::pow(10.0, k / 20.0));
    const GrayImage h = render_quicklook(ramp);
    CHECK(h.pixels.front() == 0);
    CHECK(h.pixels.back() == 255);
    CHECK(std::is_sorted(h.pixels.begin(), h.pixels.end()));

    const auto dir = scratch_dir("png");
    const std::string path = (dir / "q.png").string();
    write_png(path, h);
    const GrayImage back = read_png(path);
    CHECK(back.width == h.width);
    CHECK(back.height == h.height);
    CHECK(back.pixels == h.pixels);
    CHECK_THROWS_AS(read_png((dir / "none.png").string()), Error);
}
