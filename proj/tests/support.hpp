#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sga/sga.hpp"

namespace sga::testing {

inline std::string config_path(const std::string& name) { return std::string(SGA_CONFIG_DIR) + "/" + name; }

/// Small stripmap scene for unit tests: 1 s of data at PRF 1024.
inline SceneConfig small_stripmap() {
    SceneConfig c;
    c.geom.earth_radius = 6371e3;
    c.geom.orbit_radius = 6903e3;
    c.geom.aperture_radius = c.geom.orbit_radius;
    c.geom.reference_range = 597e3;
    c.geom.scene_range = 597e3;
    c.geom.velocity = 7500.0;
    c.geom.mode = Mode::stripmap;
    c.geom.acquisition_time = 1.0;
    c.geom.dwell_time = 0.25;
    c.radar.carrier_frequency = 5.4e9;
    c.radar.bandwidth = 40e6;
    c.radar.sampling_rate = 48e6;
    c.radar.prf = 1024.0;
    c.radar.pulses = 1024;
    c.radar.range_samples = 512;
    return c;
}

inline SceneConfig small_spotlight() {
    SceneConfig c = small_stripmap();
    c.geom.mode = Mode::spotlight;
    c.geom.dwell_time = c.geom.acquisition_time;
    c.radar.prf = 512.0;
    c.radar.pulses = 512;
    return c;
}

inline SceneConfig small_tops() {
    SceneConfig c = small_stripmap();
    c.geom.mode = Mode::tops;
    c.geom.orbit_radius = 6915e3;
    c.geom.aperture_radius = c.geom.orbit_radius;
    c.geom.reference_range = 646e3;
    c.geom.scene_range = 646e3;
    c.geom.rotation_centre_range = 150e3;
    c.geom.acquisition_time = 0.4;
    c.geom.dwell_time = 0.2;
    c.radar.prf = 4965.0;
    c.radar.pulses = 1986;
    return c;
}

inline PointTarget target_at(const SceneConfig& c, double along, double ground) {
    return {target_on_sphere(along, ground, c.geom)};
}

inline double relative_error_db(const std::vector<std::complex<double>>& got,
                                const std::vector<std::complex<double>>& want) {
    double e = 0.0, n = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
        e += std::norm(got[k] - want[k]);
        n += std::norm(want[k]);
    }
    return 10.0 * std::log10(e / n);
}

}  // namespace sga::testing
