#pragma once

// Data-collection geometry on a spherical Earth.
//
// Frame: origin at the Earth centre, +Y through the radar at the aperture
// centre, +X along the platform velocity, +Z completing a right-handed frame.
// The radar moves on a circular orbit in the z = 0 plane.

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <string_view>

#include "sga/error.hpp"

namespace sga {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

enum class Mode { spotlight, stripmap, tops };

inline std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::spotlight: return "spotlight";
        case Mode::stripmap: return "stripmap";
        case Mode::tops: return "tops";
    }
    return "unknown";
}

inline Mode mode_from_string(std::string_view name) {
    if (name == "spotlight") return Mode::spotlight;
    if (name == "stripmap") return Mode::stripmap;
    if (name == "tops") return Mode::tops;
    throw ValidationError("unknown acquisition mode '" + std::string(name) + "'");
}

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

struct AcquisitionGeometry {
    double orbit_radius = 0.0;           ///< R, orbital radius from the Earth centre (m)
    double earth_radius = 0.0;           ///< R0 (m)
    double aperture_radius = 0.0;        ///< R_c, orbital radius at aperture centre; equals R here
    double reference_range = 0.0;        ///< r_ref, slant range to the scene centre (m)
    double velocity = 0.0;               ///< platform speed (m/s)
    Mode mode = Mode::stripmap;
    double acquisition_time = 0.0;       ///< T_a (s)
    double dwell_time = 0.0;             ///< T_u, per-target illumination time (s)
    double scene_range = 0.0;            ///< scene centre to flight path (m)
    double rotation_centre_range = 0.0;  ///< virtual rotation centre to flight path (m), TOPS only

    void validate() const {
        auto fail = [](const std::string& msg) { throw ValidationError("geometry: " + msg); };
        const double R = orbit_radius;
        const double R0 = earth_radius;
        if (!(R0 > 0.0)) fail("earth_radius must be > 0");
        if (!(R > R0)) fail("orbit_radius must exceed earth_radius");
        if (!(std::abs(aperture_radius - R) <= 1e-9 * R))
            fail("aperture_centre_radius must equal orbit_radius for a circular orbit");
        if (!(velocity > 0.0)) fail("velocity must be > 0");
        if (!(dwell_time > 0.0)) fail("dwell_time must be > 0");
        if (!(acquisition_time >= dwell_time)) fail("acquisition_time must be >= dwell_time");
        if (!(reference_range >= std::abs(R - R0) && reference_range <= std::sqrt(R * R + R0 * R0)))
            fail("reference_range is not a realizable slant range to the sphere");
        if (!(scene_range > 0.0)) fail("scene_range must be > 0");
        if (mode == Mode::tops && !(rotation_centre_range > 0.0))
            fail("rotation_centre_range must be > 0 in TOPS mode");
    }

    /// Projected coordinate u = x sin(theta) + y cos(theta) of the scene centre.
    double reference_u() const {
        const double R = orbit_radius;
        const double R0 = earth_radius;
        return (R * R + R0 * R0 - reference_range * reference_range) / (2.0 * R);
    }
};

struct RadarParams {
    static constexpr double c = kSpeedOfLight;

    double carrier_frequency = 0.0;  ///< f_c (Hz)
    double bandwidth = 0.0;          ///< B_r (Hz)
    double prf = 0.0;                ///< pulse repetition frequency (Hz)
    double sampling_rate = 0.0;      ///< f_s (Hz)
    int pulses = 0;                  ///< N_a
    int range_samples = 0;           ///< N_r

    double wavelength() const { return c / carrier_frequency; }

    void validate(const AcquisitionGeometry& geom) const {
        auto fail = [](const std::string& msg) { throw ValidationError("radar: " + msg); };
        if (!(carrier_frequency > 0.0)) fail("carrier_frequency must be > 0");
        if (!(bandwidth > 0.0)) fail("bandwidth must be > 0");
        if (!(prf > 0.0)) fail("prf must be > 0");
        if (!(sampling_rate >= bandwidth)) fail("sampling_rate must be >= bandwidth");
        if (pulses < 2 || range_samples < 2) fail("pulses and range_samples must be >= 2");
        if (!(pulses / prf >= geom.acquisition_time - 1.0 / prf)) {
            std::ostringstream os;
            os << "pulses/prf = " << pulses / prf << " s does not cover acquisition_time "
               << geom.acquisition_time << " s";
            fail(os.str());
        }
    }
};

struct PointTarget {
    Vec3 position;
    std::complex<double> amplitude{1.0, 0.0};

    void validate(const AcquisitionGeometry& geom) const {
        const double r2 = position.x * position.x + position.y * position.y + position.z * position.z;
        const double R02 = geom.earth_radius * geom.earth_radius;
        if (std::abs(r2 - R02) > 1e-6 * R02)
            throw ValidationError("target does not lie on the Earth sphere");
    }
};

/// Orbital angle swept at azimuth time t_a; uniform angular rate on the circular orbit.
inline double orbit_angle(double t_a, const AcquisitionGeometry& geom) {
    return geom.velocity * t_a / geom.orbit_radius;
}

inline Vec3 radar_position_at_angle(double theta, const AcquisitionGeometry& geom) {
    return {geom.orbit_radius * std::sin(theta), geom.orbit_radius * std::cos(theta), 0.0};
}

inline Vec3 radar_position(double t_a, const AcquisitionGeometry& geom) {
    if (!(std::abs(t_a) <= 0.5 * geom.acquisition_time * (1.0 + 1e-12))) {
        std::ostringstream os;
        os << "azimuth time " << t_a << " s outside the acquisition window +/-"
           << 0.5 * geom.acquisition_time << " s";
        throw DomainError(os.str());
    }
    return radar_position_at_angle(orbit_angle(t_a, geom), geom);
}

/// Projected target coordinate u = x_i sin(theta) + y_i cos(theta).
inline double projected_u(double theta, const Vec3& p) {
    return p.x * std::sin(theta) + p.y * std::cos(theta);
}

/// Slant range from the projected coordinate: r = sqrt(R^2 + R0^2 - 2 R u).
inline double range_from_u(double u, const AcquisitionGeometry& geom) {
    const double R = geom.orbit_radius;
    const double R0 = geom.earth_radius;
    return std::sqrt(R * R + R0 * R0 - 2.0 * R * u);
}

/// Slant range from the radar at angle theta (Cartesian form); no window check.
inline double range_at_angle(double theta, const Vec3& p, const AcquisitionGeometry& geom) {
    const double R = geom.orbit_radius;
    const double dx = R * std::sin(theta) - p.x;
    const double dy = R * std::cos(theta) - p.y;
    return std::sqrt(dx * dx + dy * dy + p.z * p.z);
}

inline double range_history(double t_a, const PointTarget& tgt, const AcquisitionGeometry& geom) {
    return (radar_position(t_a, geom) - tgt.position).norm();
}

/// Same quantity through the projected coordinate; agrees with range_history to rounding.
inline double range_history_u_form(double t_a, const PointTarget& tgt, const AcquisitionGeometry& geom) {
    return range_from_u(projected_u(orbit_angle(t_a, geom), tgt.position), geom);
}

/// Azimuth time at which the range to the target is minimal.
inline double zero_doppler_time(const PointTarget& tgt, const AcquisitionGeometry& geom) {
    return std::atan2(tgt.position.x, tgt.position.y) * geom.orbit_radius / geom.velocity;
}

/// R_centre / (R_centre + R_scene) in TOPS mode, 1 otherwise.
inline double tops_scale(const AcquisitionGeometry& geom) {
    if (geom.mode != Mode::tops) return 1.0;
    return geom.rotation_centre_range / (geom.rotation_centre_range + geom.scene_range);
}

/// Centre of the illumination window of a target.
inline double support_centre(const PointTarget& tgt, const AcquisitionGeometry& geom) {
    switch (geom.mode) {
        case Mode::spotlight: return 0.0;
        case Mode::stripmap: return tgt.position.x / geom.velocity;
        case Mode::tops: return tops_scale(geom) * tgt.position.x / geom.velocity;
    }
    return 0.0;
}

/// Duration of the illumination window of a target.
inline double support_duration(const AcquisitionGeometry& geom) {
    return geom.mode == Mode::spotlight ? geom.acquisition_time : geom.dwell_time;
}

/// Ideal rect antenna support A(t_a) in {0, 1}.
inline double beam_support(double t_a, const PointTarget& tgt, const AcquisitionGeometry& geom) {
    const double arg = (t_a - support_centre(tgt, geom)) / support_duration(geom);
    return std::abs(arg) <= 0.5 ? 1.0 : 0.0;
}

/// Rate mapping along-track position to azimuth frequency after range
/// processing: 2 v^2 / (lambda R_scene).
inline double position_frequency_rate(const AcquisitionGeometry& geom, double wavelength) {
    return 2.0 * geom.velocity * geom.velocity / (wavelength * geom.scene_range);
}

/// Linear rate k_t of the instantaneous Doppler centroid.
inline double doppler_centroid_rate(const AcquisitionGeometry& geom, double wavelength) {
    const double v2 = geom.velocity * geom.velocity;
    switch (geom.mode) {
        case Mode::spotlight:
            throw UnsupportedModeError("Doppler centroid removal is not defined for spotlight mode");
        case Mode::stripmap: return 2.0 * v2 / (wavelength * geom.scene_range);
        case Mode::tops:
            return 2.0 * v2 / (wavelength * geom.scene_range) +
                   2.0 * v2 / (wavelength * geom.rotation_centre_range);
    }
    return 0.0;
}

/// Places a target on the sphere from an along-track position and a ground
/// offset (m, positive away from the flight path) relative to the scene centre.
inline Vec3 target_on_sphere(double along_track, double ground_offset, const AcquisitionGeometry& geom) {
    const double R0 = geom.earth_radius;
    const double yc = geom.reference_u();
    const double centre_angle = std::atan2(std::sqrt(std::max(0.0, R0 * R0 - yc * yc)), yc);
    const double angle = centre_angle + ground_offset / R0;
    const double rho = std::sqrt(R0 * R0 - along_track * along_track);
    return {along_track, rho * std::cos(angle), rho * std::sin(angle)};
}

}  // namespace sga
