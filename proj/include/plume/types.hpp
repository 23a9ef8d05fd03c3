#ifndef PLUME_TYPES_HPP
#define PLUME_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace plume {

/// Transport properties of the (uniform, 2D) medium.
struct MediumParams {
    double u_x; // advective velocity along x [km/year]
    double D_x; // longitudinal dispersion [km^2/year]
    double D_y; // transverse dispersion [km^2/year]

    void validate() const {
        if (!(D_x > 0.0) || !(D_y > 0.0))
            throw std::invalid_argument("medium: dispersion coefficients must be positive");
        if (!std::isfinite(u_x))
            throw std::invalid_argument("medium: advective velocity must be finite");
    }
};

enum class SourceKind { InstantPoint, ExtendedSquare, ContinuousPoint };

inline const char* to_string(SourceKind k) {
    switch (k) {
        case SourceKind::InstantPoint: return "instant_point";
        case SourceKind::ExtendedSquare: return "extended_square";
        case SourceKind::ContinuousPoint: return "continuous_point";
    }
    return "?";
}

inline SourceKind source_kind_from_string(const std::string& s) {
    if (s == "instant_point") return SourceKind::InstantPoint;
    if (s == "extended_square") return SourceKind::ExtendedSquare;
    if (s == "continuous_point") return SourceKind::ContinuousPoint;
    throw std::invalid_argument("unknown source kind '" + s + "'");
}

/// One release source. `q` is a total concentration for InstantPoint, a
/// strength density for ExtendedSquare, and a release rate per year for
/// ContinuousPoint. `d` is the square half-width, used only by
/// ExtendedSquare.
struct SourceSpec {
    SourceKind kind = SourceKind::InstantPoint;
    double x = 0.0;  // source center [km]
    double y = 0.0;  // source center [km]
    double q = 0.0;  // strength (units depend on kind)
    double d = 0.0;  // half-width [km], ExtendedSquare only
    double t0 = 0.0; // activation time [year]

    void validate() const {
        if (!(q >= 0.0)) throw std::invalid_argument("source: strength must be >= 0");
        if (kind == SourceKind::ExtendedSquare && !(d > 0.0))
            throw std::invalid_argument("source: half-width must be > 0");
    }
};

enum class BoundaryMode { Infinite, ReflectingAtYZero };

inline const char* to_string(BoundaryMode b) {
    return b == BoundaryMode::Infinite ? "infinite" : "reflecting_y0";
}

inline BoundaryMode boundary_from_string(const std::string& s) {
    if (s == "infinite") return BoundaryMode::Infinite;
    if (s == "reflecting_y0") return BoundaryMode::ReflectingAtYZero;
    throw std::invalid_argument("unknown boundary mode '" + s + "'");
}

struct SpaceTimePoint {
    double x; // [km]
    double y; // [km]
    double t; // [year]
};

/// Ordered detector positions.
struct DetectorArray {
    struct Position {
        double x, y;
    };
    std::vector<Position> positions;

    std::size_t size() const { return positions.size(); }

    void validate() const {
        if (positions.empty()) throw std::invalid_argument("detectors: need at least one");
        for (std::size_t i = 0; i < positions.size(); ++i)
            for (std::size_t j = i + 1; j < positions.size(); ++j)
                if (positions[i].x == positions[j].x && positions[i].y == positions[j].y)
                    throw std::invalid_argument("detectors: positions must be distinct");
    }
};

/// Uniform sampling schedule: `samples_per_year` measurements per year for
/// `duration` years starting at `t_start`.
struct SamplingSchedule {
    double t_start = 0.0;   // [year]
    double duration = 0.0;  // [years]
    int samples_per_year = 0;

    int count() const { return static_cast<int>(std::lround(duration * samples_per_year)); }

    double time_at(int k) const {
        return t_start + static_cast<double>(k) / samples_per_year;
    }

    std::vector<double> times() const {
        std::vector<double> t(count());
        for (int k = 0; k < count(); ++k) t[k] = time_at(k);
        return t;
    }

    void validate() const {
        if (samples_per_year <= 0)
            throw std::invalid_argument("schedule: samples_per_year must be positive");
        if (!(duration > 0.0)) throw std::invalid_argument("schedule: duration must be positive");
        if (count() <= 0) throw std::invalid_argument("schedule: no sample times");
    }
};

} // namespace plume

#endif
