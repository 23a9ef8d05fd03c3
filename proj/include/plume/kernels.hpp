#ifndef PLUME_KERNELS_HPP
#define PLUME_KERNELS_HPP

#include <cmath>
#include <stdexcept>

#include "plume/quadrature.hpp"
#include "plume/special.hpp"
#include "plume/types.hpp"

namespace plume {

inline constexpr double kPi = 3.14159265358979323846;

/// Free-space Green's function of the 2D advection-dispersion equation,
/// evaluated at separation (dx, dy) and elapsed time dt [1/km^2].
/// Exactly zero for dt <= 0 (causality).
inline double green_infinite(double dx, double dy, double dt, const MediumParams& m) {
    if (dt <= 0.0) return 0.0;
    const double ax = dx - m.u_x * dt;
    const double ex = -ax * ax / (4.0 * m.D_x * dt);
    const double ey = -dy * dy / (4.0 * m.D_y * dt);
    return std::exp(ex) * std::exp(ey) / (4.0 * kPi * std::sqrt(m.D_x * m.D_y) * dt);
}

namespace detail {

/// Image-source sum without the half-space domain check. The expression
/// is even in both y and y_s, which the fitting layer relies on when trial
/// parameters wander across the wall.
inline double green_reflecting_unchecked(double x, double y, double x_s, double y_s, double dt,
                                         const MediumParams& m) {
    if (dt <= 0.0) return 0.0;
    const double ax = (x - x_s) - m.u_x * dt;
    const double ex = std::exp(-ax * ax / (4.0 * m.D_x * dt));
    const double b1 = y - y_s;
    const double b2 = y + y_s;
    const double ey = std::exp(-b1 * b1 / (4.0 * m.D_y * dt)) +
                      std::exp(-b2 * b2 / (4.0 * m.D_y * dt));
    return ex * ey / (4.0 * kPi * std::sqrt(m.D_x * m.D_y) * dt);
}

} // namespace detail

/// Green's function for the half-space y >= 0 with a zero-flux (reflecting)
/// boundary at y = 0, built from an image source. Requires y, y_s >= 0.
inline double green_reflecting(double x, double y, double x_s, double y_s, double dt,
                               const MediumParams& m) {
    if (y < 0.0 || y_s < 0.0)
        throw std::domain_error("green_reflecting: y and y_s must be >= 0");
    return detail::green_reflecting_unchecked(x, y, x_s, y_s, dt, m);
}

/// Concentration from an instantaneous point release [mg/L].
inline double conc_instant_point(const SpaceTimePoint& p, const SourceSpec& src,
                                 const MediumParams& m, BoundaryMode boundary) {
    if (src.kind != SourceKind::InstantPoint)
        throw std::invalid_argument("conc_instant_point: source kind mismatch");
    const double dt = p.t - src.t0;
    if (boundary == BoundaryMode::Infinite)
        return src.q * green_infinite(p.x - src.x, p.y - src.y, dt, m);
    return src.q * green_reflecting(p.x, p.y, src.x, src.y, dt, m);
}

/// Concentration from an instantaneous square source of half-width d and
/// strength density q, infinite medium only [mg/L]. Closed form: the
/// Green's function integrated over the square support collapses to a
/// product of erfc differences per axis.
inline double conc_extended_square(const SpaceTimePoint& p, const SourceSpec& src,
                                   const MediumParams& m) {
    if (src.kind != SourceKind::ExtendedSquare)
        throw std::invalid_argument("conc_extended_square: source kind mismatch");
    const double dt = p.t - src.t0;
    if (dt <= 0.0) return 0.0;
    const double sx = 2.0 * std::sqrt(m.D_x * dt);
    const double sy = 2.0 * std::sqrt(m.D_y * dt);
    const double cx = p.x - src.x - m.u_x * dt;
    const double cy = p.y - src.y;
    const double fx = erfc((cx + src.d) / sx) - erfc((cx - src.d) / sx);
    const double fy = erfc((cy + src.d) / sy) - erfc((cy - src.d) / sy);
    return 0.25 * src.q * fx * fy;
}

/// Concentration from a point source releasing at constant rate q since t0
/// [mg/L]. The release-time integral is transformed to elapsed time
/// tau = t - t' and evaluated by adaptive quadrature on (0, t - t0]; the
/// integrand's 1/tau * exp(-c/tau) endpoint vanishes for any off-source
/// point. Throws QuadratureError if refinement hits the depth cap.
inline double conc_continuous_point(const SpaceTimePoint& p, const SourceSpec& src,
                                    const MediumParams& m, BoundaryMode boundary,
                                    const QuadratureOptions& opts = {}) {
    if (src.kind != SourceKind::ContinuousPoint)
        throw std::invalid_argument("conc_continuous_point: source kind mismatch");
    const double span = p.t - src.t0;
    if (span <= 0.0) return 0.0;
    const auto integrand = [&](double tau) {
        return boundary == BoundaryMode::Infinite
                   ? green_infinite(p.x - src.x, p.y - src.y, tau, m)
                   : green_reflecting(p.x, p.y, src.x, src.y, tau, m);
    };
    return src.q * integrate_or_throw(integrand, 0.0, span, opts);
}

} // namespace plume

#endif
