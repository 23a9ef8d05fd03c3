#ifndef PLUME_FORWARD_HPP
#define PLUME_FORWARD_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "plume/kernels.hpp"
#include "plume/types.hpp"

namespace plume {

/// Writes one source's concentration history at a detector into `out`
/// (same length as `times`, which must be ascending).
///
/// For continuous sources the release-time integral is accumulated
/// incrementally across the schedule instead of restarted at every sample.
/// The reflecting kernel is evaluated through its even continuation so the
/// fitting layer can pass trial parameters on either side of the wall.
inline void source_series(const SourceSpec& src, const MediumParams& medium,
                          BoundaryMode boundary, double det_x, double det_y,
                          std::span<const double> times, std::span<double> out) {
    switch (src.kind) {
        case SourceKind::InstantPoint: {
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double dt = times[k] - src.t0;
                out[k] = boundary == BoundaryMode::Infinite
                             ? src.q * green_infinite(det_x - src.x, det_y - src.y, dt, medium)
                             : src.q * detail::green_reflecting_unchecked(det_x, det_y, src.x,
                                                                          src.y, dt, medium);
            }
            return;
        }
        case SourceKind::ExtendedSquare: {
            for (std::size_t k = 0; k < times.size(); ++k)
                out[k] = conc_extended_square({det_x, det_y, times[k]}, src, medium);
            return;
        }
        case SourceKind::ContinuousPoint: {
            const auto integrand = [&](double tau) {
                return boundary == BoundaryMode::Infinite
                           ? green_infinite(det_x - src.x, det_y - src.y, tau, medium)
                           : detail::green_reflecting_unchecked(det_x, det_y, src.x, src.y, tau,
                                                                medium);
            };
            double acc = 0.0;
            double prev_tau = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double tau = times[k] - src.t0;
                if (tau <= 0.0) {
                    out[k] = 0.0;
                    continue;
                }
                acc += integrate_or_throw(integrand, prev_tau, tau);
                prev_tau = tau;
                out[k] = src.q * acc;
            }
            return;
        }
    }
}

/// Noiseless concentration history of a set of sources at one detector.
///
/// This is the single evaluation path shared by data generation and the
/// inversion objective, so a model evaluated at the generating parameters
/// reproduces noiseless data bit-exactly. Per-cell source contributions
/// are summed in value order, which makes the result independent of the
/// ordering of the source list.
inline void forward_series_into(std::span<const SourceSpec> sources, const MediumParams& medium,
                                BoundaryMode boundary, double det_x, double det_y,
                                std::span<const double> times, std::span<double> out,
                                std::vector<double>& scratch) {
    const std::size_t T = times.size();
    const std::size_t S = sources.size();
    if (S == 0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    if (S == 1) {
        source_series(sources[0], medium, boundary, det_x, det_y, times, out);
        return;
    }
    scratch.assign(S * T, 0.0);
    for (std::size_t s = 0; s < S; ++s)
        source_series(sources[s], medium, boundary, det_x, det_y, times,
                      {scratch.data() + s * T, T});
    std::vector<double> cell(S);
    for (std::size_t k = 0; k < T; ++k) {
        bool finite = true;
        for (std::size_t s = 0; s < S; ++s) {
            cell[s] = scratch[s * T + k];
            finite = finite && std::isfinite(cell[s]);
        }
        if (finite) std::sort(cell.begin(), cell.end());
        double sum = 0.0;
        for (double v : cell) sum += v;
        out[k] = sum;
    }
}

inline std::vector<double> forward_series(std::span<const SourceSpec> sources,
                                          const MediumParams& medium, BoundaryMode boundary,
                                          double det_x, double det_y,
                                          std::span<const double> times) {
    std::vector<double> out(times.size(), 0.0);
    std::vector<double> scratch;
    forward_series_into(sources, medium, boundary, det_x, det_y, times, out, scratch);
    return out;
}

} // namespace plume

#endif
