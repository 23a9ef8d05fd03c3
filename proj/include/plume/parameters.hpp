#ifndef PLUME_PARAMETERS_HPP
#define PLUME_PARAMETERS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "plume/rng.hpp"
#include "plume/types.hpp"

namespace plume {

/// Smooth reparameterization used to keep positive-constrained parameters
/// (q, D_x, D_y, d) positive inside an unconstrained solver.
inline double softplus(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

inline double softplus_derivative(double t) { return 1.0 / (1.0 + std::exp(-t)); }

/// Inverse of softplus for v > 0.
inline double inv_softplus(double v) {
    if (v > 40.0) return v; // softplus is the identity to double precision here
    return std::log(std::expm1(v));
}

/// Values below this are clamped before transforming, so a zero strength
/// still maps to a finite (if extreme) unconstrained coordinate.
inline constexpr double kMinPositiveParam = 1e-13;

/// Candidate model kind, activation time and boundary handling shared by a
/// whole inversion.
struct ModelSpec {
    SourceKind kind = SourceKind::InstantPoint;
    double t0 = 0.0;
    BoundaryMode boundary = BoundaryMode::Infinite;

    /// parameters per source block: (x, y, q) plus d for extended squares
    int block_size() const { return kind == SourceKind::ExtendedSquare ? 4 : 3; }
};

/// Full unknown vector of one inversion: per-source blocks plus the three
/// medium parameters. The activation time is a known scenario constant.
struct ParameterVector {
    struct SourceBlock {
        double x = 0.0;
        double y = 0.0;
        double q = 0.0;
        double d = 0.0; // ExtendedSquare only
    };

    ModelSpec spec;
    std::vector<SourceBlock> sources;
    MediumParams medium{0.0, 1e-3, 1e-3};

    int source_count() const { return static_cast<int>(sources.size()); }
    int dim() const { return source_count() * spec.block_size() + 3; }

    void validate() const {
        medium.validate();
        if (sources.empty()) throw std::invalid_argument("parameters: no source blocks");
        for (const auto& s : sources) {
            if (!(s.q >= 0.0)) throw std::invalid_argument("parameters: q must be >= 0");
            if (spec.kind == SourceKind::ExtendedSquare && !(s.d > 0.0))
                throw std::invalid_argument("parameters: d must be > 0");
        }
    }

    /// View of one source as a SourceSpec for kernel evaluation.
    SourceSpec source_spec(int s) const {
        const SourceBlock& b = sources[s];
        return {spec.kind, b.x, b.y, b.q, b.d, spec.t0};
    }

    std::vector<SourceSpec> source_specs() const {
        std::vector<SourceSpec> out;
        out.reserve(sources.size());
        for (int s = 0; s < source_count(); ++s) out.push_back(source_spec(s));
        return out;
    }

    /// Pack into the unconstrained solver space (softplus-transformed
    /// positives). Layout: [x, y, q~, (d~)] per source, then [u, Dx~, Dy~].
    std::vector<double> pack() const {
        std::vector<double> theta;
        theta.reserve(dim());
        for (const auto& s : sources) {
            theta.push_back(s.x);
            theta.push_back(s.y);
            theta.push_back(inv_softplus(std::max(s.q, kMinPositiveParam)));
            if (spec.kind == SourceKind::ExtendedSquare)
                theta.push_back(inv_softplus(std::max(s.d, kMinPositiveParam)));
        }
        theta.push_back(medium.u_x);
        theta.push_back(inv_softplus(std::max(medium.D_x, kMinPositiveParam)));
        theta.push_back(inv_softplus(std::max(medium.D_y, kMinPositiveParam)));
        return theta;
    }

    /// Inverse of pack().
    void unpack(const std::vector<double>& theta) {
        const int bs = spec.block_size();
        const int n = (static_cast<int>(theta.size()) - 3) / bs;
        sources.resize(n);
        int j = 0;
        for (auto& s : sources) {
            s.x = theta[j++];
            s.y = theta[j++];
            s.q = softplus(theta[j++]);
            if (spec.kind == SourceKind::ExtendedSquare) s.d = softplus(theta[j++]);
        }
        medium.u_x = theta[j++];
        medium.D_x = softplus(theta[j++]);
        medium.D_y = softplus(theta[j++]);
    }

    /// d(physical)/d(theta) for every packed coordinate, used to chain
    /// physical-space Jacobians into solver space.
    std::vector<double> pack_scale(const std::vector<double>& theta) const {
        std::vector<double> scale(theta.size(), 1.0);
        const int bs = spec.block_size();
        for (int s = 0; s < source_count(); ++s) {
            scale[s * bs + 2] = softplus_derivative(theta[s * bs + 2]);
            if (spec.kind == SourceKind::ExtendedSquare)
                scale[s * bs + 3] = softplus_derivative(theta[s * bs + 3]);
        }
        const int m = source_count() * bs;
        scale[m + 1] = softplus_derivative(theta[m + 1]);
        scale[m + 2] = softplus_derivative(theta[m + 2]);
        return scale;
    }
};

/// Uniform sampling ranges for multistart initial guesses.
struct InitGuessDistribution {
    struct Range {
        double lo, hi;
    };
    Range x{-1.0, 1.0};
    Range y{-1.0, 1.0};
    Range q{0.01, 2.0};
    Range u{0.001, 0.2};
    Range Dx{1e-4, 0.05};
    Range Dy{1e-4, 0.05};
    Range d{0.01, 0.5};

    void validate() const {
        for (const Range* r : {&x, &y, &q, &u, &Dx, &Dy, &d})
            if (!(r->lo < r->hi)) throw std::invalid_argument("init ranges must be nonempty");
        for (const Range* r : {&q, &Dx, &Dy, &d})
            if (!(r->lo > 0.0))
                throw std::invalid_argument("positive-parameter ranges need lo > 0");
    }

    /// Default coordinate box: the detector bounding box inflated by 50%
    /// (a quarter of the width added on each side). The remaining ranges
    /// keep their documented defaults.
    static InitGuessDistribution for_detectors(const DetectorArray& det) {
        InitGuessDistribution dist;
        double x0 = det.positions[0].x, x1 = x0, y0 = det.positions[0].y, y1 = y0;
        for (const auto& p : det.positions) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        const double px = 0.25 * std::max(x1 - x0, 0.2);
        const double py = 0.25 * std::max(y1 - y0, 0.2);
        dist.x = {x0 - px, x1 + px};
        dist.y = {y0 - py, y1 + py};
        return dist;
    }

    /// Draw a full i-source parameter vector.
    ParameterVector sample(const ModelSpec& spec, int i, SplitMix64& rng) const {
        ParameterVector p;
        p.spec = spec;
        p.sources.resize(i);
        for (auto& s : p.sources) {
            s.x = rng.uniform(x.lo, x.hi);
            s.y = rng.uniform(y.lo, y.hi);
            s.q = rng.uniform(q.lo, q.hi);
            if (spec.kind == SourceKind::ExtendedSquare) s.d = rng.uniform(d.lo, d.hi);
        }
        p.medium.u_x = rng.uniform(u.lo, u.hi);
        p.medium.D_x = rng.uniform(Dx.lo, Dx.hi);
        p.medium.D_y = rng.uniform(Dy.lo, Dy.hi);
        return p;
    }
};

} // namespace plume

#endif
