#ifndef PLUME_MODEL_HPP
#define PLUME_MODEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "plume/forward.hpp"
#include "plume/numeric.hpp"
#include "plume/parameters.hpp"
#include "plume/scenario.hpp"

namespace plume {

/// Residual evaluation r = model - V over all (detector, time) cells, with
/// analytic parameter Jacobians for the closed-form kernels. Residual
/// values go through the same forward-series path as data generation, so
/// the perfect-fit residual is exactly zero on noiseless data.
class ResidualModel {
public:
    ResidualModel(const ObservationMatrix& obs, const ModelSpec& spec)
        : obs_(&obs), spec_(spec), times_(obs.schedule.times()) {}

    const ModelSpec& spec() const { return spec_; }
    int residual_dim() const {
        return static_cast<int>(obs_->detector_count()) * obs_->sample_count();
    }

    bool has_analytic_jacobian() const { return spec_.kind != SourceKind::ContinuousPoint; }

    /// r[n*T + k] = model(n, k) - V[n][k]
    void residuals(const ParameterVector& p, std::vector<double>& r) const {
        const int T = obs_->sample_count();
        const std::size_t N = obs_->detector_count();
        r.assign(static_cast<std::size_t>(T) * N, 0.0);
        const auto sources = p.source_specs();
        for (std::size_t n = 0; n < N; ++n) {
            std::span<double> row(r.data() + n * T, static_cast<std::size_t>(T));
            forward_series_into(sources, p.medium, spec_.boundary,
                                obs_->detectors.positions[n].x, obs_->detectors.positions[n].y,
                                times_, row, scratch_);
            for (int k = 0; k < T; ++k) row[k] -= obs_->at(n, k);
        }
    }

    /// Sum of squared residuals with pairwise accumulation.
    double objective(const ParameterVector& p) const {
        std::vector<double> r;
        residuals(p, r);
        return pairwise_sum_squares(r);
    }

    /// Physical-space Jacobian dr/dp, residual-major. Only for kinds with
    /// closed-form kernels; the continuous kind differentiates by finite
    /// differences at the solver level.
    void jacobian(const ParameterVector& p, Eigen::MatrixXd& J) const {
        const int T = obs_->sample_count();
        const std::size_t N = obs_->detector_count();
        const int bs = p.spec.block_size();
        J.setZero(residual_dim(), p.dim());
        const int medium_col = p.source_count() * bs;
        for (std::size_t n = 0; n < N; ++n) {
            const double xd = obs_->detectors.positions[n].x;
            const double yd = obs_->detectors.positions[n].y;
            for (int k = 0; k < T; ++k) {
                const int row = static_cast<int>(n) * T + k;
                const double tau = times_[k] - spec_.t0;
                if (tau <= 0.0) continue;
                for (int s = 0; s < p.source_count(); ++s)
                    add_term_gradient(p, s, xd, yd, tau, row, s * bs, medium_col, J);
            }
        }
    }

private:
    void add_term_gradient(const ParameterVector& p, int s, double xd, double yd, double tau,
                           int row, int col0, int medium_col, Eigen::MatrixXd& J) const {
        const auto& b = p.sources[s];
        const MediumParams& m = p.medium;
        if (spec_.kind == SourceKind::InstantPoint) {
            const double pref = 1.0 / (4.0 * kPi * std::sqrt(m.D_x * m.D_y) * tau);
            const double ax = (xd - b.x) - m.u_x * tau;
            const double ex = std::exp(-ax * ax / (4.0 * m.D_x * tau));
            if (spec_.boundary == BoundaryMode::Infinite) {
                const double by = yd - b.y;
                const double ey = std::exp(-by * by / (4.0 * m.D_y * tau));
                const double g = pref * ex * ey;
                const double term = b.q * g;
                J(row, col0 + 0) += term * ax / (2.0 * m.D_x * tau);
                J(row, col0 + 1) += term * by / (2.0 * m.D_y * tau);
                J(row, col0 + 2) += g;
                J(row, medium_col + 0) += term * ax / (2.0 * m.D_x);
                J(row, medium_col + 1) +=
                    term * (-0.5 / m.D_x + ax * ax / (4.0 * m.D_x * m.D_x * tau));
                J(row, medium_col + 2) +=
                    term * (-0.5 / m.D_y + by * by / (4.0 * m.D_y * m.D_y * tau));
            } else {
                const double b1 = yd - b.y;
                const double b2 = yd + b.y;
                const double e1 = std::exp(-b1 * b1 / (4.0 * m.D_y * tau));
                const double e2 = std::exp(-b2 * b2 / (4.0 * m.D_y * tau));
                const double g = pref * ex * (e1 + e2);
                const double term = b.q * g;
                J(row, col0 + 0) += term * ax / (2.0 * m.D_x * tau);
                J(row, col0 + 1) +=
                    b.q * pref * ex * (e1 * b1 - e2 * b2) / (2.0 * m.D_y * tau);
                J(row, col0 + 2) += g;
                J(row, medium_col + 0) += term * ax / (2.0 * m.D_x);
                J(row, medium_col + 1) +=
                    term * (-0.5 / m.D_x + ax * ax / (4.0 * m.D_x * m.D_x * tau));
                J(row, medium_col + 2) +=
                    b.q * pref * ex *
                    (-(e1 + e2) * 0.5 / m.D_y +
                     (e1 * b1 * b1 + e2 * b2 * b2) / (4.0 * m.D_y * m.D_y * tau));
            }
            return;
        }
        // ExtendedSquare (infinite medium by precondition)
        static constexpr double kTwoOverSqrtPi = 1.1283791670955125739;
        const double sx = 2.0 * std::sqrt(m.D_x * tau);
        const double sy = 2.0 * std::sqrt(m.D_y * tau);
        const double cx = (xd - b.x) - m.u_x * tau;
        const double cy = yd - b.y;
        const double zx1 = (cx + b.d) / sx, zx2 = (cx - b.d) / sx;
        const double zy1 = (cy + b.d) / sy, zy2 = (cy - b.d) / sy;
        const double exp_x1 = std::exp(-zx1 * zx1), exp_x2 = std::exp(-zx2 * zx2);
        const double exp_y1 = std::exp(-zy1 * zy1), exp_y2 = std::exp(-zy2 * zy2);
        const double FX = erfc(zx1) - erfc(zx2);
        const double FY = erfc(zy1) - erfc(zy2);
        const double gx = kTwoOverSqrtPi * (exp_x1 - exp_x2); // -sx * dFX/dcx
        const double gy = kTwoOverSqrtPi * (exp_y1 - exp_y2);
        const double hx = kTwoOverSqrtPi * (exp_x1 + exp_x2); // -sx * dFX/dd
        const double hy = kTwoOverSqrtPi * (exp_y1 + exp_y2);
        const double q4 = 0.25 * b.q;
        J(row, col0 + 0) += q4 * (gx / sx) * FY;              // d/dx_s
        J(row, col0 + 1) += q4 * FX * (gy / sy);              // d/dy_s
        J(row, col0 + 2) += 0.25 * FX * FY;                   // d/dq
        J(row, col0 + 3) += q4 * (-(hx / sx) * FY - FX * (hy / sy)); // d/dd
        J(row, medium_col + 0) += q4 * (gx * tau / sx) * FY;  // d/du
        J(row, medium_col + 1) +=
            q4 * FY * kTwoOverSqrtPi * (zx1 * exp_x1 - zx2 * exp_x2) / (2.0 * m.D_x);
        J(row, medium_col + 2) +=
            q4 * FX * kTwoOverSqrtPi * (zy1 * exp_y1 - zy2 * exp_y2) / (2.0 * m.D_y);
    }

    const ObservationMatrix* obs_;
    ModelSpec spec_;
    std::vector<double> times_;
    mutable std::vector<double> scratch_;
};

/// Eq.-style reconstruction error of a parameter vector against data.
inline double objective(const ParameterVector& p, const ObservationMatrix& obs) {
    return ResidualModel(obs, p.spec).objective(p);
}

} // namespace plume

#endif
