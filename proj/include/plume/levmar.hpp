#ifndef PLUME_LEVMAR_HPP
#define PLUME_LEVMAR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "plume/numeric.hpp"

namespace plume {

struct LevMarOptions {
    int max_iterations = 500;
    double rel_obj_tol = 1e-10;  // relative residual-change convergence
    double grad_tol = 1e-12;     // infinity norm of the objective gradient
    double lambda_init = 1.0;
    double lambda_max = 1e14;
    double step_max = 2.0;       // trust-region bound on the step inf-norm
    std::function<void(double)> on_accept; // observer for accepted objectives
};

struct LevMarResult {
    std::vector<double> theta;
    double objective = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

/// Levenberg-Marquardt with diagonal-scaled damping and Nielsen's
/// gain-ratio lambda control.
///
/// `residual_fn(theta, r)` fills the residual vector; `jacobian_fn(theta, J)`
/// fills the dense Jacobian dr/dtheta. Steps are accepted only when they
/// strictly decrease the objective; failed solves, non-finite trials and
/// runaway steps escalate the damping instead of aborting. The damping
/// diagonal is floored relative to its largest entry so directions with
/// vanishing sensitivity (a dead source's coordinates) cannot produce
/// unbounded steps.
template <class ResidualFn, class JacobianFn>
LevMarResult levenberg_marquardt(std::vector<double> theta, ResidualFn&& residual_fn,
                                 JacobianFn&& jacobian_fn, const LevMarOptions& opts = {}) {
    const int dim = static_cast<int>(theta.size());
    std::vector<double> r, r_trial;
    residual_fn(theta, r);
    double obj = pairwise_sum_squares(r);
    LevMarResult out;
    out.theta = theta;
    out.objective = obj;
    if (!std::isfinite(obj)) return out; // caller decides how to report a bad start

    Eigen::MatrixXd J;
    Eigen::VectorXd g(dim);
    double lambda = opts.lambda_init;
    double nu = 2.0;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        jacobian_fn(theta, J);
        const Eigen::Map<const Eigen::VectorXd> rv(r.data(), r.size());
        g.noalias() = J.transpose() * rv;

        // gradient of sum r^2 is 2 J^T r
        if ((2.0 * g).lpNorm<Eigen::Infinity>() < opts.grad_tol) {
            out.converged = true;
            break;
        }

        Eigen::MatrixXd A = J.transpose() * J;
        Eigen::VectorXd diag = A.diagonal();
        const double diag_max = diag.maxCoeff();
        const double diag_floor = diag_max > 0.0 ? 1e-8 * diag_max : 1.0;
        for (int j = 0; j < dim; ++j)
            if (!(diag[j] > diag_floor)) diag[j] = diag_floor;

        bool accepted = false;
        while (lambda <= opts.lambda_max) {
            Eigen::MatrixXd Ad = A;
            Ad.diagonal() += lambda * diag;
            const Eigen::LDLT<Eigen::MatrixXd> solver(Ad);
            if (solver.info() == Eigen::Success) {
                const Eigen::VectorXd step = solver.solve(-g);
                if (step.allFinite() && step.lpNorm<Eigen::Infinity>() <= opts.step_max) {
                    std::vector<double> trial(theta);
                    for (int j = 0; j < dim; ++j) trial[j] += step[j];
                    residual_fn(trial, r_trial);
                    const double obj_trial = pairwise_sum_squares(r_trial);
                    if (std::isfinite(obj_trial) && obj_trial < obj) {
                        const double drop = obj - obj_trial;
                        // predicted decrease of the damped quadratic model
                        const double predicted = step.dot(lambda * diag.cwiseProduct(step) - g);
                        const double rho = predicted > 0.0 ? drop / predicted : 1.0;
                        const double shrink =
                            std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3.0));
                        lambda = std::max(lambda * shrink, 1e-12);
                        nu = 2.0;
                        theta.swap(trial);
                        r.swap(r_trial);
                        const double rel = drop / std::max(obj, std::numeric_limits<double>::min());
                        obj = obj_trial;
                        accepted = true;
                        out.iterations = iter + 1;
                        if (opts.on_accept) opts.on_accept(obj);
                        if (rel < opts.rel_obj_tol || obj == 0.0) out.converged = true;
                        break;
                    }
                }
            }
            lambda *= nu;
            nu *= 2.0;
        }
        if (!accepted) break; // damping exhausted; report the best point found
        if (out.converged) break;
    }
    out.theta = theta;
    out.objective = obj;
    return out;
}

} // namespace plume

#endif
