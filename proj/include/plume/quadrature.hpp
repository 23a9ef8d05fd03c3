#ifndef PLUME_QUADRATURE_HPP
#define PLUME_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace plume {

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = true;
};

/// Thrown when adaptive refinement hits the depth cap before reaching the
/// requested tolerance. Carries the best estimate and the error bound
/// achieved so callers can still inspect the result.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double estimate, double error_bound)
        : std::runtime_error("adaptive quadrature did not converge (estimate " +
                             std::to_string(estimate) + ", error bound " +
                             std::to_string(error_bound) + ")"),
          estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 20;
};

namespace detail {

template <class F>
QuadratureResult simpson_adaptive(const F& f, double a, double b, double fa, double fm,
                                  double fb, double whole, double abs_tol, double rel_tol,
                                  int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double split = left + right;
    const double err = (split - whole) / 15.0; // Richardson estimate
    const double refined = split + err;
    const double tol = std::max(abs_tol, rel_tol * std::fabs(refined));
    if (std::fabs(err) <= tol || depth >= max_depth) {
        return {refined, std::fabs(err), std::fabs(err) <= tol};
    }
    QuadratureResult l = simpson_adaptive(f, a, m, fa, flm, fm, left, 0.5 * abs_tol,
                                          rel_tol, depth + 1, max_depth);
    QuadratureResult r = simpson_adaptive(f, m, b, fm, frm, fb, right, 0.5 * abs_tol,
                                          rel_tol, depth + 1, max_depth);
    return {l.value + r.value, l.error_bound + r.error_bound, l.converged && r.converged};
}

} // namespace detail

/// Adaptive Simpson integration of f over [a, b]. Subdivides until the
/// Richardson error estimate meets max(abs_tol, rel_tol*|I|) on every
/// panel or the depth cap is reached; the returned result reports the
/// accumulated error bound either way.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    const QuadratureOptions& opts = {}) {
    if (a == b) return {0.0, 0.0, true};
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_adaptive(f, a, b, fa, fm, fb, whole, opts.abs_tol, opts.rel_tol,
                                    0, opts.max_depth);
}

/// Same as integrate_adaptive but throws QuadratureError when the depth
/// cap prevented convergence.
template <class F>
double integrate_or_throw(const F& f, double a, double b, const QuadratureOptions& opts = {}) {
    const QuadratureResult r = integrate_adaptive(f, a, b, opts);
    if (!r.converged) throw QuadratureError(r.value, r.error_bound);
    return r.value;
}

} // namespace plume

#endif
