#ifndef PLUME_TESTS_ORACLES_HPP
#define PLUME_TESTS_ORACLES_HPP

// Independent numerical oracles used by the test suites. Everything here
// is deliberately written without reference to the library's kernel
// implementations so that agreement between the two is meaningful.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "plume/types.hpp"

namespace oracles {

/// Composite Simpson rule with a fixed (even) panel count.
inline double composite_simpson(const std::function<double(double)>& f, double a, double b,
                                int panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double odd = 0.0, even = 0.0;
    for (int k = 1; k < panels; k += 2) odd += f(a + k * h);
    for (int k = 2; k < panels; k += 2) even += f(a + k * h);
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

/// Tensor-product composite Simpson over a rectangle.
inline double simpson_2d(const std::function<double(double, double)>& f, double ax, double bx,
                         double ay, double by, int nx, int ny) {
    auto inner = [&](double y) {
        return composite_simpson([&](double x) { return f(x, y); }, ax, bx, nx);
    };
    return composite_simpson(inner, ay, by, ny);
}

/// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration on the
/// Legendre recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

/// 2D Gauss-Legendre quadrature of f over [ax,bx] x [ay,by].
inline double gauss_legendre_2d(const std::function<double(double, double)>& f, double ax,
                                double bx, double ay, double by, int n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double mx = 0.5 * (bx - ax), cx = 0.5 * (ax + bx);
    const double my = 0.5 * (by - ay), cy = 0.5 * (ay + by);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sum += w[i] * w[j] * f(cx + mx * x[i], cy + my * x[j]);
    return sum * mx * my;
}

/// Explicit finite-difference integration of the 2D advection-dispersion
/// equation (central differences in space, forward Euler in time) on a
/// uniform grid with homogeneous Dirichlet edges. The grid owns its
/// coordinate axes; `state` is row-major [iy * nx + ix].
struct FdGrid {
    double x0, y0, dx, dy;
    int nx, ny;
    std::vector<double> state;

    double x_at(int i) const { return x0 + i * dx; }
    double y_at(int j) const { return y0 + j * dy; }
    double& at(int ix, int iy) { return state[static_cast<std::size_t>(iy) * nx + ix]; }
    double at(int ix, int iy) const { return state[static_cast<std::size_t>(iy) * nx + ix]; }
};

inline void fd_advance(FdGrid& g, const plume::MediumParams& m, double t_span) {
    const double dt_stab =
        1.0 / (2.0 * m.D_x / (g.dx * g.dx) + 2.0 * m.D_y / (g.dy * g.dy));
    const int steps = std::max(1, static_cast<int>(std::ceil(t_span / (0.4 * dt_stab))));
    const double dt = t_span / steps;
    std::vector<double> next(g.state.size(), 0.0);
    const double cxx = m.D_x * dt / (g.dx * g.dx);
    const double cyy = m.D_y * dt / (g.dy * g.dy);
    const double cadv = m.u_x * dt / (2.0 * g.dx);
    for (int s = 0; s < steps; ++s) {
        for (int iy = 1; iy < g.ny - 1; ++iy) {
            for (int ix = 1; ix < g.nx - 1; ++ix) {
                const double c = g.at(ix, iy);
                const double lap = cxx * (g.at(ix + 1, iy) - 2.0 * c + g.at(ix - 1, iy)) +
                                   cyy * (g.at(ix, iy + 1) - 2.0 * c + g.at(ix, iy - 1));
                const double adv = cadv * (g.at(ix + 1, iy) - g.at(ix - 1, iy));
                next[static_cast<std::size_t>(iy) * g.nx + ix] = c + lap - adv;
            }
        }
        g.state.swap(next);
    }
}

} // namespace oracles

#endif
