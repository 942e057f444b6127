#pragma once

// Independent reference implementations. They index the grid by (i, j[, l])
// and never touch the library's precomputed stencils or scatter matrix.

#include <cmath>
#include <numbers>
#include <vector>

#include "rte/field.hpp"
#include "rte/grid.hpp"
#include "rte/medium.hpp"
#include "rte/phase_function.hpp"

namespace rte::testing {

/// Upwind sum written out quadrant by quadrant.
inline double naive_B_2d(const Field<2>& f, int i, int j, std::size_t n) {
    const auto& g = f.grid();
    const double x1 = g.direction(n).xi[0], x2 = g.direction(n).xi[1];
    const double h1 = g.spacing(0), h2 = g.spacing(1);
    // a zero weight must not touch its neighbor: tangential neighbors are outflow
    auto I = [&](int a, int b) { return f(g.point({a, b}), n); };
    auto t = [&](double w, int a, int b) { return w == 0.0 ? 0.0 : w * I(a, b); };
    double s = 0.0;
    if (x1 >= 0.0 && x2 >= 0.0) {
        s = t(x1 / h1, i - 1, j) + t(x2 / h2, i, j - 1);
    } else if (x1 < 0.0 && x2 >= 0.0) {
        s = t(-x1 / h1, i + 1, j) + t(x2 / h2, i, j - 1);
    } else if (x1 < 0.0 && x2 < 0.0) {
        s = t(-x1 / h1, i + 1, j) + t(-x2 / h2, i, j + 1);
    } else {
        s = t(x1 / h1, i - 1, j) + t(-x2 / h2, i, j + 1);
    }
    return s;
}

/// Six sign cases, one per axis direction.
inline double naive_B_3d(const Field<3>& f, int i, int j, int l, std::size_t n) {
    const auto& g = f.grid();
    const auto& xi = g.direction(n).xi;
    auto I = [&](int a, int b, int c) { return f(g.point({a, b, c}), n); };
    double s = 0.0;
    if (xi[0] > 0.0) s += xi[0] / g.spacing(0) * I(i - 1, j, l);
    if (xi[0] < 0.0) s += -xi[0] / g.spacing(0) * I(i + 1, j, l);
    if (xi[1] > 0.0) s += xi[1] / g.spacing(1) * I(i, j - 1, l);
    if (xi[1] < 0.0) s += -xi[1] / g.spacing(1) * I(i, j + 1, l);
    if (xi[2] > 0.0) s += xi[2] / g.spacing(2) * I(i, j, l - 1);
    if (xi[2] < 0.0) s += -xi[2] / g.spacing(2) * I(i, j, l + 1);
    return s;
}

inline double naive_angle(const Direction& a, const Direction& b) {
    const double d = a.xi[0] * b.xi[0] + a.xi[1] * b.xi[1] + a.xi[2] * b.xi[2];
    return std::acos(std::max(-1.0, std::min(1.0, d)));
}

/// mu_s(x) * sum_nu w_nu p(x; angle) I_nu, double loop.
template <int D>
double naive_K(const Field<D>& f, const PhaseFunction& pf, double mu_s, std::size_t p, std::size_t n) {
    const auto& g = f.grid();
    const Point x = g.position(p);
    double s = 0.0;
    for (std::size_t nu = 0; nu < g.num_directions(); ++nu) {
        double w = 0.0;
        if constexpr (D == 2) {
            w = 2.0 * std::numbers::pi / static_cast<double>(g.num_directions());
        } else {
            const auto& d = g.direction(nu);
            const bool pole = d.m == 0 || d.m == g.angular_count();
            w = pole ? 0.0 : g.dtheta() * g.dphi() * std::sin(d.theta);
        }
        s += w * pf(x, naive_angle(g.direction(n), g.direction(nu))) * f(p, nu);
    }
    return mu_s * s;
}

inline double rate(const Grid<2>& g, std::size_t n) {
    return std::abs(g.direction(n).xi[0]) / g.spacing(0) + std::abs(g.direction(n).xi[1]) / g.spacing(1);
}
inline double rate(const Grid<3>& g, std::size_t n) {
    const auto& xi = g.direction(n).xi;
    return std::abs(xi[0]) / g.spacing(0) + std::abs(xi[1]) / g.spacing(1) + std::abs(xi[2]) / g.spacing(2);
}

}  // namespace rte::testing
