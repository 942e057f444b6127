#include "rte/scheme3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rte {

AngularSups angular_second_derivative_sups(const PhaseFunction& pf, const std::array<double, 3>& xi) {
    const double pi = std::numbers::pi;
    const auto& form = pf.cosine_form();
    AngularSups s;
    auto value_at = [&](double th, double ph) {
        const double u = std::sin(th) * (xi[0] * std::cos(ph) + xi[1] * std::sin(ph)) + xi[2] * std::cos(th);
        return pf(std::acos(std::clamp(u, -1.0, 1.0))) * std::sin(th);
    };
    constexpr double h = 1e-4;
    for (int i = 0; i < kThetaSamples; ++i) {
        const double th = pi * i / (kThetaSamples - 1);
        const double st = std::sin(th), ct = std::cos(th);
        for (int j = 0; j < kPhiSamples; ++j) {
            const double ph = 2.0 * pi * j / kPhiSamples;
            double ftt = 0.0, fpp = 0.0;
            if (form) {
                const double horiz = xi[0] * std::cos(ph) + xi[1] * std::sin(ph);
                const double u = std::clamp(st * horiz + xi[2] * ct, -1.0, 1.0);
                const double ut = ct * horiz - xi[2] * st;
                const double up = st * (xi[1] * std::cos(ph) - xi[0] * std::sin(ph));
                const double upp = -st * horiz;
                const double P = form->value(u), P1 = form->d1(u), P2 = form->d2(u);
                ftt = P2 * ut * ut * st - P1 * u * st + 2.0 * P1 * ut * ct - P * st;
                fpp = (P2 * up * up + P1 * upp) * st;
            } else {
                const double f0 = value_at(th, ph);
                ftt = (value_at(th + h, ph) - 2.0 * f0 + value_at(th - h, ph)) / (h * h);
                fpp = (value_at(th, ph + h) - 2.0 * f0 + value_at(th, ph - h)) / (h * h);
            }
            s.theta = std::max(s.theta, std::abs(ftt));
            s.phi = std::max(s.phi, std::abs(fpp));
        }
    }
    return s;
}

ConditionResult check_theta_phi_condition(const Grid3D& grid, const PhaseFunction& pf, double mu_star) {
    ConditionResult r;
    r.form = "theta_phi";
    r.bound = 6.0 / (std::numbers::pi * std::numbers::pi) * mu_star;
    if (!pf.x_independent()) {
        r.note = "kernel depends on x; the angular sups are not sampled";
        r.margin = r.bound;
        return r;
    }
    r.applicable = true;
    AngularSups sup;
    for (int m = 0; m <= grid.angular_count(); ++m) {
        const auto s = angular_second_derivative_sups(pf, grid.direction(direction_index(grid, m, 0)).xi);
        sup.theta = std::max(sup.theta, s.theta);
        sup.phi = std::max(sup.phi, s.phi);
    }
    const double dth = grid.dtheta(), dph = grid.dphi();
    r.lhs = 1.01 * (dth * dth * sup.theta + 0.5 * dph * dph * sup.phi);
    r.margin = r.bound - r.lhs;
    r.pass = r.lhs <= r.bound;
    r.strict_pass = r.lhs < r.bound;
    return r;
}

std::size_t direction_index(const Grid3D& grid, int m, int n) {
    if (m <= 0) return 0;
    if (m >= grid.angular_count()) return grid.num_directions() - 1;
    const int mphi = grid.azimuthal_count();
    n %= mphi;
    if (n < 0) n += mphi;
    return 1 + static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(mphi) + static_cast<std::size_t>(n);
}

double spherical_row_sum(const PhaseFunction& pf, const Grid3D& grid, int m, int n, const Point& x) {
    return scattering_row_sum<3>(pf, grid, direction_index(grid, m, n), x);
}

}  // namespace rte
