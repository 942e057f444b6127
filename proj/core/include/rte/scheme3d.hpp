#pragma once

#include "rte/grid.hpp"
#include "rte/phase_function.hpp"
#include "rte/transient.hpp"

namespace rte {

/// Sample grid for the sups in the 3D angular condition.
inline constexpr int kThetaSamples = 513;  // includes both poles
inline constexpr int kPhiSamples = 512;

/// dtheta^2 sup|d2/dtheta2 F| + (dphi^2/2) sup|d2/dphi2 F| <= (6/pi^2) mu_star
/// with F(theta, phi) = p(xi, xi'(theta, phi)) sin(theta). The sups run over
/// the sample grid for one grid direction per polar index (the map is
/// invariant under azimuthal rotation of xi), times 1.01. Closed-form
/// derivatives are used when the kernel has a cosine form, central
/// differences otherwise. x-dependent kernels are reported inapplicable.
ConditionResult check_theta_phi_condition(const Grid3D& grid, const PhaseFunction& pf, double mu_star);

/// Same sups for one arbitrary direction xi (unit vector).
struct AngularSups {
    double theta = 0.0;
    double phi = 0.0;
};
AngularSups angular_second_derivative_sups(const PhaseFunction& pf, const std::array<double, 3>& xi);

inline StabilityReport check_stability_3d(const Grid3D& grid, const MediumBounds& bounds, const PhaseFunction& pf) {
    return check_stability<3>(grid, bounds, pf);
}

/// Index of direction (m, n); poles ignore n.
std::size_t direction_index(const Grid3D& grid, int m, int n);

/// dtheta dphi sum_mu sum_nu p(xi_mn, xi_munu) sin(theta_mu), poles excluded.
double spherical_row_sum(const PhaseFunction& pf, const Grid3D& grid, int m, int n, const Point& x = Point{});

}  // namespace rte
