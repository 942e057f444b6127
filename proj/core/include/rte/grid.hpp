#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "rte/inflow.hpp"

namespace rte {

/// Spatial position. Two-dimensional grids leave the third coordinate at 0.
using Point = std::array<double, 3>;

/// One discrete transport direction.
///
/// In 2D `theta` is the angle of xi = (cos theta, sin theta) and `n` its index.
/// In 3D `theta`/`phi` are the polar/azimuthal angles with indices `m`/`n`;
/// each pole is stored once with n = 0.
struct Direction {
    std::array<double, 3> xi{};
    double theta = 0.0;
    double phi = 0.0;
    int m = 0;
    int n = 0;
};

struct Grid2DConfig {
    double L1 = 0.0;
    double L2 = 0.0;
    int M1 = 0;
    int M2 = 0;
    int M = 0;  // directions on the unit circle
    double dt = 0.0;
    double T = 0.0;
};

struct Grid3DConfig {
    double L1 = 0.0;
    double L2 = 0.0;
    double L3 = 0.0;
    int M1 = 0;
    int M2 = 0;
    int M3 = 0;
    int Mtheta = 0;  // polar intervals on [0, pi]
    int Mphi = 0;    // azimuthal intervals on [0, 2pi)
    double dt = 0.0;
    double T = 0.0;
};

/// Rectangular phase-space grid on (0,L1)x...x(0,LD) times the unit sphere.
///
/// Spatial points x_i = i*dx (0 <= i <= M_d along each axis) are stored
/// row-major with the last axis fastest; field data appends the direction
/// index as the innermost dimension. Immutable once built.
template <int D>
class Grid {
    static_assert(D == 2 || D == 3, "only 2D and 3D phase spaces are supported");

public:
    static constexpr int kDim = D;

    explicit Grid(const Grid2DConfig& config) requires(D == 2);
    explicit Grid(const Grid3DConfig& config) requires(D == 3);

    int cells(int axis) const { return cells_[axis]; }
    double length(int axis) const { return lengths_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double dt() const { return dt_; }
    double T() const { return T_; }
    double time(long k) const { return static_cast<double>(k) * dt_; }

    /// 2D: 2pi/M. 3D: pi/Mtheta.
    double dtheta() const { return dtheta_; }
    /// 3D only: 2pi/Mphi (0 in 2D).
    double dphi() const { return dphi_; }
    /// 2D: M. 3D: Mtheta.
    int angular_count() const { return angular_count_; }
    /// 3D: Mphi (0 in 2D).
    int azimuthal_count() const { return azimuthal_count_; }

    std::size_t num_points() const { return num_points_; }
    std::size_t num_directions() const { return directions_.size(); }
    std::size_t size() const { return num_points_ * directions_.size(); }

    std::size_t stride(int axis) const { return stride_[axis]; }
    std::size_t point(const std::array<int, D>& index) const;
    std::array<int, D> point_index(std::size_t p) const;
    Point position(std::size_t p) const;
    bool is_interior(std::size_t p) const;

    /// Flat indices of all points strictly inside the domain, ascending.
    const std::vector<std::size_t>& interior_points() const { return interior_; }

    const std::vector<Direction>& directions() const { return directions_; }
    const Direction& direction(std::size_t n) const { return directions_[n]; }

    /// Trapezoid weight of direction n in the scattering sum
    /// (2D: dtheta; 3D: dtheta*dphi*sin(theta_m), zero at the poles).
    double weight(std::size_t n) const { return weights_[n]; }
    const std::vector<double>& weights() const { return weights_; }

    /// Angle in [0, 2pi) (2D) or [0, pi] (3D) between directions n and nu.
    double scattering_angle(std::size_t n, std::size_t nu) const;

    const InflowSet& inflow() const { return inflow_; }

    /// Number of time steps T/dt. Throws ConfigError unless T/dt is an
    /// integer within 1e-9 relative tolerance.
    long num_steps() const;

private:
    void finish_spatial();

    std::array<double, D> lengths_{};
    std::array<int, D> cells_{};
    std::array<double, D> spacing_{};
    std::array<std::size_t, D> stride_{};
    double dt_ = 0.0;
    double T_ = 0.0;
    double dtheta_ = 0.0;
    double dphi_ = 0.0;
    int angular_count_ = 0;
    int azimuthal_count_ = 0;
    std::size_t num_points_ = 0;
    std::vector<std::size_t> interior_;
    std::vector<Direction> directions_;
    std::vector<double> weights_;
    InflowSet inflow_;
};

using Grid2D = Grid<2>;
using Grid3D = Grid<3>;

template <int D>
using GridPtr = std::shared_ptr<const Grid<D>>;

/// Validates the discretization parameters and precomputes spacings,
/// direction tables and the discrete inflow boundary.
GridPtr<2> build_grid2d(const Grid2DConfig& config);
GridPtr<3> build_grid3d(const Grid3DConfig& config);

/// (cos, sin) of 2*pi*k/N with exact values at multiples of a quarter turn,
/// so axis-aligned directions have exactly zero tangential components.
std::array<double, 2> unit_circle(long k, long N);

extern template class Grid<2>;
extern template class Grid<3>;

}  // namespace rte
