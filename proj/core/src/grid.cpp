#include "rte/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rte/error.hpp"

namespace rte {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(field, "must be a positive finite number, got " + std::to_string(value));
    }
}

void require_count(int value, const char* field) {
    if (value < 1) {
        throw ConfigError(field, "must be a positive integer, got " + std::to_string(value));
    }
}

}  // namespace

std::array<double, 2> unit_circle(long k, long N) {
    k %= N;
    if (k < 0) k += N;
    if ((4 * k) % N == 0) {
        switch ((4 * k) / N) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N);
    return {std::cos(a), std::sin(a)};
}

template <int D>
Grid<D>::Grid(const Grid2DConfig& c) requires(D == 2) {
    require_positive(c.L1, "grid.L1");
    require_positive(c.L2, "grid.L2");
    require_count(c.M1, "grid.M1");
    require_count(c.M2, "grid.M2");
    require_count(c.M, "grid.M");
    require_positive(c.dt, "grid.dt");
    require_positive(c.T, "grid.T");
    if (c.T < c.dt) throw ConfigError("grid.T", "final time must be at least one time step");

    lengths_ = {c.L1, c.L2};
    cells_ = {c.M1, c.M2};
    dt_ = c.dt;
    T_ = c.T;
    angular_count_ = c.M;
    dtheta_ = 2.0 * std::numbers::pi / c.M;
    finish_spatial();

    directions_.resize(static_cast<std::size_t>(c.M));
    weights_.assign(static_cast<std::size_t>(c.M), dtheta_);
    for (int n = 0; n < c.M; ++n) {
        auto [cs, sn] = unit_circle(n, c.M);
        auto& d = directions_[static_cast<std::size_t>(n)];
        d.xi = {cs, sn, 0.0};
        d.theta = n * dtheta_;
        d.n = n;
    }
    inflow_ = classify_inflow(*this);
}

template <int D>
Grid<D>::Grid(const Grid3DConfig& c) requires(D == 3) {
    require_positive(c.L1, "grid.L1");
    require_positive(c.L2, "grid.L2");
    require_positive(c.L3, "grid.L3");
    require_count(c.M1, "grid.M1");
    require_count(c.M2, "grid.M2");
    require_count(c.M3, "grid.M3");
    require_count(c.Mtheta, "grid.Mtheta");
    require_count(c.Mphi, "grid.Mphi");
    require_positive(c.dt, "grid.dt");
    require_positive(c.T, "grid.T");
    if (c.T < c.dt) throw ConfigError("grid.T", "final time must be at least one time step");

    lengths_ = {c.L1, c.L2, c.L3};
    cells_ = {c.M1, c.M2, c.M3};
    dt_ = c.dt;
    T_ = c.T;
    angular_count_ = c.Mtheta;
    azimuthal_count_ = c.Mphi;
    dtheta_ = std::numbers::pi / c.Mtheta;
    dphi_ = 2.0 * std::numbers::pi / c.Mphi;
    finish_spatial();

    // Poles are deduplicated: every azimuth collapses onto +-e3 there.
    Direction north;
    north.xi = {0.0, 0.0, 1.0};
    directions_.push_back(north);
    weights_.push_back(0.0);
    for (int m = 1; m < c.Mtheta; ++m) {
        // theta_m = 2*pi*m / (2*Mtheta)
        auto [ct, st] = unit_circle(m, 2L * c.Mtheta);
        for (int n = 0; n < c.Mphi; ++n) {
            auto [cp, sp] = unit_circle(n, c.Mphi);
            Direction d;
            d.xi = {st * cp, st * sp, ct};
            d.theta = m * dtheta_;
            d.phi = n * dphi_;
            d.m = m;
            d.n = n;
            directions_.push_back(d);
            weights_.push_back(dtheta_ * dphi_ * st);
        }
    }
    Direction south;
    south.xi = {0.0, 0.0, -1.0};
    south.theta = std::numbers::pi;
    south.m = c.Mtheta;
    directions_.push_back(south);
    weights_.push_back(0.0);

    inflow_ = classify_inflow(*this);
}

template <int D>
void Grid<D>::finish_spatial() {
    num_points_ = 1;
    for (int a = D - 1; a >= 0; --a) {
        spacing_[a] = lengths_[a] / cells_[a];
        stride_[a] = num_points_;
        num_points_ *= static_cast<std::size_t>(cells_[a] + 1);
    }
    interior_.clear();
    for (std::size_t p = 0; p < num_points_; ++p) {
        if (is_interior(p)) interior_.push_back(p);
    }
}

template <int D>
std::size_t Grid<D>::point(const std::array<int, D>& index) const {
    std::size_t p = 0;
    for (int a = 0; a < D; ++a) p += static_cast<std::size_t>(index[a]) * stride_[a];
    return p;
}

template <int D>
std::array<int, D> Grid<D>::point_index(std::size_t p) const {
    std::array<int, D> index{};
    for (int a = 0; a < D; ++a) {
        index[a] = static_cast<int>(p / stride_[a]);
        p %= stride_[a];
    }
    return index;
}

template <int D>
Point Grid<D>::position(std::size_t p) const {
    const auto index = point_index(p);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < D; ++a) x[a] = index[a] * spacing_[a];
    return x;
}

template <int D>
bool Grid<D>::is_interior(std::size_t p) const {
    const auto index = point_index(p);
    for (int a = 0; a < D; ++a) {
        if (index[a] <= 0 || index[a] >= cells_[a]) return false;
    }
    return true;
}

template <int D>
double Grid<D>::scattering_angle(std::size_t n, std::size_t nu) const {
    if constexpr (D == 2) {
        const long M = static_cast<long>(directions_.size());
        long diff = (static_cast<long>(nu) - static_cast<long>(n)) % M;
        if (diff < 0) diff += M;
        return static_cast<double>(diff) * dtheta_;
    } else {
        const auto& a = directions_[n].xi;
        const auto& b = directions_[nu].xi;
        const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        const double cx = a[1] * b[2] - a[2] * b[1];
        const double cy = a[2] * b[0] - a[0] * b[2];
        const double cz = a[0] * b[1] - a[1] * b[0];
        return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
    }
}

template <int D>
long Grid<D>::num_steps() const {
    const double ratio = T_ / dt_;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio) {
        throw ConfigError("grid.T", "T/dt = " + std::to_string(ratio) + " is not an integer");
    }
    return static_cast<long>(rounded);
}

GridPtr<2> build_grid2d(const Grid2DConfig& config) {
    return std::make_shared<const Grid<2>>(config);
}

GridPtr<3> build_grid3d(const Grid3DConfig& config) {
    return std::make_shared<const Grid<3>>(config);
}

template class Grid<2>;
template class Grid<3>;

}  // namespace rte
