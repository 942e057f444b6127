#pragma once

#include <span>
#include <vector>

#include "rte/grid.hpp"

namespace rte {

/// One time level of photon density over (space x direction) grid points.
///
/// Storage covers every spatial grid point so the upwind stencil can address
/// neighbours directly. Only interior points and inflow-boundary entries are
/// part of the solution state; outflow-boundary entries are never read by the
/// scheme and stay at their fill value.
template <int D>
class Field {
public:
    explicit Field(GridPtr<D> grid, double fill = 0.0)
        : grid_(std::move(grid)), data_(grid_->size(), fill) {}

    const Grid<D>& grid() const { return *grid_; }
    const GridPtr<D>& grid_ptr() const { return grid_; }

    double& operator()(std::size_t point, std::size_t direction) {
        return data_[point * grid_->num_directions() + direction];
    }
    double operator()(std::size_t point, std::size_t direction) const {
        return data_[point * grid_->num_directions() + direction];
    }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    /// Direction vector stored at one spatial point.
    std::span<double> at_point(std::size_t point) {
        return std::span<double>(data_).subspan(point * grid_->num_directions(), grid_->num_directions());
    }
    std::span<const double> at_point(std::size_t point) const {
        return std::span<const double>(data_).subspan(point * grid_->num_directions(),
                                                      grid_->num_directions());
    }

    long level() const { return level_; }
    void set_level(long k) { level_ = k; }

    /// Overwrites every boundary entry that is not on the inflow boundary.
    void fill_outflow(double value);

    void swap(Field& other) noexcept {
        grid_.swap(other.grid_);
        data_.swap(other.data_);
        std::swap(level_, other.level_);
    }

private:
    GridPtr<D> grid_;
    std::vector<double> data_;
    long level_ = 0;
};

/// max |I| over interior points and the inflow boundary.
template <int D>
double sup_norm(const Field<D>& field);

/// max |a - b| over interior points and the inflow boundary.
template <int D>
double sup_distance(const Field<D>& a, const Field<D>& b);

/// Smallest value over interior points and the inflow boundary.
template <int D>
double min_value(const Field<D>& field);

/// Display value for any grid entry: stored value on interior and inflow
/// entries, otherwise a copy of the nearest interior point (clamped index).
/// Returns 0 when the grid has no interior points.
template <int D>
double display_value(const Field<D>& field, std::size_t point, std::size_t direction);

extern template class Field<2>;
extern template class Field<3>;

}  // namespace rte
