#include "rte/inflow.hpp"

#include "rte/grid.hpp"

namespace rte {

InflowSet::InflowSet(std::size_t num_directions, std::size_t num_points)
    : num_directions_(num_directions), mask_(num_directions * num_points, 0) {}

void InflowSet::add(std::size_t point, std::size_t direction) {
    auto& flag = mask_[point * num_directions_ + direction];
    if (flag) return;
    flag = 1;
    entries_.push_back({point, direction});
}

template <int D>
InflowSet classify_inflow(const Grid<D>& grid) {
    const std::size_t nd = grid.num_directions();
    InflowSet set(nd, grid.num_points());

    // n_f . xi < 0 for some face through the point. Low faces have outward
    // normal -e_a (inflow when xi_a > 0), high faces +e_a (inflow when xi_a < 0).
    auto is_inflow = [&](const std::array<int, D>& index, const Direction& dir) {
        for (int a = 0; a < D; ++a) {
            if (index[a] == 0 && dir.xi[a] > 0.0) return true;
            if (index[a] == grid.cells(a) && dir.xi[a] < 0.0) return true;
        }
        return false;
    };

    for (int axis = 0; axis < D; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const int fixed = side == 0 ? 0 : grid.cells(axis);
            for (std::size_t p = 0; p < grid.num_points(); ++p) {
                const auto index = grid.point_index(p);
                if (index[axis] != fixed) continue;
                for (std::size_t n = 0; n < nd; ++n) {
                    if (is_inflow(index, grid.direction(n))) set.add(p, n);
                }
            }
        }
    }
    return set;
}

template InflowSet classify_inflow<2>(const Grid<2>&);
template InflowSet classify_inflow<3>(const Grid<3>&);

}  // namespace rte
