#include "rte/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rte {

template <int D>
void Field<D>::fill_outflow(double value) {
    const auto& g = *grid_;
    const std::size_t nd = g.num_directions();
    for (std::size_t p = 0; p < g.num_points(); ++p) {
        if (g.is_interior(p)) continue;
        for (std::size_t n = 0; n < nd; ++n) {
            if (!g.inflow().contains(p, n)) data_[p * nd + n] = value;
        }
    }
}

namespace {

template <int D, typename Visit>
void for_each_state_entry(const Grid<D>& g, Visit&& visit) {
    const std::size_t nd = g.num_directions();
    for (std::size_t p : g.interior_points()) {
        for (std::size_t n = 0; n < nd; ++n) visit(p * nd + n);
    }
    for (const auto& e : g.inflow()) visit(e.point * nd + e.direction);
}

}  // namespace

template <int D>
double sup_norm(const Field<D>& field) {
    const auto v = field.values();
    double m = 0.0;
    for_each_state_entry(field.grid(), [&](std::size_t i) { m = std::max(m, std::abs(v[i])); });
    return m;
}

template <int D>
double sup_distance(const Field<D>& a, const Field<D>& b) {
    const auto va = a.values();
    const auto vb = b.values();
    double m = 0.0;
    for_each_state_entry(a.grid(), [&](std::size_t i) { m = std::max(m, std::abs(va[i] - vb[i])); });
    return m;
}

template <int D>
double min_value(const Field<D>& field) {
    const auto v = field.values();
    double m = std::numeric_limits<double>::infinity();
    for_each_state_entry(field.grid(), [&](std::size_t i) { m = std::min(m, v[i]); });
    return m;
}

template <int D>
double display_value(const Field<D>& field, std::size_t point, std::size_t direction) {
    const auto& g = field.grid();
    if (g.is_interior(point) || g.inflow().contains(point, direction)) return field(point, direction);
    if (g.interior_points().empty()) return 0.0;
    auto index = g.point_index(point);
    for (int a = 0; a < D; ++a) index[a] = std::clamp(index[a], 1, g.cells(a) - 1);
    return field(g.point(index), direction);
}

template class Field<2>;
template class Field<3>;
template double sup_norm(const Field<2>&);
template double sup_norm(const Field<3>&);
template double sup_distance(const Field<2>&, const Field<2>&);
template double sup_distance(const Field<3>&, const Field<3>&);
template double min_value(const Field<2>&);
template double min_value(const Field<3>&);
template double display_value(const Field<2>&, std::size_t, std::size_t);
template double display_value(const Field<3>&, std::size_t, std::size_t);

}  // namespace rte
