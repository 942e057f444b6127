#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rte {

template <int D>
class Grid;

struct InflowEntry {
    std::size_t point = 0;
    std::size_t direction = 0;

    bool operator==(const InflowEntry&) const = default;
};

/// Discrete inflow boundary: boundary points x and directions xi_n with
/// n_f . xi_n < 0 for at least one face f containing x.
class InflowSet {
public:
    InflowSet() = default;
    InflowSet(std::size_t num_directions, std::size_t num_points);

    void add(std::size_t point, std::size_t direction);

    bool contains(std::size_t point, std::size_t direction) const {
        return mask_[point * num_directions_ + direction] != 0;
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const InflowEntry& operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::size_t num_directions_ = 0;
    std::vector<InflowEntry> entries_;
    std::vector<std::uint8_t> mask_;
};

/// Enumerates the discrete inflow boundary. Ordering is face-major (x1 = 0,
/// x1 = L1, x2 = 0, ...), then flat point index, then direction index;
/// edge and corner points are listed once, on the first face visited.
template <int D>
InflowSet classify_inflow(const Grid<D>& grid);

}  // namespace rte
