#pragma once

#include <cstddef>
#include <vector>

#include "rte/field.hpp"
#include "rte/medium.hpp"
#include "rte/phase_function.hpp"

namespace rte {

/// Per-direction upwind coefficients and the scattering quadrature matrix.
///
/// Transport uses the sign-split upwind form: each axis contributes only the
/// neighbour the particles come from, weighted by |xi_d|/dx_d. Axes with
/// xi_d == 0 contribute nothing and have no neighbour.
template <int D>
class OperatorWorkspace {
public:
    OperatorWorkspace(GridPtr<D> grid, PhaseFunction kernel);

    const Grid<D>& grid() const { return *grid_; }
    const PhaseFunction& kernel() const { return kernel_; }
    std::size_t num_directions() const { return nd_; }

    /// sum_d |xi_{n,d}| / dx_d
    double transport_rate(std::size_t n) const { return rate_[n]; }
    /// |xi_{n,d}| / dx_d
    double upwind_weight(std::size_t n, int axis) const { return weight_[n * D + axis]; }
    /// Flat point offset of the upwind neighbour along `axis` (0 when xi_d == 0).
    std::ptrdiff_t upwind_offset(std::size_t n, int axis) const { return offset_[n * D + axis]; }

    /// True when the scattering matrix is shared by every spatial point.
    bool shared_scatter() const { return !scatter_.empty(); }

    /// Scattering matrix at point p stored transposed: entry [nu * N + n] is
    /// w_nu p(x_p; xi_n, xi_nu). Returns the shared matrix, or fills `scratch`
    /// for x-dependent kernels.
    const double* scatter_at(std::size_t p, std::vector<double>& scratch) const;

    /// out[n] = sum_nu S[nu][n] in[nu], nu ascending for every n.
    void scatter_product(const double* S, const double* in, double* out) const;

    /// B_Delta at one entry: sum_d |xi_d|/dx_d * I(upwind neighbour).
    double upwind_sum(const double* data, std::size_t p, std::size_t n) const {
        const std::size_t idx = p * nd_ + n;
        double s = 0.0;
        for (int a = 0; a < D; ++a) {
            const std::ptrdiff_t off = offset_[n * D + a];
            if (off != 0) s += weight_[n * D + a] * data[idx + off * static_cast<std::ptrdiff_t>(nd_)];
        }
        return s;
    }

private:
    GridPtr<D> grid_;
    PhaseFunction kernel_;
    std::size_t nd_;
    std::vector<double> rate_;
    std::vector<double> weight_;
    std::vector<std::ptrdiff_t> offset_;
    std::vector<double> scatter_;
};

/// Throws std::logic_error if some interior stencil would read a boundary
/// entry outside the discrete inflow boundary.
template <int D>
void verify_upwind_reads(const OperatorWorkspace<D>& ws);

/// Each apply returns a field that is zero off the interior points.
template <int D>
Field<D> apply_A(const Field<D>& field, const OperatorWorkspace<D>& ws);

template <int D>
Field<D> apply_B(const Field<D>& field, const OperatorWorkspace<D>& ws);

template <int D>
Field<D> apply_K(const Field<D>& field, const OperatorWorkspace<D>& ws, const SampledMedium<D>& medium);

template <int D>
Field<D> apply_Sigma(const Field<D>& field, const SampledMedium<D>& medium);

}  // namespace rte
