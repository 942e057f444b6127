#include "rte/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rte {

template <int D>
OperatorWorkspace<D>::OperatorWorkspace(GridPtr<D> grid, PhaseFunction kernel)
    : grid_(std::move(grid)), kernel_(std::move(kernel)), nd_(grid_->num_directions()) {
    const auto& g = *grid_;
    rate_.assign(nd_, 0.0);
    weight_.assign(nd_ * D, 0.0);
    offset_.assign(nd_ * D, 0);
    for (std::size_t n = 0; n < nd_; ++n) {
        const auto& xi = g.direction(n).xi;
        for (int a = 0; a < D; ++a) {
            const double w = std::abs(xi[a]) / g.spacing(a);
            weight_[n * D + a] = w;
            rate_[n] += w;
            const auto stride = static_cast<std::ptrdiff_t>(g.stride(a));
            if (xi[a] > 0.0) offset_[n * D + a] = -stride;
            else if (xi[a] < 0.0) offset_[n * D + a] = stride;
        }
    }
    if (kernel_.x_independent()) {
        scatter_.resize(nd_ * nd_);
        for (std::size_t nu = 0; nu < nd_; ++nu) {
            const double w = g.weight(nu);
            for (std::size_t n = 0; n < nd_; ++n) {
                scatter_[nu * nd_ + n] = w == 0.0 ? 0.0 : w * kernel_(g.scattering_angle(n, nu));
            }
        }
    }
    verify_upwind_reads(*this);
}

template <int D>
const double* OperatorWorkspace<D>::scatter_at(std::size_t p, std::vector<double>& scratch) const {
    if (!scatter_.empty()) return scatter_.data();
    const auto& g = *grid_;
    const Point x = g.position(p);
    scratch.resize(nd_ * nd_);
    for (std::size_t nu = 0; nu < nd_; ++nu) {
        const double w = g.weight(nu);
        for (std::size_t n = 0; n < nd_; ++n) {
            scratch[nu * nd_ + n] = w == 0.0 ? 0.0 : w * kernel_(x, g.scattering_angle(n, nu));
        }
    }
    return scratch.data();
}

template <int D>
void OperatorWorkspace<D>::scatter_product(const double* S, const double* in, double* out) const {
    for (std::size_t n = 0; n < nd_; ++n) out[n] = 0.0;
    for (std::size_t nu = 0; nu < nd_; ++nu) {
        const double v = in[nu];
        const double* row = S + nu * nd_;
        for (std::size_t n = 0; n < nd_; ++n) out[n] += row[n] * v;
    }
}

template <int D>
void verify_upwind_reads(const OperatorWorkspace<D>& ws) {
    const auto& g = ws.grid();
    const std::size_t nd = g.num_directions();
    for (std::size_t p : g.interior_points()) {
        for (std::size_t n = 0; n < nd; ++n) {
            for (int a = 0; a < D; ++a) {
                const std::ptrdiff_t off = ws.upwind_offset(n, a);
                if (off == 0) continue;
                const auto q = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + off);
                if (!g.is_interior(q) && !g.inflow().contains(q, n)) {
                    throw std::logic_error("upwind stencil at point " + std::to_string(p) + ", direction " +
                                           std::to_string(n) + " reads non-inflow boundary point " +
                                           std::to_string(q));
                }
            }
        }
    }
}

template <int D>
Field<D> apply_B(const Field<D>& field, const OperatorWorkspace<D>& ws) {
    const auto& g = field.grid();
    Field<D> out(field.grid_ptr());
    const double* in = field.values().data();
    double* o = out.values().data();
    const std::size_t nd = g.num_directions();
    const auto& pts = g.interior_points();
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const std::size_t p = pts[k];
        for (std::size_t n = 0; n < nd; ++n) o[p * nd + n] = ws.upwind_sum(in, p, n);
    }
    return out;
}

template <int D>
Field<D> apply_A(const Field<D>& field, const OperatorWorkspace<D>& ws) {
    const auto& g = field.grid();
    Field<D> out(field.grid_ptr());
    const double* in = field.values().data();
    double* o = out.values().data();
    const std::size_t nd = g.num_directions();
    const auto& pts = g.interior_points();
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const std::size_t p = pts[k];
        for (std::size_t n = 0; n < nd; ++n) {
            o[p * nd + n] = ws.upwind_sum(in, p, n) - ws.transport_rate(n) * in[p * nd + n];
        }
    }
    return out;
}

template <int D>
Field<D> apply_K(const Field<D>& field, const OperatorWorkspace<D>& ws, const SampledMedium<D>& medium) {
    const auto& g = field.grid();
    Field<D> out(field.grid_ptr());
    const double* in = field.values().data();
    double* o = out.values().data();
    const std::size_t nd = g.num_directions();
    const auto& pts = g.interior_points();
#pragma omp parallel
    {
        std::vector<double> scratch;
#pragma omp for schedule(static)
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const std::size_t p = pts[k];
            const double* S = ws.scatter_at(p, scratch);
            double* dst = o + p * nd;
            ws.scatter_product(S, in + p * nd, dst);
            const double mus = medium.mu_s[p];
            for (std::size_t n = 0; n < nd; ++n) dst[n] *= mus;
        }
    }
    return out;
}

template <int D>
Field<D> apply_Sigma(const Field<D>& field, const SampledMedium<D>& medium) {
    const auto& g = field.grid();
    Field<D> out(field.grid_ptr());
    const std::size_t nd = g.num_directions();
    for (std::size_t p : g.interior_points()) {
        const double s = medium.mu_s[p] + medium.mu_a[p];
        for (std::size_t n = 0; n < nd; ++n) out(p, n) = s * field(p, n);
    }
    return out;
}

template class OperatorWorkspace<2>;
template class OperatorWorkspace<3>;
template void verify_upwind_reads(const OperatorWorkspace<2>&);
template void verify_upwind_reads(const OperatorWorkspace<3>&);
template Field<2> apply_A(const Field<2>&, const OperatorWorkspace<2>&);
template Field<3> apply_A(const Field<3>&, const OperatorWorkspace<3>&);
template Field<2> apply_B(const Field<2>&, const OperatorWorkspace<2>&);
template Field<3> apply_B(const Field<3>&, const OperatorWorkspace<3>&);
template Field<2> apply_K(const Field<2>&, const OperatorWorkspace<2>&, const SampledMedium<2>&);
template Field<3> apply_K(const Field<3>&, const OperatorWorkspace<3>&, const SampledMedium<3>&);
template Field<2> apply_Sigma(const Field<2>&, const SampledMedium<2>&);
template Field<3> apply_Sigma(const Field<3>&, const SampledMedium<3>&);

}  // namespace rte
