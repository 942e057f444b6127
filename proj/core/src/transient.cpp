#include "rte/transient.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "rte/error.hpp"
#include "rte/scheme3d.hpp"

namespace rte {

template <int D>
StabilityReport check_stability(const Grid<D>& grid, const MediumBounds& bounds, const PhaseFunction& pf) {
    if (pf.dimension() != D) {
        throw ConfigError("kernel.dimension", "kernel dimension does not match the grid");
    }
    StabilityReport r;
    r.dimension = D;
    r.bounds = bounds;
    double inv = 0.0;
    for (int a = 0; a < D; ++a) inv += 1.0 / grid.spacing(a);
    r.cfl_lhs = bounds.c_plus * grid.dt() * inv;
    r.cfl_margin = 1.0 - r.cfl_lhs;
    r.cfl_pass = r.cfl_lhs <= 1.0 + kCflSlack;

    if constexpr (D == 2) {
        r.theta_c2 = check_theta_condition_c2(pf, grid.dtheta(), bounds.mu_star);
        if (pf.analytic_decay()) {
            r.theta_analytic = check_theta_condition_analytic(pf, grid.angular_count(), bounds.mu_star);
        } else {
            r.theta_analytic.form = "analytic";
            r.theta_analytic.note = "kernel has no analytic Fourier-decay data";
        }
        r.theta_pass = (r.theta_c2.applicable && r.theta_c2.pass) ||
                       (r.theta_analytic.applicable && r.theta_analytic.pass);
    } else {
        r.theta_phi = check_theta_phi_condition(grid, pf, bounds.mu_star);
        r.theta_pass = r.theta_phi.applicable && r.theta_phi.pass;
    }
    r.overall_pass = r.cfl_pass && r.theta_pass;
    return r;
}

template <int D>
StabilityReport check_stability(const Grid<D>& grid, const Medium& medium, const PhaseFunction& pf) {
    return check_stability<D>(grid, sample_medium(medium, grid).bounds, pf);
}

StabilityRefusal::StabilityRefusal(StabilityReport report)
    : std::runtime_error("stability conditions not satisfied (cfl " + std::string(report.cfl_pass ? "pass" : "fail") +
                         ", angular " + std::string(report.theta_pass ? "pass" : "fail") + ")"),
      report_(std::move(report)) {}

template <int D>
TransientSolver<D>::TransientSolver(const Problem<D>& problem)
    : grid_(problem.grid),
      sources_(problem.sources),
      medium_(sample_medium(problem.medium, *problem.grid)),
      ws_(problem.grid, problem.kernel),
      report_(check_stability<D>(*problem.grid, medium_.bounds, problem.kernel)) {
    const auto& g = *grid_;
    const std::size_t nd = g.num_directions();
    if (sources_.q && !sources_.q_time_dependent) {
        const auto& pts = g.interior_points();
        q_cache_.resize(pts.size() * nd);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const Point x = g.position(pts[k]);
            for (std::size_t n = 0; n < nd; ++n) q_cache_[k * nd + n] = sources_.q(0.0, x, g.direction(n));
        }
    }
    if (sources_.I1 && !sources_.I1_time_dependent) {
        inflow_cache_.reserve(g.inflow().size());
        for (const auto& e : g.inflow()) {
            inflow_cache_.push_back(sources_.I1(0.0, g.position(e.point), g.direction(e.direction)));
        }
    }
}

template <int D>
void TransientSolver<D>::apply_inflow(Field<D>& field, double t) const {
    const auto& g = *grid_;
    std::size_t i = 0;
    for (const auto& e : g.inflow()) {
        double v = 0.0;
        if (!inflow_cache_.empty()) v = inflow_cache_[i];
        else if (sources_.I1) v = sources_.I1(t, g.position(e.point), g.direction(e.direction));
        field(e.point, e.direction) = v;
        ++i;
    }
}

template <int D>
Field<D> TransientSolver<D>::initial_field() const {
    const auto& g = *grid_;
    Field<D> f(grid_);
    if (sources_.I0) {
        for (std::size_t p : g.interior_points()) {
            const Point x = g.position(p);
            for (std::size_t n = 0; n < g.num_directions(); ++n) f(p, n) = sources_.I0(0.0, x, g.direction(n));
        }
    }
    apply_inflow(f, 0.0);
    f.set_level(0);
    return f;
}

template <int D>
Field<D> TransientSolver<D>::initial_field(const Field<D>& start) const {
    if (start.grid().size() != grid_->size()) {
        throw ConfigError("initial", "warm-start field does not match the grid");
    }
    Field<D> f(grid_);
    std::copy(start.values().begin(), start.values().end(), f.values().begin());
    Field<D> reference(grid_);
    apply_inflow(reference, 0.0);
    for (const auto& e : grid_->inflow()) {
        const double a = f(e.point, e.direction), b = reference(e.point, e.direction);
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(b))) {
            throw ConfigError("sources.I0", "initial field conflicts with I1 on the inflow boundary at point " +
                                                std::to_string(e.point) + ", direction " +
                                                std::to_string(e.direction));
        }
    }
    f.set_level(0);
    return f;
}

template <int D>
const double* TransientSolver<D>::source_at(long k, std::vector<double>& scratch) const {
    if (!sources_.q) return nullptr;
    if (!q_cache_.empty()) return q_cache_.data();
    const auto& g = *grid_;
    const std::size_t nd = g.num_directions();
    const auto& pts = g.interior_points();
    const double t = g.time(k);
    scratch.resize(pts.size() * nd);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point x = g.position(pts[i]);
        for (std::size_t n = 0; n < nd; ++n) scratch[i * nd + n] = sources_.q(t, x, g.direction(n));
    }
    return scratch.data();
}

template <int D>
double TransientSolver<D>::source_norm(long k) const {
    std::vector<double> scratch;
    const double* q = source_at(k, scratch);
    if (!q) return 0.0;
    const std::size_t count = grid_->interior_points().size() * grid_->num_directions();
    double m = 0.0;
    for (std::size_t i = 0; i < count; ++i) m = std::max(m, std::abs(q[i]));
    return m;
}

template <int D>
double TransientSolver<D>::inflow_norm(double t) const {
    Field<D> f(grid_);
    apply_inflow(f, t);
    double m = 0.0;
    for (const auto& e : grid_->inflow()) m = std::max(m, std::abs(f(e.point, e.direction)));
    return m;
}

template <int D>
void TransientSolver<D>::step(const Field<D>& in, Field<D>& out) const {
    const auto& g = *grid_;
    const std::size_t nd = g.num_directions();
    const auto& pts = g.interior_points();
    const double dt = g.dt();
    const long k = in.level();

    std::vector<double> q_scratch;
    const double* q = source_at(k, q_scratch);
    const double* src = in.values().data();
    double* dst = out.values().data();
    std::size_t bad = std::numeric_limits<std::size_t>::max();

#pragma omp parallel
    {
        std::vector<double> scratch;
        std::vector<double> ksum(nd);
        std::size_t local_bad = std::numeric_limits<std::size_t>::max();
#pragma omp for schedule(static)
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::size_t p = pts[i];
            const double c = medium_.c[p];
            const double mus = medium_.mu_s[p];
            const double cdt = c * dt;
            const double divisor = 1.0 + cdt * (mus + medium_.mu_a[p]);
            ws_.scatter_product(ws_.scatter_at(p, scratch), src + p * nd, ksum.data());
            for (std::size_t n = 0; n < nd; ++n) {
                const std::size_t idx = p * nd + n;
                double rhs = ws_.upwind_sum(src, p, n) + mus * ksum[n];
                if (q) rhs += q[i * nd + n];
                const double v = ((1.0 - cdt * ws_.transport_rate(n)) * src[idx] + cdt * rhs) / divisor;
                dst[idx] = v;
                if (!std::isfinite(v)) local_bad = std::min(local_bad, idx);
            }
        }
#pragma omp critical(rte_step_bad)
        bad = std::min(bad, local_bad);
    }
    if (bad != std::numeric_limits<std::size_t>::max()) {
        const std::size_t p = bad / nd, n = bad % nd;
        throw NumericalError("non-finite value at step " + std::to_string(k + 1) + ", point " + std::to_string(p) +
                                 ", direction " + std::to_string(n),
                             k + 1, bad);
    }
    apply_inflow(out, g.time(k + 1));
    out.set_level(k + 1);
}

template <int D>
TransientResult<D> run_transient(const Problem<D>& problem, const TransientOptions& options,
                                 const std::function<void(const Field<D>&)>& on_snapshot) {
    const auto t0 = std::chrono::steady_clock::now();
    TransientSolver<D> solver(problem);
    const long K = problem.grid->num_steps();
    if (options.enforce_stability && !solver.report().overall_pass) throw StabilityRefusal(solver.report());

    Field<D> cur = solver.initial_field();
    Field<D> next(problem.grid);
    TransientResult<D> result{Field<D>(problem.grid), {}, {}, {}, 0.0, true, true, K, 0.0, solver.report()};

    const auto& g = *problem.grid;
    double i0 = 0.0;
    for (std::size_t p : g.interior_points()) {
        for (std::size_t n = 0; n < g.num_directions(); ++n) i0 = std::max(i0, std::abs(cur(p, n)));
    }
    double i1 = solver.inflow_norm(0.0);
    double qn = solver.source_norm(0);
    const double c_plus = solver.medium().bounds.c_plus;

    auto record = [&](const Field<D>& f, long k) {
        const double s = sup_norm(f);
        const double b = i0 + i1 + c_plus * qn * g.time(k);
        result.sup_history.push_back(s);
        result.bound_history.push_back(b);
        if (s > b * (1.0 + 1e-12)) result.bound_ok = false;
        const double m = min_value(f);
        result.min_value = k == 0 ? m : std::min(result.min_value, m);
        if (m < 0.0) result.positive = false;
    };
    record(cur, 0);

    std::vector<long> wanted = options.snapshot_steps;
    std::sort(wanted.begin(), wanted.end());
    auto next_snap = wanted.begin();
    for (long k = 0; k < K; ++k) {
        solver.step(cur, next);
        cur.swap(next);
        if (problem.sources.I1 && problem.sources.I1_time_dependent) i1 = std::max(i1, solver.inflow_norm(g.time(k + 1)));
        record(cur, k + 1);
        if (problem.sources.q && problem.sources.q_time_dependent && k + 1 < K) {
            qn = std::max(qn, solver.source_norm(k + 1));
        }
        while (next_snap != wanted.end() && *next_snap < k + 1) ++next_snap;
        if (next_snap != wanted.end() && *next_snap == k + 1) {
            if (on_snapshot) on_snapshot(cur);
            if (options.keep_snapshots) result.snapshots.emplace_back(k + 1, cur);
        }
    }
    result.final_field = std::move(cur);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

template <int D>
std::vector<double> integrated_intensity(const Field<D>& field) {
    const auto& g = field.grid();
    std::vector<double> out(g.num_points(), 0.0);
    for (std::size_t p = 0; p < g.num_points(); ++p) {
        double s = 0.0;
        for (std::size_t n = 0; n < g.num_directions(); ++n) s += g.weight(n) * display_value(field, p, n);
        out[p] = s;
    }
    return out;
}

template StabilityReport check_stability<2>(const Grid<2>&, const MediumBounds&, const PhaseFunction&);
template StabilityReport check_stability<3>(const Grid<3>&, const MediumBounds&, const PhaseFunction&);
template StabilityReport check_stability<2>(const Grid<2>&, const Medium&, const PhaseFunction&);
template StabilityReport check_stability<3>(const Grid<3>&, const Medium&, const PhaseFunction&);
template class TransientSolver<2>;
template class TransientSolver<3>;
template TransientResult<2> run_transient(const Problem<2>&, const TransientOptions&,
                                          const std::function<void(const Field<2>&)>&);
template TransientResult<3> run_transient(const Problem<3>&, const TransientOptions&,
                                          const std::function<void(const Field<3>&)>&);
template std::vector<double> integrated_intensity(const Field<2>&);
template std::vector<double> integrated_intensity(const Field<3>&);

}  // namespace rte
