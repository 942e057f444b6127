#include "rte/stationary.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rte/error.hpp"

namespace rte {

double rho_bound(double c_mua_minus, double mu_star, double dt, double lambda) {
    if (!(c_mua_minus > 0.0)) throw DomainError("rho bound needs inf c mu_a > 0");
    if (!(dt > 0.0)) throw DomainError("rho bound needs dt > 0");
    if (!(lambda >= 0.0) || lambda >= 1.0) {
        throw DomainError("contraction fraction lambda must lie in [0, 1); refine the angular grid");
    }
    const double inv = std::isinf(mu_star) ? 0.0 : 1.0 / mu_star;
    const double a = c_mua_minus * dt;
    return (1.0 + a * (inv + lambda)) / (1.0 + a * (inv + 1.0));
}

double lambda_from_report(const StabilityReport& report) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto ratio = [](const ConditionResult& c) {
        if (!c.applicable) return inf;
        if (c.lhs == 0.0) return 0.0;
        return std::isinf(c.bound) ? 0.0 : c.lhs / c.bound;
    };
    if (report.dimension == 3) return ratio(report.theta_phi);
    return std::min(ratio(report.theta_c2), ratio(report.theta_analytic));
}

template <int D>
double kernel_weight_product(const Grid<D>& grid, const PhaseFunction& pf) {
    double w = 0.0;
    for (double v : grid.weights()) w = std::max(w, v);
    double sup = 0.0;
    if (pf.sup_value()) {
        sup = *pf.sup_value();
    } else {
        for (int k = 0; k <= 4096; ++k) sup = std::max(sup, pf(std::numbers::pi * k / 4096));
    }
    return w * sup;
}

StationaryRefusal::StationaryRefusal(StabilityReport report, std::string reason)
    : StabilityRefusal(std::move(report)), reason_(std::move(reason)) {}

template <int D>
double steady_residual(const Field<D>& J, const Problem<D>& problem) {
    const auto& g = *problem.grid;
    const auto medium = sample_medium(problem.medium, g);
    OperatorWorkspace<D> ws(problem.grid, problem.kernel);
    const Field<D> a = apply_A(J, ws);
    const Field<D> k = apply_K(J, ws, medium);
    const Field<D> s = apply_Sigma(J, medium);
    double r = 0.0;
    for (std::size_t p : g.interior_points()) {
        const Point x = g.position(p);
        for (std::size_t n = 0; n < g.num_directions(); ++n) {
            double v = a(p, n) - s(p, n) + k(p, n);
            if (problem.sources.q) v += problem.sources.q(0.0, x, g.direction(n));
            r = std::max(r, std::abs(v));
        }
    }
    return r;
}

template <int D>
SteadyResult<D> solve_stationary(const Problem<D>& problem, const StationaryOptions<D>& options) {
    const auto t0 = std::chrono::steady_clock::now();
    Problem<D> fixed = problem;
    fixed.sources.q_time_dependent = false;
    fixed.sources.I1_time_dependent = false;
    if (!(options.tol > 0.0)) throw ConfigError("steady.tol", "must be positive");
    if (options.max_iters < 1) throw ConfigError("steady.max_iters", "must be at least 1");

    TransientSolver<D> solver(fixed);
    const StabilityReport& report = solver.report();
    const auto& b = solver.medium().bounds;
    const double lambda = lambda_from_report(report);

    if (options.enforce_preconditions) {
        std::string reason;
        if (!report.cfl_pass) reason = "CFL condition fails";
        else if (!(b.c_mua_minus > 0.0)) reason = "inf c mu_a must be positive";
        else if (!(lambda < 1.0)) reason = "strict angular condition fails (lambda >= 1); refine the angular grid";
        else if (kernel_weight_product(*problem.grid, problem.kernel) > 1.0) {
            reason = "largest quadrature weight times sup p exceeds 1; refine the angular grid";
        }
        if (!reason.empty()) throw StationaryRefusal(report, reason);
    }

    SteadyResult<D> result{Field<D>(problem.grid), 0, {}, {}, 0.0, 0.0, 0.0, lambda, false, options.tol,
                           0.0, 0.0, 0.0, report};
    const bool rho_known = b.c_mua_minus > 0.0 && lambda < 1.0;
    result.rho = rho_known ? rho_bound(b.c_mua_minus, b.mu_star, problem.grid->dt(), lambda)
                           : std::numeric_limits<double>::quiet_NaN();

    auto start = [&]() { return options.initial ? solver.initial_field(*options.initial) : solver.initial_field(); };
    Field<D> cur = start();
    Field<D> next(problem.grid);
    // Steady iteration: time never enters, keep every level at k = 0.
    long it = 0;
    while (it < options.max_iters) {
        cur.set_level(0);
        solver.step(cur, next);
        const double d = sup_distance(next, cur);
        cur.swap(next);
        ++it;
        result.residual_history.push_back(d);
        if (d <= options.tol) {
            result.converged = true;
            break;
        }
    }
    cur.set_level(0);
    result.iterations = it;

    const auto& h = result.residual_history;
    for (std::size_t k = 1; k < h.size(); ++k) {
        if (h[k - 1] > 0.0) result.max_ratio = std::max(result.max_ratio, h[k] / h[k - 1]);
    }
    if (h.size() >= 2) {
        const std::size_t window = std::min<std::size_t>(h.size() - 1, 50);
        const std::size_t last = h.size() - 1;
        if (h[last - window] > 0.0 && h[last] > 0.0) {
            result.empirical_ratio = std::pow(h[last] / h[last - window], 1.0 / static_cast<double>(window));
        }
    }
    if (!h.empty() && rho_known) result.error_proxy = h.back() * result.rho / (1.0 - result.rho);

    if (options.record_error_history) {
        Field<D> again = start();
        result.error_history.push_back(sup_distance(again, cur));
        for (long k = 0; k < it; ++k) {
            again.set_level(0);
            solver.step(again, next);
            again.swap(next);
            result.error_history.push_back(sup_distance(again, cur));
        }
    }
    result.steady_residual = steady_residual(cur, fixed);
    result.J = std::move(cur);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

template double kernel_weight_product(const Grid<2>&, const PhaseFunction&);
template double kernel_weight_product(const Grid<3>&, const PhaseFunction&);
template double steady_residual(const Field<2>&, const Problem<2>&);
template double steady_residual(const Field<3>&, const Problem<3>&);
template SteadyResult<2> solve_stationary(const Problem<2>&, const StationaryOptions<2>&);
template SteadyResult<3> solve_stationary(const Problem<3>&, const StationaryOptions<3>&);

}  // namespace rte
