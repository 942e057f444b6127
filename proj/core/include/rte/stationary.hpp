#pragma once

#include <optional>
#include <vector>

#include "rte/transient.hpp"

namespace rte {

/// (1 + (c mu_a)^- dt (1/mu* + lambda)) / (1 + (c mu_a)^- dt (1/mu* + 1)).
/// Requires (c mu_a)^- > 0 and 0 <= lambda < 1 (DomainError otherwise).
/// mu* = +inf is allowed.
double rho_bound(double c_mua_minus, double mu_star, double dt, double lambda);

/// Contraction fraction lambda = lhs / bound of the angular condition. In 2D
/// the smaller of the C2 and analytic ratios among the applicable ones; in 3D
/// the combined condition. +inf when nothing applies.
double lambda_from_report(const StabilityReport& report);

/// Largest quadrature weight times sup p~ (2D: dtheta ||p~||).
template <int D>
double kernel_weight_product(const Grid<D>& grid, const PhaseFunction& pf);

template <int D>
struct StationaryOptions {
    double tol = 1e-12;
    long max_iters = 1'000'000;
    std::optional<Field<D>> initial;
    bool enforce_preconditions = true;
    /// Re-runs the iteration after convergence to record ||I^k - J||.
    bool record_error_history = false;
};

template <int D>
struct SteadyResult {
    Field<D> J;
    long iterations = 0;
    std::vector<double> residual_history;  // ||I^k - I^{k-1}||, k = 1..iterations
    std::vector<double> error_history;     // ||I^k - J||, k = 0..iterations (optional)
    double empirical_ratio = 0.0;          // geometric mean of the last ratios
    double max_ratio = 0.0;                // max ratio after the first iteration
    double rho = 0.0;
    double lambda = 0.0;
    bool converged = false;
    double tol = 0.0;
    double error_proxy = 0.0;  // last residual * rho / (1 - rho)
    double steady_residual = 0.0;
    double wall_seconds = 0.0;
    StabilityReport report;
};

/// Thrown when the stationary preconditions fail; carries the report.
class StationaryRefusal : public StabilityRefusal {
public:
    StationaryRefusal(StabilityReport report, std::string reason);
    const std::string& reason() const noexcept { return reason_; }
    const char* what() const noexcept override { return reason_.c_str(); }

private:
    std::string reason_;
};

/// Iterates the explicit step with time-independent q and I1 until the
/// successive difference drops to `tol`. Preconditions: CFL, (c mu_a)^- > 0,
/// strict angular condition, and largest weight * sup p~ <= 1.
template <int D>
SteadyResult<D> solve_stationary(const Problem<D>& problem, const StationaryOptions<D>& options = {});

/// sup over interior entries of |(A - Sigma + K) J + q|.
template <int D>
double steady_residual(const Field<D>& J, const Problem<D>& problem);

}  // namespace rte
