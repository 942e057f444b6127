#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rte/field.hpp"
#include "rte/medium.hpp"
#include "rte/operators.hpp"
#include "rte/phase_function.hpp"

namespace rte {

/// Source term or boundary/initial datum evaluated at (t, x, xi).
/// Samplers may be called concurrently from solver threads.
using PhaseSampler = std::function<double(double, const Point&, const Direction&)>;

/// q, initial value I0 (interior points) and inflow value I1 (discrete inflow
/// boundary). An empty sampler means zero.
struct Sources {
    PhaseSampler q;
    PhaseSampler I0;
    PhaseSampler I1;
    bool q_time_dependent = true;
    bool I1_time_dependent = true;
};

template <int D>
struct Problem {
    GridPtr<D> grid;
    Medium medium;
    PhaseFunction kernel;
    Sources sources;
};

/// Hypotheses of the stability/positivity theorem for one discretization.
/// 2D: CFL plus either angular condition. 3D: CFL plus the combined
/// (theta, phi) condition in `theta_phi`.
struct StabilityReport {
    int dimension = 2;
    double cfl_lhs = 0.0;
    bool cfl_pass = false;
    double cfl_margin = 0.0;  // 1 - cfl_lhs
    ConditionResult theta_c2;
    ConditionResult theta_analytic;
    ConditionResult theta_phi;
    bool theta_pass = false;
    bool overall_pass = false;
    MediumBounds bounds;
};

/// CFL slack absorbing rounding in c+ dt sum 1/dx for exactly-critical steps.
inline constexpr double kCflSlack = 1e-12;

template <int D>
StabilityReport check_stability(const Grid<D>& grid, const MediumBounds& bounds, const PhaseFunction& pf);

template <int D>
StabilityReport check_stability(const Grid<D>& grid, const Medium& medium, const PhaseFunction& pf);

class StabilityRefusal : public std::runtime_error {
public:
    explicit StabilityRefusal(StabilityReport report);
    const StabilityReport& report() const noexcept { return report_; }

private:
    StabilityReport report_;
};

/// Explicit upwind time stepper. Samples the medium once, precomputes the
/// operator workspace and caches time-independent source data.
template <int D>
class TransientSolver {
public:
    explicit TransientSolver(const Problem<D>& problem);

    const Grid<D>& grid() const { return *grid_; }
    const GridPtr<D>& grid_ptr() const { return grid_; }
    const SampledMedium<D>& medium() const { return medium_; }
    const OperatorWorkspace<D>& workspace() const { return ws_; }
    const StabilityReport& report() const { return report_; }
    const Sources& sources() const { return sources_; }

    /// Level 0: I0 on interior points, I1(0) on the inflow boundary.
    Field<D> initial_field() const;

    /// Uses `start` as level 0 (warm start). Its inflow entries must agree
    /// with I1(0) to 1e-12 relative, otherwise ConfigError.
    Field<D> initial_field(const Field<D>& start) const;

    /// Advances `in` (level k) into `out` (level k+1). Throws NumericalError
    /// on the first non-finite value.
    void step(const Field<D>& in, Field<D>& out) const;

    /// Sets the inflow entries of `field` to I1 at time t.
    void apply_inflow(Field<D>& field, double t) const;

    /// max |q(t_k)| over interior entries (sampled grid values).
    double source_norm(long k) const;
    /// max |I1(t)| over inflow entries.
    double inflow_norm(double t) const;

private:
    const double* source_at(long k, std::vector<double>& scratch) const;

    GridPtr<D> grid_;
    Sources sources_;
    SampledMedium<D> medium_;
    OperatorWorkspace<D> ws_;
    StabilityReport report_;
    std::vector<double> q_cache_;  // interior-major, filled when q is time independent
    std::vector<double> inflow_cache_;
};

struct TransientOptions {
    /// Levels k (1 <= k <= T/dt) kept as snapshots.
    std::vector<long> snapshot_steps;
    bool keep_snapshots = true;
    bool enforce_stability = true;
};

template <int D>
struct TransientResult {
    Field<D> final_field;
    std::vector<std::pair<long, Field<D>>> snapshots;
    std::vector<double> sup_history;    // ||I^k||, k = 0..K
    std::vector<double> bound_history;  // ||I0|| + ||I1|| + c+ ||q|| t_k
    double min_value = 0.0;
    bool positive = true;  // every level >= 0
    bool bound_ok = true;  // sup_history <= bound_history (1e-12 relative slack)
    long steps = 0;
    double wall_seconds = 0.0;
    StabilityReport report;
};

/// Marches from k = 0 to T/dt. The bound uses running maxima of the sampled
/// ||I1|| and ||q|| up to each level. Throws StabilityRefusal when the gate is
/// enforced and fails.
template <int D>
TransientResult<D> run_transient(const Problem<D>& problem, const TransientOptions& options = {},
                                 const std::function<void(const Field<D>&)>& on_snapshot = {});

/// Weighted direction sum per spatial point (dtheta in 2D, the scattering
/// quadrature weights in 3D).
template <int D>
std::vector<double> integrated_intensity(const Field<D>& field);

}  // namespace rte
