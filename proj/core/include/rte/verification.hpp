#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "rte/integrate.hpp"
#include "rte/stationary.hpp"
#include "rte/transient.hpp"

namespace rte {

// ---- periodic quadrature ----------------------------------------------------

struct TrapezoidError {
    double integral = 0.0;  // adaptive reference
    double sum = 0.0;       // dtheta * sum f(theta_m)
    double error = 0.0;     // integral - sum
    double bound = 0.0;     // (pi/12) sup|f''| dtheta^2
};

/// Trapezoid rule on M uniform nodes of [0, 2pi) against an adaptive reference
/// (1e-13 absolute, times int |f| when that exceeds 1). sup|f''| is `d2_sup` when given, otherwise the max of
/// |f2| over 4096 uniform nodes.
TrapezoidError trapezoid_error(const std::function<double(double)>& f, const std::function<double(double)>& f2,
                               int M, std::optional<double> d2_sup = {});

/// (1/2pi) int_0^{2pi} f(a) cos(n a) da.
double fourier_cosine_coefficient(const std::function<double(double)>& f, int n);

/// Fourier cosine coefficients c_0..c_K of an even 2D kernel, closed form for
/// Henyey-Greenstein (g^k / 2pi), adaptive quadrature otherwise.
std::vector<double> kernel_fourier_coefficients(const PhaseFunction& pf, int K);

// ---- manufactured solutions -------------------------------------------------

/// Closed-form I(t, x, xi) with its partial derivatives and the scattering
/// integral S(t, x, xi) = int p(x; xi, xi') I(t, x, xi') d omega'.
struct ManufacturedSolution {
    PhaseSampler value;
    PhaseSampler time_derivative;
    std::function<std::array<double, 3>(double, const Point&, const Direction&)> gradient;
    PhaseSampler scattered;
};

/// Finite cosine/sine series f(theta) = sum a_k cos k theta + b_k sin k theta.
struct AngularProfile {
    std::vector<double> a;
    std::vector<double> b;

    double operator()(double theta) const;
    /// int p~(theta - theta') f(theta') dtheta' given the kernel's cosine
    /// coefficients c_k: each mode is multiplied by 2 pi c_k.
    double convolved(double theta, const std::vector<double>& kernel_coeffs) const;
};

/// I = s(t, x) f(theta) for a 2D kernel with cosine coefficients `coeffs`.
struct SpatialFactor {
    std::function<double(double, const Point&)> value;
    std::function<double(double, const Point&)> time_derivative;
    std::function<std::array<double, 3>(double, const Point&)> gradient;
};
ManufacturedSolution separable_solution_2d(SpatialFactor s, AngularProfile f, std::vector<double> kernel_coeffs);

/// q = (1/c) dI/dt + xi . grad I + (mu_a + mu_s) I - mu_s S.
PhaseSampler manufactured_source(const ManufacturedSolution& exact, const Medium& medium);

// ---- convergence studies -----------------------------------------------------

enum class StudyKind { SpaceTime, Angular };

template <int D>
using GridConfig = std::conditional_t<D == 2, Grid2DConfig, Grid3DConfig>;

template <int D>
struct StudySetup {
    GridConfig<D> base;
    Medium medium;
    PhaseFunction kernel;
    ManufacturedSolution exact;
    /// Angular studies solve the stationary problem to this tolerance.
    double steady_tol = 1e-13;
};

struct ConvergenceLevel {
    int level = 0;
    double dt = 0.0;
    std::array<double, 3> dx{};
    double dtheta = 0.0;
    double dphi = 0.0;
    long work = 0;  // time steps or stationary iterations
    double error = 0.0;
};

struct ConvergenceStudy {
    StudyKind kind = StudyKind::SpaceTime;
    std::vector<ConvergenceLevel> levels;
    std::optional<double> order;  // least squares over the last three levels
    bool degenerate = false;      // an error vanished, order undefined
    bool monotone = true;
    bool bound_ok = true;  // error <= 1.5 C (dt + dtheta^2), C from the coarsest level
    std::string warning;
};

/// Space-time: refines cells and dt together by 2 per level (fixed ratios),
/// errors at t = T. Angular: refines the angular counts by 2 per level and
/// compares the stationary solution against a time-independent exact
/// solution, so the space-time truncation error vanishes.
template <int D>
ConvergenceStudy run_convergence_study(const StudySetup<D>& setup, int levels, StudyKind kind);

/// Slope of log(error) against log(h) by least squares.
double fit_order(const std::vector<double>& h, const std::vector<double>& error);

const char* to_string(StudyKind kind);

// ---- dense stationary oracle -------------------------------------------------

struct DenseSystem {
    std::size_t size = 0;
    std::vector<double> matrix;  // row-major size x size
    std::vector<double> rhs;
    std::vector<std::array<std::size_t, 2>> unknowns;  // (point, direction)
};

inline constexpr std::size_t kDenseUnknownCap = 400;

/// -(A - Sigma + K) J = q + inflow terms over interior unknowns, assembled
/// from the central-plus-diffusion stencil coefficients. Throws ConfigError
/// above `cap` unknowns.
template <int D>
DenseSystem assemble_dense_system(const Problem<D>& problem, std::size_t cap = kDenseUnknownCap);

/// LU with partial pivoting.
std::vector<double> solve_dense(const DenseSystem& system);

/// Solution of the dense system as a field with I1 on the inflow boundary.
template <int D>
Field<D> dense_solution_field(const DenseSystem& system, const std::vector<double>& x, const Problem<D>& problem);

}  // namespace rte
