#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "rte/grid.hpp"

namespace rte {

/// Fourier-coefficient decay |c_n| <= C r^|n| of an analytic 2pi-periodic kernel.
struct AnalyticDecay {
    double C = 0.0;
    double r = 0.0;
};

/// Kernel written as a function of u = cos(alpha), with its first two
/// u-derivatives. Smooth on [-1, 1] for the built-in kernels; used to
/// differentiate p(xi, xi'(theta, phi)) sin(theta) in closed form.
struct CosineForm {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

/// Scattering phase function p(x; xi, xi') = p~(x; alpha), alpha the angle
/// between xi and xi'. Normalized per dimension: int_0^{2pi} p~ = 1 in 2D,
/// 2pi int_0^pi p~ sin = 1 in 3D. Evaluation is pure and thread-safe.
class PhaseFunction {
public:
    enum class Kind { Isotropic, HenyeyGreenstein, Tabulated, Custom };
    using Evaluator = std::function<double(const Point&, double)>;
    using AngleFunction = std::function<double(double)>;

    PhaseFunction(Kind kind, int dimension, Evaluator eval, bool x_independent);

    double operator()(const Point& x, double alpha) const { return eval_(x, alpha); }
    /// Only meaningful for x-independent kernels.
    double operator()(double alpha) const { return eval_(Point{}, alpha); }

    Kind kind() const { return kind_; }
    int dimension() const { return dimension_; }
    bool x_independent() const { return x_independent_; }
    const std::string& name() const { return name_; }

    /// sup |d^2 p~ / d alpha^2| (absent when unknown).
    const std::optional<double>& d2_bound() const { return d2_bound_; }
    const std::optional<AnalyticDecay>& analytic_decay() const { return decay_; }
    /// Anisotropy factor for Henyey-Greenstein kernels.
    const std::optional<double>& g() const { return g_; }
    /// sup p~ (absent when unknown).
    const std::optional<double>& sup_value() const { return sup_value_; }
    const std::optional<AngleFunction>& second_derivative() const { return second_derivative_; }
    const std::optional<CosineForm>& cosine_form() const { return cosine_form_; }

    PhaseFunction& with_name(std::string name);
    PhaseFunction& with_d2_bound(double bound);
    PhaseFunction& with_analytic_decay(AnalyticDecay decay);
    PhaseFunction& with_g(double g);
    PhaseFunction& with_sup_value(double sup);
    PhaseFunction& with_second_derivative(AngleFunction f);
    PhaseFunction& with_cosine_form(CosineForm form);

private:
    Kind kind_;
    int dimension_;
    Evaluator eval_;
    bool x_independent_;
    std::string name_;
    std::optional<double> d2_bound_;
    std::optional<AnalyticDecay> decay_;
    std::optional<double> g_;
    std::optional<double> sup_value_;
    std::optional<AngleFunction> second_derivative_;
    std::optional<CosineForm> cosine_form_;
};

/// Uniform scattering: 1/(2pi) in 2D, 1/(4pi) in 3D.
PhaseFunction isotropic(int dimension);

/// 2D Poisson / Henyey-Greenstein kernel (1/2pi)(1-g^2)/(1-2g cos a+g^2),
/// Fourier coefficients g^|n|/(2pi). Throws DomainError unless 0 <= g < 1.
PhaseFunction hg2d(double g);

/// 3D Henyey-Greenstein kernel (1/4pi)(1-g^2)/(1-2g cos a+g^2)^{3/2}.
PhaseFunction hg3d(double g);

/// Tabulated kernel: header line, then "alpha value" rows with alpha strictly
/// increasing from 0 to pi. Extended evenly to [0, 2pi) and interpolated by a
/// periodic cubic spline; d2_bound is the spline's max |p~''| (attained at a
/// knot). The table is rescaled to unit normalization if it is off by at most
/// 1e-3; larger deviations, negative values or a negative interpolant throw
/// ConfigError.
PhaseFunction tabulated(std::istream& in, int dimension, std::optional<AnalyticDecay> decay = {});
PhaseFunction load_tabulated(const std::string& path, int dimension, std::optional<AnalyticDecay> decay = {});

/// Max |f''| over 4096 uniform nodes on [0, 2pi), times 1.01.
double sampled_d2_bound(const PhaseFunction::AngleFunction& second_derivative);

/// Outcome of one sufficient angular-resolution condition.
struct ConditionResult {
    bool applicable = false;
    bool pass = false;         // lhs <= bound
    bool strict_pass = false;  // lhs <  bound
    double lhs = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - lhs
    std::string form;     // "c2", "analytic" or "hg"
    std::string note;
    std::optional<int> minimal_M;
    std::optional<double> threshold_M;
};

/// ||d^2p~/da^2|| dtheta^2 <= (12/pi) mu_star. Inapplicable without d2_bound.
ConditionResult check_theta_condition_c2(const PhaseFunction& pf, double dtheta, double mu_star);

/// 4 pi C r^M / (1 - r^M) <= mu_star; 2 g^M / (1 - g^M) <= mu_star for the 2D
/// Henyey-Greenstein kernel. Reports the smallest M that satisfies it.
/// Throws DomainError when r >= 1.
ConditionResult check_theta_condition_analytic(const PhaseFunction& pf, int M, double mu_star);

/// Sum over nu of w_nu p(x; xi_n, xi_nu): dtheta * sum p~(theta_nu - theta_n)
/// in 2D, the sin-weighted double sum without poles in 3D.
template <int D>
double scattering_row_sum(const PhaseFunction& pf, const Grid<D>& grid, std::size_t n,
                          const Point& x = Point{});

}  // namespace rte
