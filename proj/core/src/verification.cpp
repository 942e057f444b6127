#include "rte/verification.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rte/error.hpp"

namespace rte {

namespace {
constexpr double kPi = std::numbers::pi;
}

TrapezoidError trapezoid_error(const std::function<double(double)>& f, const std::function<double(double)>& f2,
                               int M, std::optional<double> d2_sup) {
    if (M < 1) throw ConfigError("M", "must be positive");
    TrapezoidError r;
    // 1e-13 absolute is below double precision once int |f| is large
    double mass = 0.0;
    for (int k = 0; k < 4096; ++k) mass += std::abs(f(2.0 * kPi * k / 4096));
    mass *= 2.0 * kPi / 4096;
    r.integral = integrate_adaptive(f, 0.0, 2.0 * kPi, 1e-13 * std::max(1.0, mass)).value;
    const double h = 2.0 * kPi / M;
    double s = 0.0;
    for (int m = 0; m < M; ++m) s += f(m * h);
    r.sum = h * s;
    r.error = r.integral - r.sum;
    double sup = 0.0;
    if (d2_sup) {
        sup = *d2_sup;
    } else {
        for (int k = 0; k < 4096; ++k) sup = std::max(sup, std::abs(f2(2.0 * kPi * k / 4096)));
    }
    r.bound = kPi / 12.0 * sup * h * h;
    return r;
}

double fourier_cosine_coefficient(const std::function<double(double)>& f, int n) {
    const auto v = integrate_adaptive([&](double a) { return f(a) * std::cos(n * a); }, 0.0, 2.0 * kPi, 1e-13);
    return v.value / (2.0 * kPi);
}

std::vector<double> kernel_fourier_coefficients(const PhaseFunction& pf, int K) {
    std::vector<double> c(static_cast<std::size_t>(K) + 1);
    const bool hg = pf.kind() == PhaseFunction::Kind::HenyeyGreenstein && pf.dimension() == 2 && pf.g();
    for (int k = 0; k <= K; ++k) {
        c[k] = hg ? std::pow(*pf.g(), k) / (2.0 * kPi)
                  : fourier_cosine_coefficient([&pf](double a) { return pf(a); }, k);
    }
    return c;
}

double AngularProfile::operator()(double theta) const {
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::cos(k * theta);
    for (std::size_t k = 0; k < b.size(); ++k) v += b[k] * std::sin(k * theta);
    return v;
}

double AngularProfile::convolved(double theta, const std::vector<double>& c) const {
    const std::size_t need = std::max(a.size(), b.size());
    if (c.size() < need) throw ConfigError("kernel", "not enough kernel Fourier coefficients for the profile");
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) v += 2.0 * kPi * c[k] * a[k] * std::cos(k * theta);
    for (std::size_t k = 0; k < b.size(); ++k) v += 2.0 * kPi * c[k] * b[k] * std::sin(k * theta);
    return v;
}

ManufacturedSolution separable_solution_2d(SpatialFactor s, AngularProfile f, std::vector<double> coeffs) {
    ManufacturedSolution m;
    m.value = [s, f](double t, const Point& x, const Direction& d) { return s.value(t, x) * f(d.theta); };
    m.time_derivative = [s, f](double t, const Point& x, const Direction& d) {
        return s.time_derivative(t, x) * f(d.theta);
    };
    m.gradient = [s, f](double t, const Point& x, const Direction& d) {
        auto g = s.gradient(t, x);
        const double v = f(d.theta);
        for (double& c : g) c *= v;
        return g;
    };
    m.scattered = [s, f, coeffs](double t, const Point& x, const Direction& d) {
        return s.value(t, x) * f.convolved(d.theta, coeffs);
    };
    return m;
}

PhaseSampler manufactured_source(const ManufacturedSolution& exact, const Medium& medium) {
    return [exact, medium](double t, const Point& x, const Direction& d) {
        const auto grad = exact.gradient(t, x, d);
        const double transport = d.xi[0] * grad[0] + d.xi[1] * grad[1] + d.xi[2] * grad[2];
        const double mua = medium.mu_a(x), mus = medium.mu_s(x);
        return exact.time_derivative(t, x, d) / medium.c(x) + transport + (mua + mus) * exact.value(t, x, d) -
               mus * exact.scattered(t, x, d);
    };
}

double fit_order(const std::vector<double>& h, const std::vector<double>& error) {
    const std::size_t n = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]), y = std::log(error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const char* to_string(StudyKind kind) { return kind == StudyKind::SpaceTime ? "space_time" : "angular"; }

namespace {

template <int D>
GridConfig<D> refine(const GridConfig<D>& base, int level, StudyKind kind) {
    GridConfig<D> c = base;
    const int f = 1 << level;
    if (kind == StudyKind::SpaceTime) {
        c.M1 *= f;
        c.M2 *= f;
        if constexpr (D == 3) c.M3 *= f;
        c.dt /= f;
    } else {
        if constexpr (D == 2) {
            c.M *= f;
        } else {
            c.Mtheta *= f;
            c.Mphi *= f;
        }
    }
    return c;
}

template <int D>
GridPtr<D> make_grid(const GridConfig<D>& c) {
    if constexpr (D == 2) return build_grid2d(c);
    else return build_grid3d(c);
}

template <int D>
double error_against(const Field<D>& field, const PhaseSampler& exact, double t) {
    const auto& g = field.grid();
    double e = 0.0;
    auto visit = [&](std::size_t p, std::size_t n) {
        e = std::max(e, std::abs(field(p, n) - exact(t, g.position(p), g.direction(n))));
    };
    for (std::size_t p : g.interior_points()) {
        for (std::size_t n = 0; n < g.num_directions(); ++n) visit(p, n);
    }
    for (const auto& en : g.inflow()) visit(en.point, en.direction);
    return e;
}

}  // namespace

template <int D>
ConvergenceStudy run_convergence_study(const StudySetup<D>& setup, int levels, StudyKind kind) {
    if (levels < 2) throw ConfigError("levels", "need at least two refinement levels");
    ConvergenceStudy study;
    study.kind = kind;
    const PhaseSampler q = manufactured_source(setup.exact, setup.medium);
    for (int l = 0; l < levels; ++l) {
        const auto grid = make_grid<D>(refine<D>(setup.base, l, kind));
        Problem<D> problem{grid, setup.medium, setup.kernel, Sources{}};
        problem.sources.q = q;
        problem.sources.I0 = setup.exact.value;
        problem.sources.I1 = setup.exact.value;
        ConvergenceLevel lv;
        lv.level = l;
        lv.dt = grid->dt();
        for (int a = 0; a < D; ++a) lv.dx[a] = grid->spacing(a);
        lv.dtheta = grid->dtheta();
        lv.dphi = grid->dphi();
        if (kind == StudyKind::SpaceTime) {
            TransientOptions opts;
            const auto r = run_transient<D>(problem, opts);
            lv.work = r.steps;
            lv.error = error_against(r.final_field, setup.exact.value, grid->T());
        } else {
            problem.sources.q_time_dependent = false;
            problem.sources.I1_time_dependent = false;
            StationaryOptions<D> opts;
            opts.tol = setup.steady_tol;
            const auto r = solve_stationary<D>(problem, opts);
            if (!r.converged) {
                study.warning += (study.warning.empty() ? "" : "; ") + std::string("level ") + std::to_string(l) +
                                 " did not converge";
            }
            lv.work = r.iterations;
            lv.error = error_against(r.J, setup.exact.value, 0.0);
        }
        study.levels.push_back(lv);
    }

    const auto& L = study.levels;
    // below this the exact solution is reproduced to round-off
    constexpr double kErrorFloor = 1e-13;
    const std::size_t first = L.size() >= 3 ? L.size() - 3 : 0;
    std::vector<double> h, e;
    for (std::size_t i = first; i < L.size(); ++i) {
        if (!(L[i].error > kErrorFloor)) study.degenerate = true;
        h.push_back(kind == StudyKind::SpaceTime ? L[i].dx[0] : L[i].dtheta);
        e.push_back(L[i].error);
    }
    for (std::size_t i = 1; i < L.size(); ++i) {
        if (!(L[i].error < L[i - 1].error) && L[i].error > kErrorFloor) study.monotone = false;
    }
    std::vector<std::string> notes;
    if (!study.monotone) notes.push_back("errors are not monotonically decreasing");
    if (study.degenerate) {
        notes.push_back("errors reached round-off, order undefined");
    } else {
        study.order = fit_order(h, e);
    }
    for (const auto& n : notes) study.warning += (study.warning.empty() ? "" : "; ") + n;

    auto measure = [&](const ConvergenceLevel& lv) {
        const double a = lv.dtheta * lv.dtheta + lv.dphi * lv.dphi;
        return kind == StudyKind::SpaceTime ? lv.dt + a : a;
    };
    const double C = L.front().error / measure(L.front());
    for (const auto& lv : L) {
        if (lv.error > 1.5 * C * measure(lv) * (1.0 + 1e-12)) study.bound_ok = false;
    }
    return study;
}

template <int D>
DenseSystem assemble_dense_system(const Problem<D>& problem, std::size_t cap) {
    const auto& g = *problem.grid;
    const std::size_t nd = g.num_directions();
    const std::size_t N = g.interior_points().size() * nd;
    if (N > cap) {
        throw ConfigError("grid", "dense oracle limited to " + std::to_string(cap) + " unknowns, got " +
                                      std::to_string(N));
    }
    const auto medium = sample_medium(problem.medium, g);
    DenseSystem sys;
    sys.size = N;
    sys.matrix.assign(N * N, 0.0);
    sys.rhs.assign(N, 0.0);
    std::vector<long> row_of(g.num_points(), -1);
    for (std::size_t i = 0; i < g.interior_points().size(); ++i) row_of[g.interior_points()[i]] = static_cast<long>(i);
    for (std::size_t p : g.interior_points()) {
        for (std::size_t n = 0; n < nd; ++n) sys.unknowns.push_back({p, n});
    }

    auto inflow_value = [&](std::size_t p, std::size_t n) {
        return problem.sources.I1 ? problem.sources.I1(0.0, g.position(p), g.direction(n)) : 0.0;
    };
    auto angle = [&](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        const std::array<double, 3> c{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
        const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        return std::atan2(std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]), dot);
    };

    for (std::size_t r = 0; r < N; ++r) {
        const auto [p, n] = sys.unknowns[r];
        const auto& xi = g.direction(n).xi;
        const auto idx = g.point_index(p);
        const Point x = g.position(p);
        double* row = &sys.matrix[r * N];
        double diag = medium.mu_a[p] + medium.mu_s[p];
        for (int a = 0; a < D; ++a) {
            const double dx = g.spacing(a);
            diag += std::abs(xi[a]) / dx;
            // -A couples to i-1 with (|xi|+xi)/(2dx) and to i+1 with (|xi|-xi)/(2dx).
            const double lower = (std::abs(xi[a]) + xi[a]) / (2.0 * dx);
            const double upper = (std::abs(xi[a]) - xi[a]) / (2.0 * dx);
            for (int side = 0; side < 2; ++side) {
                const double w = side == 0 ? lower : upper;
                if (w == 0.0) continue;
                auto nb = idx;
                nb[a] += side == 0 ? -1 : 1;
                const std::size_t q = g.point(nb);
                if (row_of[q] >= 0) {
                    row[static_cast<std::size_t>(row_of[q]) * nd + n] -= w;
                } else {
                    sys.rhs[r] += w * inflow_value(q, n);
                }
            }
        }
        row[r] += diag;
        for (std::size_t nu = 0; nu < nd; ++nu) {
            const double w = g.weight(nu);
            if (w == 0.0) continue;
            row[static_cast<std::size_t>(row_of[p]) * nd + nu] -=
                medium.mu_s[p] * w * problem.kernel(x, angle(xi, g.direction(nu).xi));
        }
        if (problem.sources.q) sys.rhs[r] += problem.sources.q(0.0, x, g.direction(n));
    }
    return sys;
}

std::vector<double> solve_dense(const DenseSystem& system) {
    const auto N = static_cast<Eigen::Index>(system.size);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(system.matrix.data(), N,
                                                                                                N);
    Eigen::Map<const Eigen::VectorXd> b(system.rhs.data(), N);
    const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(Eigen::MatrixXd(A)).solve(b);
    return std::vector<double>(x.data(), x.data() + N);
}

template <int D>
Field<D> dense_solution_field(const DenseSystem& system, const std::vector<double>& x, const Problem<D>& problem) {
    Field<D> f(problem.grid);
    for (std::size_t r = 0; r < system.size; ++r) f(system.unknowns[r][0], system.unknowns[r][1]) = x[r];
    const auto& g = *problem.grid;
    for (const auto& e : g.inflow()) {
        f(e.point, e.direction) =
            problem.sources.I1 ? problem.sources.I1(0.0, g.position(e.point), g.direction(e.direction)) : 0.0;
    }
    return f;
}

template ConvergenceStudy run_convergence_study(const StudySetup<2>&, int, StudyKind);
template ConvergenceStudy run_convergence_study(const StudySetup<3>&, int, StudyKind);
template DenseSystem assemble_dense_system(const Problem<2>&, std::size_t);
template DenseSystem assemble_dense_system(const Problem<3>&, std::size_t);
template Field<2> dense_solution_field(const DenseSystem&, const std::vector<double>&, const Problem<2>&);
template Field<3> dense_solution_field(const DenseSystem&, const std::vector<double>&, const Problem<3>&);

}  // namespace rte
