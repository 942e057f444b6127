#include "rte/io/runner.hpp"

#include <omp.h>

#include <chrono>
#include <fstream>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "rte/error.hpp"
#include "rte/io/manifest.hpp"
#include "rte/io/snapshot.hpp"
#include "rte/stationary.hpp"
#include "rte/verification.hpp"

namespace rte::io {

using nlohmann::json;

namespace {

void print_condition(std::ostream& out, const char* label, const ConditionResult& c) {
    out << "  " << label << ": ";
    if (!c.applicable) {
        out << "inapplicable (" << c.note << ")\n";
        return;
    }
    out << "lhs " << c.lhs << " vs bound " << c.bound << " -> " << (c.pass ? "pass" : "fail");
    if (c.minimal_M) out << " (minimal M " << *c.minimal_M << ", threshold " << *c.threshold_M << ")";
    out << '\n';
}

void print_report(std::ostream& out, const StabilityReport& r) {
    out << std::setprecision(6);
    out << "CFL lhs " << r.cfl_lhs << " (<= 1: " << (r.cfl_pass ? "pass" : "fail") << ")\n";
    out << "mu* " << r.bounds.mu_star << ", c+ " << r.bounds.c_plus << ", (c mu_a)- " << r.bounds.c_mua_minus << '\n';
    if (r.dimension == 2) {
        print_condition(out, "theta condition (C2)", r.theta_c2);
        print_condition(out, "theta condition (analytic)", r.theta_analytic);
    } else {
        print_condition(out, "theta-phi condition", r.theta_phi);
    }
    out << "theta condition " << (r.theta_pass ? "pass" : "fail") << "\n";
    out << "overall " << (r.overall_pass ? "pass" : "fail") << '\n';
}

json history(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return a;
}

template <int D>
int check_mode(const RunConfig& cfg, Manifest& m, std::ostream& out) {
    const Problem<D> p = build_problem<D>(cfg);
    const StabilityReport r = check_stability<D>(*p.grid, p.medium, p.kernel);
    print_report(out, r);
    m.doc()["stability"] = to_json(r);
    if (!r.overall_pass) {
        m.set_status("refused", "stability conditions not satisfied");
        return kExitRefused;
    }
    return kExitOk;
}

template <int D>
int run_mode(const RunConfig& cfg, const CommandOptions& opt, const std::filesystem::path& dir, Manifest& m,
             std::ostream& out) {
    const Problem<D> p = build_problem<D>(cfg);
    TransientOptions to;
    to.snapshot_steps = snapshot_steps(cfg);
    to.keep_snapshots = false;
    to.enforce_stability = cfg.enforce_stability && !opt.force;
    m.doc()["snapshot_steps"] = to.snapshot_steps;
    m.doc()["stability"] = to_json(check_stability<D>(*p.grid, p.medium, p.kernel));
    auto emit = [&](const Field<D>& f) {
        for (const auto& path : emit_snapshot(f, f.level(), dir)) m.add_file(path);
        out << "snapshot k=" << f.level() << " t=" << p.grid->time(f.level()) << '\n';
    };
    TransientResult<D> r = run_transient<D>(p, to, emit);
    m.doc()["histories"] = {{"sup_norm", history(r.sup_history)}, {"sup_norm_bound", history(r.bound_history)}};
    m.doc()["positivity"] = {{"positive", r.positive}, {"min_value", r.min_value}};
    m.doc()["bound_ok"] = r.bound_ok;
    m.doc()["timing"] = {{"wall_seconds", r.wall_seconds},
                         {"steps", r.steps},
                         {"seconds_per_step", r.steps ? r.wall_seconds / r.steps : 0.0}};
    out << "steps " << r.steps << ", final sup norm " << r.sup_history.back() << ", positive "
        << (r.positive ? "yes" : "no") << ", bound " << (r.bound_ok ? "holds" : "violated") << '\n';
    return kExitOk;
}

template <int D>
int steady_mode(const RunConfig& cfg, const CommandOptions& opt, const std::filesystem::path& dir, Manifest& m,
                std::ostream& out) {
    const Problem<D> p = build_problem<D>(cfg);
    m.doc()["stability"] = to_json(check_stability<D>(*p.grid, p.medium, p.kernel));
    StationaryOptions<D> so;
    so.tol = cfg.steady.tol;
    so.max_iters = cfg.steady.max_iters;
    so.record_error_history = cfg.steady.record_error_history;
    so.enforce_preconditions = cfg.enforce_stability && !opt.force;
    SteadyResult<D> r = solve_stationary<D>(p, so);

    m.doc()["steady"] = {{"rho_bound", std::isfinite(r.rho) ? json(r.rho) : json(nullptr)},
                         {"lambda", std::isfinite(r.lambda) ? json(r.lambda) : json(nullptr)},
                         {"iterations", r.iterations},
                         {"converged", r.converged},
                         {"tol", r.tol},
                         {"empirical_ratio", r.empirical_ratio},
                         {"max_ratio", r.max_ratio},
                         {"error_proxy", r.error_proxy},
                         {"steady_residual", r.steady_residual}};
    m.doc()["histories"] = {{"residual", history(r.residual_history)}, {"error", history(r.error_history)}};
    m.doc()["timing"] = {{"wall_seconds", r.wall_seconds},
                         {"seconds_per_iteration", r.iterations ? r.wall_seconds / r.iterations : 0.0}};

    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < r.residual_history.size(); ++k) {
        const double e = k + 1 < r.error_history.size() ? r.error_history[k + 1] : std::nan("");
        rows.push_back({static_cast<double>(k + 1), r.residual_history[k], e});
    }
    std::filesystem::create_directories(dir);
    write_csv(dir / "residuals.csv", {"k", "residual", "error"}, rows);
    m.add_file(dir / "residuals.csv");
    r.J.set_level(r.iterations);
    for (const auto& path : emit_snapshot(r.J, r.iterations, dir)) m.add_file(path);

    out << std::setprecision(8) << "iterations " << r.iterations << (r.converged ? " (converged)" : " (not converged)")
        << ", final residual " << (r.residual_history.empty() ? 0.0 : r.residual_history.back()) << ", rho bound "
        << r.rho << ", empirical ratio " << r.empirical_ratio << '\n';
    if (!r.converged) m.set_status("unconverged", "max_iters reached before the tolerance");
    return kExitOk;
}

int convergence_mode(const RunConfig& cfg, const std::filesystem::path& dir, Manifest& m, std::ostream& out) {
    if (cfg.dimension != 2) throw ConfigError("dimension", "convergence studies are available for 2D configs");
    const Medium medium = build_medium(cfg);
    const PhaseFunction kernel = build_kernel(cfg);
    const auto coeffs = kernel_fourier_coefficients(kernel, 2);
    const double L1 = cfg.grid2.L1, L2 = cfg.grid2.L2;
    const double pi = std::numbers::pi;
    std::filesystem::create_directories(dir);
    json studies = json::array();
    for (const auto& kind_name : cfg.convergence.kinds) {
        StudySetup<2> setup{cfg.grid2, medium, kernel, {}, 1e-13};
        StudyKind kind = StudyKind::SpaceTime;
        if (kind_name == "space_time") {
            SpatialFactor s;
            s.value = [=](double t, const Point& x) {
                return std::exp(-t) * (1.0 + 0.5 * std::sin(pi * x[0] / L1) * std::sin(pi * x[1] / L2));
            };
            s.time_derivative = [s](double t, const Point& x) { return -s.value(t, x); };
            s.gradient = [=](double t, const Point& x) {
                const double e = 0.5 * std::exp(-t);
                return std::array<double, 3>{e * pi / L1 * std::cos(pi * x[0] / L1) * std::sin(pi * x[1] / L2),
                                             e * pi / L2 * std::sin(pi * x[0] / L1) * std::cos(pi * x[1] / L2), 0.0};
            };
            setup.exact = separable_solution_2d(s, AngularProfile{{1.0, 0.5}, {}}, coeffs);
        } else {
            kind = StudyKind::Angular;
            SpatialFactor s;
            s.value = [](double, const Point&) { return 1.0; };
            s.time_derivative = [](double, const Point&) { return 0.0; };
            s.gradient = [](double, const Point&) { return std::array<double, 3>{}; };
            setup.exact = separable_solution_2d(s, AngularProfile{{1.0, 0.5, 0.25}, {}}, coeffs);
        }
        const ConvergenceStudy study = run_convergence_study<2>(setup, cfg.convergence.levels, kind);
        std::vector<std::vector<double>> rows;
        for (const auto& l : study.levels) rows.push_back({double(l.level), l.dt, l.dx[0], l.dtheta, l.error});
        const auto csv = dir / ("convergence_" + kind_name + ".csv");
        write_csv(csv, {"level", "dt", "dx", "dtheta", "error"}, rows);
        m.add_file(csv);
        studies.push_back(to_json(study));
        out << kind_name << ": order " << (study.order ? std::to_string(*study.order) : std::string("undefined"))
            << (study.warning.empty() ? "" : " (" + study.warning + ")") << '\n';
    }
    m.doc()["convergence"] = studies;
    std::ofstream(dir / "convergence.json") << json{{"studies", studies}}.dump(2) << '\n';
    m.add_file(dir / "convergence.json");
    return kExitOk;
}

}  // namespace

int run_command(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
    const auto t0 = std::chrono::steady_clock::now();
    Manifest m;
    m.doc()["mode"] = to_string(opt.mode);
    m.doc()["threads"] = omp_get_max_threads();
    m.doc()["force"] = opt.force;
    std::optional<std::filesystem::path> dir = opt.out;
    int code = kExitOk;

    auto finish = [&]() {
        if (!dir) return;
        m.doc()["total_wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        try {
            const auto path = m.write(*dir);
            out << "manifest " << path.string() << '\n';
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            code = kExitError;
        }
    };

    try {
        RunConfig cfg = parse_config(opt.config);
        cfg.mode = opt.mode;
        if (!dir) dir = cfg.output.directory;
        m.doc()["config"] = to_json(cfg);
        const bool two = cfg.dimension == 2;
        switch (opt.mode) {
            case Mode::Check: code = two ? check_mode<2>(cfg, m, out) : check_mode<3>(cfg, m, out); break;
            case Mode::Run:
                code = two ? run_mode<2>(cfg, opt, *dir, m, out) : run_mode<3>(cfg, opt, *dir, m, out);
                break;
            case Mode::Steady:
                code = two ? steady_mode<2>(cfg, opt, *dir, m, out) : steady_mode<3>(cfg, opt, *dir, m, out);
                break;
            case Mode::Convergence: code = convergence_mode(cfg, *dir, m, out); break;
        }
    } catch (const StationaryRefusal& e) {
        m.set_status("refused", e.reason());
        m.doc()["stability"] = to_json(e.report());
        print_report(out, e.report());
        err << "refused: " << e.reason() << " (use --force to override)\n";
        code = kExitRefused;
    } catch (const StabilityRefusal& e) {
        m.set_status("refused", e.what());
        m.doc()["stability"] = to_json(e.report());
        print_report(out, e.report());
        err << "refused: " << e.what() << " (use --force to override)\n";
        code = kExitRefused;
    } catch (const NumericalError& e) {
        m.set_status("aborted", e.what());
        m.doc()["abort"] = {{"step", e.step()}, {"index", e.index()}};
        err << "aborted: " << e.what() << '\n';
        code = kExitError;
    } catch (const ConfigError& e) {
        m.set_status("error", e.what());
        if (!e.field().empty()) m.doc()["error_field"] = e.field();
        err << "config error: " << e.what() << '\n';
        code = kExitError;
    } catch (const std::exception& e) {
        m.set_status("error", e.what());
        err << "error: " << e.what() << '\n';
        code = kExitError;
    }
    finish();
    return code;
}

}  // namespace rte::io
