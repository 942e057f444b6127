#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "corpus.hpp"
#include "generators.hpp"
#include "rte/error.hpp"
#include "rte/verification.hpp"

using namespace rte;
using rte::testing::Gen;
using rte::testing::periodic_corpus;

namespace {

constexpr double kPi = std::numbers::pi;
// accuracy of the adaptive reference integrals
constexpr double kReferenceTol = 1e-13;

}  // namespace

TEST(TrapezoidError, LowHarmonicIsExact) {
    const auto e = trapezoid_error([](double t) { return std::cos(t); }, [](double t) { return -std::cos(t); }, 8);
    EXPECT_NEAR(e.sum, 0.0, 1e-15);
    EXPECT_NEAR(e.error, 0.0, kReferenceTol);
}

TEST(TrapezoidError, Aliasing) {
    const auto e = trapezoid_error([](double t) { return std::cos(8 * t); },
                                   [](double t) { return -64 * std::cos(8 * t); }, 8, 64.0);
    EXPECT_NEAR(e.error, -2 * kPi, 1e-12);
    EXPECT_NEAR(e.bound, kPi * kPi * kPi / 3, 1e-12);
    EXPECT_LE(std::abs(e.error), e.bound);
}

TEST(TrapezoidError, Hg09AnalyticBound) {
    const auto pf = hg2d(0.9);
    const auto e = trapezoid_error([&](double t) { return pf(t); }, *pf.second_derivative(), 64);
    EXPECT_NEAR(e.integral, 1.0, kReferenceTol);
    const double r64 = std::pow(0.9, 64);
    // aliasing makes the HG error equal to the bound, up to the reference accuracy
    EXPECT_LE(std::abs(e.error), 4 * kPi / (2 * kPi) * r64 / (1 - r64) + kReferenceTol);
}

TEST(TrapezoidError, PeriodicCorpus) {
    const auto corpus = periodic_corpus();
    ASSERT_EQ(corpus.size(), 20u);
    for (const auto& f : corpus) {
        for (int M = 4; M <= 256; ++M) {
            const auto e = trapezoid_error(f.f, f.f2, M);
            ASSERT_LE(std::abs(e.error), e.bound + kReferenceTol) << f.name << " M=" << M;
        }
    }
}

TEST(TrapezoidError, HgAnalyticCorpus) {
    for (int k = 1; k <= 9; ++k) {
        const double g = 0.1 * k;
        const auto pf = hg2d(g);
        for (int M = 8; M <= 128; M += 8) {
            const auto e = trapezoid_error([&](double t) { return pf(t); }, *pf.second_derivative(), M);
            const double rm = std::pow(g, M);
            ASSERT_LE(std::abs(e.error), 2 * rm / (1 - rm) + kReferenceTol) << g << " " << M;
        }
    }
}

TEST(FourierCoefficients, HgClosedFormMatchesQuadrature) {
    for (double g : {0.2, 0.5, 0.9}) {
        const auto pf = hg2d(g);
        const auto c = kernel_fourier_coefficients(pf, 6);
        for (int k = 0; k <= 6; ++k) {
            EXPECT_NEAR(c[k], std::pow(g, k) / (2 * kPi), 1e-15);
            EXPECT_NEAR(fourier_cosine_coefficient([&](double a) { return pf(a); }, k), c[k], 1e-12);
        }
    }
}

TEST(FourierCoefficients, ConvolutionMatchesQuadrature) {
    const auto pf = hg2d(0.7);
    const AngularProfile f{{1.0, 0.5, -0.2}, {0.0, 0.3}};
    const auto c = kernel_fourier_coefficients(pf, 2);
    for (double th : {0.0, 0.4, 2.0, 5.5}) {
        const auto ref = integrate_adaptive([&](double s) { return pf(th - s) * f(s); }, 0.0, 2 * kPi);
        EXPECT_NEAR(f.convolved(th, c), ref.value, 1e-12);
    }
    // cos theta alone picks up c_1 = g / 2pi
    const AngularProfile cos1{{0.0, 1.0}, {}};
    EXPECT_NEAR(cos1.convolved(0.3, c), 0.7 * std::cos(0.3), 1e-15);
}

TEST(ManufacturedSource, ConstantIsotropic) {
    SpatialFactor s{[](double, const Point&) { return 1.0; }, [](double, const Point&) { return 0.0; },
                    [](double, const Point&) { return std::array<double, 3>{}; }};
    const auto coeffs = kernel_fourier_coefficients(isotropic(2), 1);
    const auto exact = separable_solution_2d(s, AngularProfile{{2.5}, {}}, coeffs);
    const auto q = manufactured_source(exact, Medium::uniform(0.7, 0.3, 1.4));
    Direction d;
    d.theta = 1.1;
    d.xi = {std::cos(1.1), std::sin(1.1), 0};
    EXPECT_NEAR(q(0.2, {0.3, 0.4, 0}, d), 0.3 * 2.5, 1e-15);
}

TEST(ManufacturedSource, ResidualAtRandomPoints) {
    const double L1 = 2.0, c = 0.8, mua = 0.4, mus = 1.3, g = 0.6;
    SpatialFactor s{[=](double t, const Point& x) { return std::exp(-t) * (1 + std::sin(kPi * x[0] / L1)); },
                    [=](double t, const Point& x) { return -std::exp(-t) * (1 + std::sin(kPi * x[0] / L1)); },
                    [=](double t, const Point& x) {
                        return std::array<double, 3>{std::exp(-t) * kPi / L1 * std::cos(kPi * x[0] / L1), 0, 0};
                    }};
    const auto pf = hg2d(g);
    const AngularProfile prof{{1.0, 0.5}, {}};
    const auto exact = separable_solution_2d(s, prof, kernel_fourier_coefficients(pf, 1));
    const auto q = manufactured_source(exact, Medium::uniform(c, mua, mus));
    Gen gen(71);
    for (int k = 0; k < 1000; ++k) {
        const double t = gen.uniform(0, 1), x1 = gen.uniform(0, L1), th = gen.uniform(0, 2 * kPi);
        Direction d;
        d.theta = th;
        d.xi = {std::cos(th), std::sin(th), 0};
        const double e = std::exp(-t), S = 1 + std::sin(kPi * x1 / L1), f = 1 + 0.5 * std::cos(th);
        const double I = e * S * f;
        const double dI_dt = -I;
        const double dI_dx1 = e * kPi / L1 * std::cos(kPi * x1 / L1) * f;
        const double scattered = e * S * (1 + 0.5 * g * std::cos(th));
        const double lhs = dI_dt / c + d.xi[0] * dI_dx1 + (mua + mus) * I - mus * scattered;
        ASSERT_NEAR(q(t, {x1, 0.5, 0}, d), lhs, 1e-12);
    }
}

TEST(FitOrder, ExactPowerLaw) {
    EXPECT_NEAR(fit_order({0.1, 0.05, 0.025}, {3e-2, 7.5e-3, 1.875e-3}), 2.0, 1e-12);
}

TEST(ConvergenceStudy, ZeroSolutionIsDegenerate) {
    SpatialFactor s{[](double, const Point&) { return 0.0; }, [](double, const Point&) { return 0.0; },
                    [](double, const Point&) { return std::array<double, 3>{}; }};
    const auto pf = hg2d(0.5);
    StudySetup<2> setup{{1.0, 1.0, 4, 4, 8, 0.0625, 0.25}, Medium::uniform(1.0, 0.5, 1.0), pf,
                        separable_solution_2d(s, AngularProfile{{1.0}, {}}, kernel_fourier_coefficients(pf, 1))};
    const auto study = run_convergence_study<2>(setup, 3, StudyKind::SpaceTime);
    EXPECT_TRUE(study.degenerate);
    EXPECT_FALSE(study.order.has_value());
    for (const auto& l : study.levels) EXPECT_EQ(l.error, 0.0);
}

TEST(ConvergenceStudy, SpaceTimeLevelsKeepRatiosFixed) {
    SpatialFactor s{[](double t, const Point& x) { return std::exp(-t) * (1 + 0.5 * std::sin(kPi * x[0])); },
                    [](double t, const Point& x) { return -std::exp(-t) * (1 + 0.5 * std::sin(kPi * x[0])); },
                    [](double t, const Point& x) {
                        return std::array<double, 3>{0.5 * kPi * std::exp(-t) * std::cos(kPi * x[0]), 0, 0};
                    }};
    const auto pf = hg2d(0.5);
    StudySetup<2> setup{{1.0, 1.0, 4, 4, 16, 0.0625, 0.25}, Medium::uniform(1.0, 0.5, 1.0), pf,
                        separable_solution_2d(s, AngularProfile{{1.0, 0.5}, {}}, kernel_fourier_coefficients(pf, 1))};
    const auto study = run_convergence_study<2>(setup, 3, StudyKind::SpaceTime);
    ASSERT_EQ(study.levels.size(), 3u);
    for (const auto& l : study.levels) {
        EXPECT_DOUBLE_EQ(l.dt / l.dx[0], 0.25);
        EXPECT_DOUBLE_EQ(l.dt / l.dx[1], 0.25);
        EXPECT_DOUBLE_EQ(l.dtheta, 2 * kPi / 16);
    }
    EXPECT_TRUE(study.monotone);
    ASSERT_TRUE(study.order.has_value());
    EXPECT_GT(*study.order, 0.5);
}

TEST(DenseSystem, SingleInteriorPointStructure) {
    const double mua = 0.3, mus = 1.2;
    Problem<2> p{build_grid2d({2.0, 2.0, 2, 2, 4, 0.1, 1.0}), Medium::uniform(1.0, mua, mus), isotropic(2), {}};
    const auto sys = assemble_dense_system<2>(p);
    ASSERT_EQ(sys.size, 4u);
    const double rate = 1.0;  // |xi| / dx on an axis direction, dx = 1
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double expect = (i == j ? rate + mus + mua : 0.0) - mus * (2 * kPi / 4) / (2 * kPi);
            EXPECT_NEAR(sys.matrix[i * 4 + j], expect, 1e-15);
        }
    }
}

TEST(DenseSystem, ZeroDataGivesZeroSolution) {
    Problem<2> p{build_grid2d({1.0, 1.0, 4, 4, 6, 0.1, 1.0}), Medium::uniform(1.0, 0.5, 1.0), hg2d(0.4), {}};
    for (double v : solve_dense(assemble_dense_system<2>(p))) EXPECT_EQ(v, 0.0);
}

TEST(DenseSystem, CapIsEnforced) {
    Problem<2> p{build_grid2d({1.0, 1.0, 10, 10, 8, 0.1, 1.0}), Medium::uniform(1.0, 0.5, 1.0), hg2d(0.4), {}};
    EXPECT_THROW(assemble_dense_system<2>(p), ConfigError);
}

TEST(DenseSystem, IteratedSolutionSatisfiesTheSystem) {
    Problem<2> p{build_grid2d({1.0, 1.0, 6, 6, 8, 0.05, 1.0}), Medium::uniform(1.0, 0.7, 1.0), hg2d(0.5), {}};
    p.sources.q = [](double, const Point& x, const Direction& d) { return 1 + x[1] * x[1] + std::sin(d.theta); };
    p.sources.I1 = [](double, const Point& x, const Direction& d) { return x[0] + 1 + std::cos(d.theta); };
    StationaryOptions<2> opt;
    const auto r = solve_stationary<2>(p, opt);
    ASSERT_TRUE(r.converged);
    const auto sys = assemble_dense_system<2>(p);
    double worst = 0.0;
    for (std::size_t i = 0; i < sys.size; ++i) {
        double s = -sys.rhs[i];
        for (std::size_t j = 0; j < sys.size; ++j) {
            const auto [pt, n] = sys.unknowns[j];
            s += sys.matrix[i * sys.size + j] * r.J(pt, n);
        }
        worst = std::max(worst, std::abs(s));
    }
    // successive differences of 1e-12 leave an O(tol / (1 - rho)) error in J
    EXPECT_LE(worst, 10 * opt.tol / (1 - r.rho));
}
