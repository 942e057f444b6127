#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "rte/scheme3d.hpp"
#include "rte/stationary.hpp"

using namespace rte;
using rte::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

Grid3DConfig cube(int cells, int mt, int mp, double dt = 0.01, double T = 0.1) {
    return {1.0, 1.0, 1.0, cells, cells, cells, mt, mp, dt, T};
}

}  // namespace

TEST(ThetaPhiCondition, IsotropicClosedForm) {
    const Grid3D g(cube(2, 6, 12));
    const auto s = angular_second_derivative_sups(hg3d(0.0), {0, 0, 1});
    EXPECT_NEAR(s.theta, 1.0 / (4 * kPi), 1e-15);
    EXPECT_NEAR(s.phi, 0.0, 1e-15);
    const auto r = check_theta_phi_condition(g, hg3d(0.0), 1.0);
    EXPECT_NEAR(r.lhs, 1.01 * g.dtheta() * g.dtheta() / (4 * kPi), 1e-15);
    EXPECT_NEAR(r.bound, 6.0 / (kPi * kPi), 1e-15);
    EXPECT_TRUE(r.pass);
}

TEST(ThetaPhiCondition, FineAngularGridsPass) {
    EXPECT_TRUE(check_theta_phi_condition(Grid3D(cube(2, 128, 256)), hg3d(0.5), 0.05).pass);
    const Grid3D coarse(cube(2, 8, 16)), fine(cube(2, 32, 64));
    EXPECT_LT(check_theta_phi_condition(fine, hg3d(0.5), 1.0).lhs,
              check_theta_phi_condition(coarse, hg3d(0.5), 1.0).lhs / 10);
}

TEST(ThetaPhiCondition, SpatiallyVaryingKernelIsInapplicable) {
    const Grid3D g(cube(2, 6, 12));
    PhaseFunction pf(PhaseFunction::Kind::Custom, 3, [](const Point& x, double) { return (1 + x[0]) / (4 * kPi); },
                     false);
    const auto r = check_theta_phi_condition(g, pf, 1.0);
    EXPECT_FALSE(r.applicable);
    EXPECT_FALSE(r.pass);
}

TEST(ThetaPhiCondition, RepresentativesCoverEveryGridDirection) {
    const Grid3D g(cube(2, 6, 12));
    const auto pf = hg3d(0.5);
    const auto r = check_theta_phi_condition(g, pf, 1.0);
    const double dth = g.dtheta(), dph = g.dphi();
    for (std::size_t n = 0; n < g.num_directions(); ++n) {
        const auto s = angular_second_derivative_sups(pf, g.direction(n).xi);
        EXPECT_LE(1.01 * (dth * dth * s.theta + 0.5 * dph * dph * s.phi), r.lhs * (1 + 1e-12)) << n;
    }
}

TEST(ThetaPhiCondition, RandomDirectionsStayWithinSafetyFactor) {
    Gen gen(61);
    const Grid3D g(cube(2, 6, 12));
    const auto pf = hg3d(0.5);
    const auto r = check_theta_phi_condition(g, pf, 1.0);
    const double dth = g.dtheta(), dph = g.dphi();
    for (int k = 0; k < 3; ++k) {
        const double z = gen.uniform(-1, 1), a = gen.uniform(0, 2 * kPi), s = std::sqrt(1 - z * z);
        const auto sup = angular_second_derivative_sups(pf, {s * std::cos(a), s * std::sin(a), z});
        EXPECT_LE(dth * dth * sup.theta + 0.5 * dph * dph * sup.phi, r.lhs);
    }
}

TEST(ThetaPhiCondition, ClosedFormMatchesFiniteDifferences) {
    // a kernel without a cosine form goes through the central-difference path
    const auto hg = hg3d(0.4);
    PhaseFunction plain(PhaseFunction::Kind::Custom, 3, [hg](const Point&, double a) { return hg(a); }, true);
    for (const auto& xi : {std::array<double, 3>{0, 0, 1}, std::array<double, 3>{0.6, 0, 0.8}}) {
        const auto a = angular_second_derivative_sups(hg, xi);
        const auto b = angular_second_derivative_sups(plain, xi);
        EXPECT_NEAR(a.theta, b.theta, 1e-5 * a.theta);
        EXPECT_NEAR(a.phi, b.phi, 1e-5 * a.theta);
    }
}

TEST(CheckStability3d, Cfl) {
    const Grid3D g(Grid3DConfig{1.2, 1.2, 1.2, 3, 3, 3, 6, 12, 0.1, 1.0});
    MediumBounds b{1.0, 1.0, 0.5, 0.5, 0.5};
    const auto r = check_stability_3d(g, b, hg3d(0.0));
    EXPECT_NEAR(r.cfl_lhs, 0.75, 1e-15);
    EXPECT_TRUE(r.cfl_pass);
    EXPECT_TRUE(r.overall_pass);
}

TEST(SphericalRowSum, IsotropicWithinTrapezoidBound) {
    const Grid3D g(cube(2, 32, 32));
    for (int m : {0, 1, 16, 31, 32}) {
        const double s = spherical_row_sum(hg3d(0.0), g, m, 3);
        EXPECT_LE(std::abs(s - 1.0), kPi / 12 * g.dtheta() * g.dtheta());
    }
}

TEST(SphericalRowSum, SinglePolarIntervalIsEmpty) {
    const Grid3D g(cube(2, 1, 8));
    EXPECT_EQ(g.num_directions(), 2u);
    EXPECT_EQ(spherical_row_sum(hg3d(0.3), g, 0, 0), 0.0);
}

TEST(SphericalRowSum, AzimuthalShiftInvariance) {
    const Grid3D g(cube(2, 8, 16));
    const auto pf = hg3d(0.5);
    for (int m = 1; m < 8; ++m) {
        const double s0 = spherical_row_sum(pf, g, m, 0);
        for (int n = 1; n < 16; n += 3) EXPECT_NEAR(spherical_row_sum(pf, g, m, n), s0, 1e-14);
    }
}

TEST(SphericalRowSum, BoundedWhenConditionHolds) {
    for (double gval : {0.0, 0.3, 0.6}) {
        for (int mt : {6, 10, 16}) {
            const Grid3D g(cube(2, mt, 2 * mt));
            const double mu_star = 1.0;
            const auto pf = hg3d(gval);
            if (!check_theta_phi_condition(g, pf, mu_star).pass) continue;
            for (std::size_t n = 0; n < g.num_directions(); ++n) {
                EXPECT_LE(scattering_row_sum<3>(pf, g, n), 1.0 + mu_star);
            }
        }
    }
}

TEST(Step3d, MatchesSixCaseOracle) {
    Gen gen(62);
    Problem<3> p{build_grid3d({1, 1, 1, 4, 4, 4, 5, 8, 0.02, 0.2}), Medium::uniform(1.0, 0.6, 1.2), hg3d(0.4), {}};
    p.sources.q = [](double t, const Point& x, const Direction& d) { return 1 + t + x[2] * d.xi[0]; };
    TransientSolver<3> s(p);
    auto in = rte::testing::random_field<3>(p.grid, gen);
    rte::testing::poison_outflow(in);
    Field<3> out(p.grid);
    s.step(in, out);
    const double c = 1.0, dt = 0.02, mua = 0.6, mus = 1.2;
    for (std::size_t q : p.grid->interior_points()) {
        const auto [i, j, l] = p.grid->point_index(q);
        for (std::size_t n = 0; n < p.grid->num_directions(); ++n) {
            const double B = rte::testing::naive_B_3d(in, i, j, l, n);
            const double K = rte::testing::naive_K<3>(in, p.kernel, mus, q, n);
            const double src = p.sources.q(0.0, p.grid->position(q), p.grid->direction(n));
            const double ref = ((1 - c * dt * rte::testing::rate(*p.grid, n)) * in(q, n) + c * dt * (B + K + src)) /
                               (1 + c * dt * (mus + mua));
            EXPECT_NEAR(out(q, n), ref, 1e-14);
        }
    }
}

TEST(Step3d, ZeroStaysZero) {
    Problem<3> p{build_grid3d(cube(3, 4, 8)), Medium::uniform(1.0, 0.5, 1.0), hg3d(0.2), {}};
    EXPECT_EQ(sup_norm(run_transient<3>(p).final_field), 0.0);
}

TEST(Step3d, ExactShiftPerAxis) {
    // +e1 is (m, n) = (Mtheta/2, 0), +e2 is (Mtheta/2, Mphi/4), +e3 the north pole
    const auto g = build_grid3d({4.0, 4.0, 4.0, 8, 8, 8, 4, 8, 0.5, 2.0});
    const std::array<std::size_t, 3> dirs{direction_index(*g, 2, 0), direction_index(*g, 2, 2), 0};
    for (int axis = 0; axis < 3; ++axis) {
        ASSERT_EQ(g->direction(dirs[axis]).xi[axis], 1.0);
        Problem<3> p{g, Medium::uniform(1.0, 0.0, 0.0), hg3d(0.0), {}};
        const std::size_t n0 = dirs[axis];
        p.sources.I0 = [&, n0, axis](double, const Point& x, const Direction& d) {
            std::array<double, 3> at{2.0, 2.0, 2.0};
            at[axis] = 1.0;
            const bool here = std::abs(x[0] - at[0]) + std::abs(x[1] - at[1]) + std::abs(x[2] - at[2]) < 1e-12;
            return here && &d == &g->direction(n0) ? 1.0 : 0.0;
        };
        TransientOptions opt;
        opt.enforce_stability = false;
        const auto r = run_transient<3>(p, opt);
        std::array<int, 3> idx{4, 4, 4};
        idx[axis] = 2 + 4;
        for (std::size_t q : g->interior_points()) {
            ASSERT_EQ(r.final_field(q, n0), q == g->point(idx) ? 1.0 : 0.0) << axis;
        }
    }
}

TEST(RunTransient3d, RandomPositivityAndBound) {
    Gen gen(63);
    for (int trial = 0; trial < 4; ++trial) {
        Problem<3> p{build_grid3d(cube(5, 6, 12, 0.05, 1.0)),
                     Medium::uniform(gen.uniform(0.3, 1.0), gen.uniform(0.5, 1.0), gen.uniform(0.1, 0.5)),
                     hg3d(gen.uniform(0.0, 0.3)), {}};
        const double a = gen.uniform(0.1, 2), b = gen.uniform(0.1, 2);
        p.sources.I0 = [a](double, const Point& x, const Direction& d) { return a * (1 + std::sin(5 * x[0] + d.phi)); };
        p.sources.I1 = [b](double t, const Point&, const Direction& d) { return b * (1 + std::cos(t + d.theta)); };
        p.sources.q = [](double, const Point& x, const Direction&) { return x[1] * x[2]; };
        TransientSolver<3> probe(p);
        ASSERT_TRUE(probe.report().overall_pass);
        const auto r = run_transient<3>(p);
        EXPECT_TRUE(r.positive);
        EXPECT_TRUE(r.bound_ok);
    }
}
