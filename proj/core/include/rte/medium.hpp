#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rte/grid.hpp"

namespace rte {

using SpatialSampler = std::function<double(const Point&)>;

/// Bounds of the optical coefficients over the sampled grid points.
/// mu_star is +inf when mu_s vanishes at every point.
struct MediumBounds {
    double c_plus = 0.0;       // sup c
    double mu_star = 0.0;      // inf mu_a / mu_s over {mu_s != 0}
    double c_mua_minus = 0.0;  // inf c * mu_a
    double mu_a_plus = 0.0;
    double mu_s_plus = 0.0;
};

/// Optional user-declared bounds; each one present is cross-checked against
/// the scanned value (1e-12 relative).
struct DeclaredBounds {
    std::optional<double> c_plus;
    std::optional<double> mu_star;
    std::optional<double> c_mua_minus;
    std::optional<double> mu_a_plus;
    std::optional<double> mu_s_plus;
};

/// Speed c(x), absorption mu_a(x) and scattering mu_s(x).
struct Medium {
    SpatialSampler c;
    SpatialSampler mu_a;
    SpatialSampler mu_s;
    DeclaredBounds declared;

    static Medium uniform(double c, double mu_a, double mu_s);
};

/// Coefficients sampled at every spatial grid point, plus bounds scanned over
/// the interior points (where the update is applied).
template <int D>
struct SampledMedium {
    std::vector<double> c;
    std::vector<double> mu_a;
    std::vector<double> mu_s;
    MediumBounds bounds;
    bool uniform = false;
};

/// Samples and validates: c > 0, mu_a >= 0, mu_s >= 0 and mu_star > 0.
/// Throws ConfigError naming the coefficient on violation or when a declared
/// bound disagrees with the scan.
template <int D>
SampledMedium<D> sample_medium(const Medium& medium, const Grid<D>& grid);

}  // namespace rte
