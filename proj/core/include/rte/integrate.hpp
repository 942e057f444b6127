#pragma once

#include <functional>

namespace rte {

struct IntegralEstimate {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod quadrature of f over [a, b] to an absolute
/// error target. Throws std::runtime_error if the target is not reached.
IntegralEstimate integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-13);

}  // namespace rte
