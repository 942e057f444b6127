#include "rte/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rte/error.hpp"

namespace rte {

Medium Medium::uniform(double c, double mu_a, double mu_s) {
    Medium m;
    m.c = [c](const Point&) { return c; };
    m.mu_a = [mu_a](const Point&) { return mu_a; };
    m.mu_s = [mu_s](const Point&) { return mu_s; };
    return m;
}

namespace {

void cross_check(const std::optional<double>& declared, double scanned, const char* field) {
    if (!declared) return;
    const double scale = std::max(std::abs(*declared), std::abs(scanned));
    if (std::isinf(scanned) && std::isinf(*declared)) return;
    if (std::abs(*declared - scanned) > 1e-12 * scale) {
        throw ConfigError(field, "declared bound " + std::to_string(*declared) +
                                     " disagrees with grid scan " + std::to_string(scanned));
    }
}

}  // namespace

template <int D>
SampledMedium<D> sample_medium(const Medium& medium, const Grid<D>& grid) {
    if (!medium.c || !medium.mu_a || !medium.mu_s) {
        throw ConfigError("medium", "c, mu_a and mu_s samplers are all required");
    }
    SampledMedium<D> s;
    const std::size_t np = grid.num_points();
    s.c.resize(np);
    s.mu_a.resize(np);
    s.mu_s.resize(np);
    for (std::size_t p = 0; p < np; ++p) {
        const Point x = grid.position(p);
        s.c[p] = medium.c(x);
        s.mu_a[p] = medium.mu_a(x);
        s.mu_s[p] = medium.mu_s(x);
    }

    std::vector<std::size_t> points = grid.interior_points();
    if (points.empty()) {
        points.resize(np);
        std::iota(points.begin(), points.end(), std::size_t{0});
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    MediumBounds b{0.0, inf, inf, 0.0, 0.0};
    for (std::size_t p : points) {
        const double c = s.c[p], mua = s.mu_a[p], mus = s.mu_s[p];
        if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("medium.c", "must be positive and finite at every grid point");
        if (!(mua >= 0.0) || !std::isfinite(mua)) throw ConfigError("medium.mu_a", "must be nonnegative and finite");
        if (!(mus >= 0.0) || !std::isfinite(mus)) throw ConfigError("medium.mu_s", "must be nonnegative and finite");
        b.c_plus = std::max(b.c_plus, c);
        b.mu_a_plus = std::max(b.mu_a_plus, mua);
        b.mu_s_plus = std::max(b.mu_s_plus, mus);
        b.c_mua_minus = std::min(b.c_mua_minus, c * mua);
        if (mus != 0.0) b.mu_star = std::min(b.mu_star, mua / mus);
    }
    if (!(b.mu_star > 0.0)) {
        throw ConfigError("medium.mu_a", "mu_a / mu_s must be bounded away from zero where mu_s != 0");
    }

    cross_check(medium.declared.c_plus, b.c_plus, "medium.declared.c_plus");
    cross_check(medium.declared.mu_star, b.mu_star, "medium.declared.mu_star");
    cross_check(medium.declared.c_mua_minus, b.c_mua_minus, "medium.declared.c_mua_minus");
    cross_check(medium.declared.mu_a_plus, b.mu_a_plus, "medium.declared.mu_a_plus");
    cross_check(medium.declared.mu_s_plus, b.mu_s_plus, "medium.declared.mu_s_plus");

    s.bounds = b;
    s.uniform = std::all_of(points.begin(), points.end(), [&](std::size_t p) {
        const std::size_t q = points.front();
        return s.c[p] == s.c[q] && s.mu_a[p] == s.mu_a[q] && s.mu_s[p] == s.mu_s[q];
    });
    return s;
}

template SampledMedium<2> sample_medium(const Medium&, const Grid<2>&);
template SampledMedium<3> sample_medium(const Medium&, const Grid<3>&);

}  // namespace rte
