#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/io/expression.hpp"
#include "rte/medium.hpp"
#include "rte/phase_function.hpp"
#include "rte/transient.hpp"

namespace rte::io {

enum class Mode { Check, Run, Steady, Convergence };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& name);

/// Medium coefficient: a constant or an expression over x1, x2, x3.
struct CoefficientSpec {
    double constant = 0.0;
    std::optional<Expression> expression;
};

struct KernelSpec {
    std::string type = "isotropic";  // isotropic | henyey_greenstein | tabulated
    double g = 0.0;
    std::filesystem::path path;
    std::optional<AnalyticDecay> decay;
};

struct SourceSpec {
    std::string type = "zero";  // zero | constant | expression | gaussian_beam
    double value = 0.0;
    std::optional<Expression> expression;
    bool time_dependent = false;
    // gaussian_beam: boundary face, tangential coordinate range, angular profile
    std::string face;
    double from = 0.0;
    double to = 0.0;
    double theta0 = 0.0;
    double sigma = 0.0;
};

struct OutputSpec {
    std::filesystem::path directory = "out";
    std::vector<double> snapshot_times;  // empty: default cadence
    std::vector<std::string> formats{"csv"};
};

struct SteadySpec {
    double tol = 1e-12;
    long max_iters = 200000;
    bool record_error_history = true;
};

struct ConvergenceSpec {
    int levels = 4;
    std::vector<std::string> kinds{"space_time", "angular"};
};

struct RunConfig {
    std::optional<Mode> mode;
    int dimension = 2;
    Grid2DConfig grid2;
    Grid3DConfig grid3;
    CoefficientSpec c, mu_a, mu_s;
    DeclaredBounds declared;
    KernelSpec kernel;
    SourceSpec q, I0, I1;
    OutputSpec output;
    SteadySpec steady;
    ConvergenceSpec convergence;
    bool enforce_stability = true;
    std::filesystem::path source_path;
};

/// Reads and validates a JSON config. Unknown keys, wrong types, unit
/// violations and non-positive parameters throw ConfigError naming the key
/// path (e.g. "grid.M1"). Relative paths resolve against the config file.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Resolved config with every default filled in.
nlohmann::json to_json(const RunConfig& config);

Medium build_medium(const RunConfig& config);
PhaseFunction build_kernel(const RunConfig& config);
Sources build_sources(const RunConfig& config);

template <int D>
Problem<D> build_problem(const RunConfig& config);

/// Snapshot levels: configured times, or {50, 100, 200, 400} when T = 400,
/// otherwise every T/4. Each time must land on a step (1e-9 relative).
std::vector<long> snapshot_steps(const RunConfig& config);

}  // namespace rte::io
