#include "rte/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "rte/error.hpp"

namespace rte::io {

using nlohmann::json;

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::Check: return "check";
        case Mode::Run: return "run";
        case Mode::Steady: return "steady";
        case Mode::Convergence: return "convergence";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    if (name == "check") return Mode::Check;
    if (name == "run") return Mode::Run;
    if (name == "steady") return Mode::Steady;
    if (name == "convergence") return Mode::Convergence;
    throw ConfigError("mode", "unknown mode '" + name + "'");
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

/// Typed access to one JSON object that remembers which keys were read.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key) {
        if (!has(key)) throw ConfigError(join(path_, key), "missing required field");
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number, got " + v.dump());
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(join(path_, key), "must be finite");
        return d;
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    double positive(const std::string& key) {
        const double d = number(key);
        if (!(d > 0.0)) throw ConfigError(join(path_, key), "must be positive, got " + json(d).dump());
        return d;
    }

    int count(const std::string& key) {
        if (!has(key)) throw ConfigError(join(path_, key), "missing required field");
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer, got " + v.dump());
        const auto i = v.get<long long>();
        if (i < 1 || i > 1'000'000'000) throw ConfigError(join(path_, key), "must be a positive integer");
        return static_cast<int>(i);
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string, got " + v.dump());
        return v.get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(join(path_, key), "expected true or false, got " + v.dump());
        return v.get<bool>();
    }

    std::optional<Reader> child(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return Reader(raw(key), join(path_, key));
    }

    const std::string& path() const { return path_; }
    std::string at(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) throw ConfigError(join(path_, item.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Expression parse_expression(const std::string& text, const std::string& where, std::initializer_list<const char*> allowed) {
    Expression e;
    try {
        e = Expression::parse(text);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(where, ex.what());
    }
    for (const char* name : {"x1", "x2", "x3", "t", "theta", "phi"}) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || std::string(a) == name;
        if (!ok && e.uses(name)) throw ConfigError(where, std::string("variable '") + name + "' is not allowed here");
    }
    return e;
}

CoefficientSpec read_coefficient(Reader& r, const std::string& key) {
    if (!r.has(key)) throw ConfigError(r.at(key), "missing required field");
    const json& v = r.raw(key);
    CoefficientSpec c;
    if (v.is_number()) {
        c.constant = v.get<double>();
        if (!std::isfinite(c.constant)) throw ConfigError(r.at(key), "must be finite");
    } else if (v.is_string()) {
        c.expression = parse_expression(v.get<std::string>(), r.at(key), {"x1", "x2", "x3"});
    } else {
        throw ConfigError(r.at(key), "expected a number or an expression string, got " + v.dump());
    }
    return c;
}

SourceSpec read_source(Reader& parent, const std::string& key, bool boundary, int dimension) {
    SourceSpec s;
    auto r = parent.child(key);
    if (!r) return s;
    s.type = r->string("type", "zero");
    const std::string where = r->path();
    if (s.type == "zero") {
    } else if (s.type == "constant") {
        s.value = r->number("value");
    } else if (s.type == "expression") {
        const std::string text = r->string("expr", "");
        if (text.empty()) throw ConfigError(r->at("expr"), "missing required field");
        if (key == "I0") {
            s.expression = parse_expression(text, r->at("expr"), {"x1", "x2", "x3", "theta", "phi"});
        } else {
            s.expression = parse_expression(text, r->at("expr"), {"x1", "x2", "x3", "t", "theta", "phi"});
        }
        s.time_dependent = s.expression->uses("t");
    } else if (s.type == "gaussian_beam") {
        if (!boundary) throw ConfigError(r->at("type"), "gaussian_beam is only valid for I1");
        if (dimension != 2) throw ConfigError(r->at("type"), "gaussian_beam is only available in 2D");
        s.face = r->string("face", "");
        if (s.face != "x1_low" && s.face != "x1_high" && s.face != "x2_low" && s.face != "x2_high") {
            throw ConfigError(r->at("face"), "expected one of x1_low, x1_high, x2_low, x2_high");
        }
        s.from = r->number("from");
        s.to = r->number("to");
        if (!(s.to >= s.from)) throw ConfigError(r->at("to"), "must not be below 'from'");
        s.theta0 = r->number("theta0");
        s.sigma = r->positive("sigma");
    } else {
        throw ConfigError(r->at("type"), "unknown source type '" + s.type + "'");
    }
    r->finish();
    return s;
}

}  // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig c;
    Reader root(doc, "");
    if (root.has("mode")) c.mode = parse_mode(root.string("mode", ""));
    if (root.has("dimension")) {
        const json& v = root.raw("dimension");
        if (!v.is_number_integer() || (v.get<int>() != 2 && v.get<int>() != 3)) {
            throw ConfigError("dimension", "must be 2 or 3");
        }
        c.dimension = v.get<int>();
    }
    const std::string units = root.string("units", "mm/ps");
    if (units != "mm/ps") throw ConfigError("units", "only 'mm/ps' is supported, got '" + units + "'");

    {
        auto g = root.child("grid");
        if (!g) throw ConfigError("grid", "missing required block");
        if (c.dimension == 2) {
            c.grid2.L1 = g->positive("L1");
            c.grid2.L2 = g->positive("L2");
            c.grid2.M1 = g->count("M1");
            c.grid2.M2 = g->count("M2");
            c.grid2.M = g->count("M");
            c.grid2.dt = g->positive("dt");
            c.grid2.T = g->positive("T");
            if (c.grid2.T < c.grid2.dt) throw ConfigError("grid.T", "must be at least dt");
        } else {
            c.grid3.L1 = g->positive("L1");
            c.grid3.L2 = g->positive("L2");
            c.grid3.L3 = g->positive("L3");
            c.grid3.M1 = g->count("M1");
            c.grid3.M2 = g->count("M2");
            c.grid3.M3 = g->count("M3");
            c.grid3.Mtheta = g->count("Mtheta");
            c.grid3.Mphi = g->count("Mphi");
            c.grid3.dt = g->positive("dt");
            c.grid3.T = g->positive("T");
            if (c.grid3.T < c.grid3.dt) throw ConfigError("grid.T", "must be at least dt");
        }
        g->finish();
    }
    {
        auto m = root.child("medium");
        if (!m) throw ConfigError("medium", "missing required block");
        c.c = read_coefficient(*m, "c");
        c.mu_a = read_coefficient(*m, "mu_a");
        c.mu_s = read_coefficient(*m, "mu_s");
        if (!c.c.expression && !(c.c.constant > 0.0)) throw ConfigError("medium.c", "must be positive");
        if (!c.mu_a.expression && c.mu_a.constant < 0.0) throw ConfigError("medium.mu_a", "must be nonnegative");
        if (!c.mu_s.expression && c.mu_s.constant < 0.0) throw ConfigError("medium.mu_s", "must be nonnegative");
        if (auto d = m->child("declared")) {
            auto opt = [&](const char* key, std::optional<double>& out) {
                if (d->has(key)) out = d->number(key);
            };
            opt("c_plus", c.declared.c_plus);
            opt("mu_star", c.declared.mu_star);
            opt("c_mua_minus", c.declared.c_mua_minus);
            opt("mu_a_plus", c.declared.mu_a_plus);
            opt("mu_s_plus", c.declared.mu_s_plus);
            d->finish();
        }
        m->finish();
    }
    {
        auto k = root.child("kernel");
        if (k) {
            c.kernel.type = k->string("type", "isotropic");
            if (c.kernel.type == "henyey_greenstein") {
                c.kernel.g = k->number("g");
                if (!(c.kernel.g >= 0.0 && c.kernel.g < 1.0)) throw ConfigError("kernel.g", "must lie in [0, 1)");
            } else if (c.kernel.type == "tabulated") {
                const std::string p = k->string("path", "");
                if (p.empty()) throw ConfigError("kernel.path", "missing required field");
                c.kernel.path = std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base_dir / p;
                if (!std::filesystem::exists(c.kernel.path)) {
                    throw ConfigError("kernel.path", "file not found: " + c.kernel.path.string());
                }
            } else if (c.kernel.type != "isotropic") {
                throw ConfigError("kernel.type", "unknown kernel type '" + c.kernel.type + "'");
            }
            if (auto d = k->child("decay")) {
                AnalyticDecay a{d->positive("C"), d->number("r")};
                if (!(a.r >= 0.0 && a.r < 1.0)) throw ConfigError("kernel.decay.r", "must lie in [0, 1)");
                c.kernel.decay = a;
                d->finish();
            }
            k->finish();
        }
    }
    {
        auto s = root.child("sources");
        if (s) {
            c.q = read_source(*s, "q", false, c.dimension);
            c.I0 = read_source(*s, "I0", false, c.dimension);
            c.I1 = read_source(*s, "I1", true, c.dimension);
            s->finish();
        }
    }
    {
        auto o = root.child("output");
        if (o) {
            const std::string dir = o->string("directory", "out");
            c.output.directory = std::filesystem::path(dir).is_absolute() ? std::filesystem::path(dir) : base_dir / dir;
            if (o->has("snapshot_times")) {
                const json& v = o->raw("snapshot_times");
                if (!v.is_array()) throw ConfigError("output.snapshot_times", "expected an array of times");
                for (const auto& t : v) {
                    if (!t.is_number() || !(t.get<double>() > 0.0)) {
                        throw ConfigError("output.snapshot_times", "times must be positive numbers");
                    }
                    c.output.snapshot_times.push_back(t.get<double>());
                }
            }
            if (o->has("formats")) {
                const json& v = o->raw("formats");
                if (!v.is_array()) throw ConfigError("output.formats", "expected an array");
                c.output.formats.clear();
                for (const auto& f : v) {
                    if (!f.is_string() || f.get<std::string>() != "csv") {
                        throw ConfigError("output.formats", "only \"csv\" is supported");
                    }
                    c.output.formats.push_back("csv");
                }
            }
            o->finish();
        } else {
            c.output.directory = base_dir / "out";
        }
    }
    if (auto s = root.child("steady")) {
        if (s->has("tol")) c.steady.tol = s->positive("tol");
        if (s->has("max_iters")) c.steady.max_iters = s->count("max_iters");
        c.steady.record_error_history = s->boolean("record_error_history", true);
        s->finish();
    }
    if (auto v = root.child("convergence")) {
        if (v->has("levels")) c.convergence.levels = v->count("levels");
        if (c.convergence.levels < 3) throw ConfigError("convergence.levels", "need at least 3 levels");
        if (v->has("kinds")) {
            const json& k = v->raw("kinds");
            if (!k.is_array() || k.empty()) throw ConfigError("convergence.kinds", "expected a non-empty array");
            c.convergence.kinds.clear();
            for (const auto& s : k) {
                if (!s.is_string() || (s != "space_time" && s != "angular")) {
                    throw ConfigError("convergence.kinds", "entries must be \"space_time\" or \"angular\"");
                }
                c.convergence.kinds.push_back(s.get<std::string>());
            }
        }
        v->finish();
    }
    c.enforce_stability = root.boolean("enforce_stability", true);
    root.finish();
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "malformed JSON in " + path.string() + ": " + e.what());
    }
    RunConfig c = parse_config(doc, path.parent_path());
    c.source_path = path;
    return c;
}

namespace {

json coefficient_json(const CoefficientSpec& c) {
    return c.expression ? json(c.expression->text()) : json(c.constant);
}

json source_json(const SourceSpec& s) {
    json j{{"type", s.type}};
    if (s.type == "constant") j["value"] = s.value;
    if (s.type == "expression") j["expr"] = s.expression->text();
    if (s.type == "gaussian_beam") {
        j["face"] = s.face;
        j["from"] = s.from;
        j["to"] = s.to;
        j["theta0"] = s.theta0;
        j["sigma"] = s.sigma;
    }
    return j;
}

}  // namespace

json to_json(const RunConfig& c) {
    json j;
    if (c.mode) j["mode"] = to_string(*c.mode);
    j["dimension"] = c.dimension;
    j["units"] = "mm/ps";
    if (c.dimension == 2) {
        const auto& g = c.grid2;
        j["grid"] = {{"L1", g.L1}, {"L2", g.L2}, {"M1", g.M1}, {"M2", g.M2}, {"M", g.M}, {"dt", g.dt}, {"T", g.T}};
    } else {
        const auto& g = c.grid3;
        j["grid"] = {{"L1", g.L1}, {"L2", g.L2}, {"L3", g.L3},         {"M1", g.M1},     {"M2", g.M2},
                     {"M3", g.M3}, {"Mtheta", g.Mtheta}, {"Mphi", g.Mphi}, {"dt", g.dt}, {"T", g.T}};
    }
    j["medium"] = {{"c", coefficient_json(c.c)}, {"mu_a", coefficient_json(c.mu_a)}, {"mu_s", coefficient_json(c.mu_s)}};
    json declared = json::object();
    if (c.declared.c_plus) declared["c_plus"] = *c.declared.c_plus;
    if (c.declared.mu_star) declared["mu_star"] = *c.declared.mu_star;
    if (c.declared.c_mua_minus) declared["c_mua_minus"] = *c.declared.c_mua_minus;
    if (c.declared.mu_a_plus) declared["mu_a_plus"] = *c.declared.mu_a_plus;
    if (c.declared.mu_s_plus) declared["mu_s_plus"] = *c.declared.mu_s_plus;
    if (!declared.empty()) j["medium"]["declared"] = declared;
    json k{{"type", c.kernel.type}};
    if (c.kernel.type == "henyey_greenstein") k["g"] = c.kernel.g;
    if (c.kernel.type == "tabulated") k["path"] = c.kernel.path.string();
    if (c.kernel.decay) k["decay"] = {{"C", c.kernel.decay->C}, {"r", c.kernel.decay->r}};
    j["kernel"] = k;
    j["sources"] = {{"q", source_json(c.q)}, {"I0", source_json(c.I0)}, {"I1", source_json(c.I1)}};
    j["output"] = {{"directory", c.output.directory.string()},
                   {"snapshot_times", c.output.snapshot_times},
                   {"formats", c.output.formats}};
    j["steady"] = {{"tol", c.steady.tol},
                   {"max_iters", c.steady.max_iters},
                   {"record_error_history", c.steady.record_error_history}};
    j["convergence"] = {{"levels", c.convergence.levels}, {"kinds", c.convergence.kinds}};
    j["enforce_stability"] = c.enforce_stability;
    return j;
}

namespace {

SpatialSampler coefficient_sampler(const CoefficientSpec& c) {
    if (c.expression) {
        Expression e = *c.expression;
        return [e](const Point& x) { return e(Variables{x[0], x[1], x[2], 0.0, 0.0, 0.0}); };
    }
    const double v = c.constant;
    return [v](const Point&) { return v; };
}

double wrapped(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace

Medium build_medium(const RunConfig& c) {
    Medium m;
    m.c = coefficient_sampler(c.c);
    m.mu_a = coefficient_sampler(c.mu_a);
    m.mu_s = coefficient_sampler(c.mu_s);
    m.declared = c.declared;
    return m;
}

PhaseFunction build_kernel(const RunConfig& c) {
    PhaseFunction pf = [&] {
        if (c.kernel.type == "henyey_greenstein") return c.dimension == 2 ? hg2d(c.kernel.g) : hg3d(c.kernel.g);
        if (c.kernel.type == "tabulated") return load_tabulated(c.kernel.path.string(), c.dimension, c.kernel.decay);
        return isotropic(c.dimension);
    }();
    if (c.kernel.decay && c.kernel.type != "tabulated") pf.with_analytic_decay(*c.kernel.decay);
    return pf;
}

namespace {

PhaseSampler source_sampler(const SourceSpec& s, const RunConfig& c) {
    if (s.type == "constant") {
        const double v = s.value;
        return [v](double, const Point&, const Direction&) { return v; };
    }
    if (s.type == "expression") {
        Expression e = *s.expression;
        return [e](double t, const Point& x, const Direction& d) {
            return e(Variables{x[0], x[1], x[2], t, d.theta, d.phi});
        };
    }
    if (s.type == "gaussian_beam") {
        const int axis = s.face[1] == '1' ? 0 : 1;
        const int tangent = 1 - axis;
        const bool high = s.face.ends_with("high");
        const double L = axis == 0 ? c.grid2.L1 : c.grid2.L2;
        const double plane = high ? L : 0.0;
        const double tol = 1e-9 * std::max(c.grid2.L1, c.grid2.L2);
        const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * s.sigma);
        const double from = s.from, to = s.to, theta0 = s.theta0, sigma = s.sigma;
        return [=](double, const Point& x, const Direction& d) {
            if (std::abs(x[axis] - plane) > tol) return 0.0;
            if (x[tangent] < from - tol || x[tangent] > to + tol) return 0.0;
            const double a = wrapped(d.theta - theta0);
            return norm * std::exp(-a * a / (2.0 * sigma * sigma));
        };
    }
    return {};
}

}  // namespace

Sources build_sources(const RunConfig& c) {
    Sources s;
    s.q = source_sampler(c.q, c);
    s.I0 = source_sampler(c.I0, c);
    s.I1 = source_sampler(c.I1, c);
    s.q_time_dependent = c.q.time_dependent;
    s.I1_time_dependent = c.I1.time_dependent;
    return s;
}

template <int D>
Problem<D> build_problem(const RunConfig& c) {
    if (c.dimension != D) throw ConfigError("dimension", "config dimension does not match the requested solver");
    GridPtr<D> grid;
    if constexpr (D == 2) grid = build_grid2d(c.grid2);
    else grid = build_grid3d(c.grid3);
    return Problem<D>{grid, build_medium(c), build_kernel(c), build_sources(c)};
}

template Problem<2> build_problem<2>(const RunConfig&);
template Problem<3> build_problem<3>(const RunConfig&);

std::vector<long> snapshot_steps(const RunConfig& c) {
    const double dt = c.dimension == 2 ? c.grid2.dt : c.grid3.dt;
    const double T = c.dimension == 2 ? c.grid2.T : c.grid3.T;
    std::vector<double> times = c.output.snapshot_times;
    if (times.empty()) {
        if (std::abs(T - 400.0) <= 1e-9 * 400.0) times = {50.0, 100.0, 200.0, 400.0};
        else times = {T / 4, T / 2, 3 * T / 4, T};
    }
    std::vector<long> steps;
    for (double t : times) {
        if (t > T * (1.0 + 1e-12)) throw ConfigError("output.snapshot_times", "time beyond T");
        const double r = t / dt;
        const double k = std::round(r);
        if (std::abs(r - k) > 1e-9 * std::max(1.0, r)) {
            throw ConfigError("output.snapshot_times", "time " + json(t).dump() + " is not a multiple of dt");
        }
        if (k >= 1) steps.push_back(static_cast<long>(k));
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

}  // namespace rte::io
