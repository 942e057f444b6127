#include "rte/io/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "rte/version.hpp"

namespace rte::io {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const ConditionResult& r) {
    json j{{"form", r.form},
           {"applicable", r.applicable},
           {"pass", r.pass},
           {"strict_pass", r.strict_pass},
           {"lhs", finite_or_null(r.lhs)},
           {"bound", finite_or_null(r.bound)},
           {"margin", finite_or_null(r.margin)}};
    if (!r.note.empty()) j["note"] = r.note;
    if (r.minimal_M) j["minimal_M"] = *r.minimal_M;
    if (r.threshold_M) j["threshold_M"] = *r.threshold_M;
    return j;
}

json to_json(const StabilityReport& r) {
    json j{{"dimension", r.dimension},
           {"cfl_lhs", r.cfl_lhs},
           {"cfl_pass", r.cfl_pass},
           {"cfl_margin", r.cfl_margin},
           {"theta_pass", r.theta_pass},
           {"overall_pass", r.overall_pass},
           {"bounds",
            {{"c_plus", r.bounds.c_plus},
             {"mu_star", finite_or_null(r.bounds.mu_star)},
             {"c_mua_minus", r.bounds.c_mua_minus},
             {"mu_a_plus", r.bounds.mu_a_plus},
             {"mu_s_plus", r.bounds.mu_s_plus}}}};
    if (r.dimension == 2) {
        j["theta_c2"] = to_json(r.theta_c2);
        j["theta_analytic"] = to_json(r.theta_analytic);
    } else {
        j["theta_phi"] = to_json(r.theta_phi);
    }
    return j;
}

json to_json(const ConvergenceStudy& s) {
    json levels = json::array();
    for (const auto& l : s.levels) {
        levels.push_back({{"level", l.level},
                          {"dt", l.dt},
                          {"dx", l.dx},
                          {"dtheta", l.dtheta},
                          {"dphi", l.dphi},
                          {"work", l.work},
                          {"error", l.error}});
    }
    return {{"kind", to_string(s.kind)},
            {"order", s.order ? json(*s.order) : json(nullptr)},
            {"degenerate", s.degenerate},
            {"monotone", s.monotone},
            {"bound_ok", s.bound_ok},
            {"warning", s.warning},
            {"levels", levels}};
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

Manifest::Manifest() {
    doc_ = {{"version", kVersion},
            {"status", "ok"},
            {"outflow_fill", "outflow boundary entries are not solution state; CSV output shows the nearest interior "
                             "value (clamped index)"}};
}

void Manifest::set_status(const std::string& status, const std::string& reason) {
    doc_["status"] = status;
    if (!reason.empty()) doc_["failure_reason"] = reason;
}

void Manifest::add_file(const std::filesystem::path& path) { files_.push_back(path); }

std::filesystem::path Manifest::write(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json files = json::array();
    for (const auto& f : files_) {
        files.push_back({{"path", std::filesystem::relative(f, dir).generic_string()},
                         {"bytes", std::filesystem::file_size(f)},
                         {"sha256", sha256_file(f)}});
    }
    doc_["files"] = files;
    const auto out = dir / "manifest.json";
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out.string());
    os << doc_.dump(2) << '\n';
    if (!os) throw std::runtime_error("write failed: " + out.string());
    return out;
}

}  // namespace rte::io
