#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/phase_function.hpp"
#include "rte/transient.hpp"
#include "rte/verification.hpp"

namespace rte::io {

nlohmann::json to_json(const ConditionResult& result);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const ConvergenceStudy& study);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Run manifest written as manifest.json in the output directory.
class Manifest {
public:
    Manifest();

    nlohmann::json& doc() { return doc_; }
    const nlohmann::json& doc() const { return doc_; }

    void set_status(const std::string& status, const std::string& reason = {});
    void add_file(const std::filesystem::path& path);

    /// Hashes every registered file (paths stored relative to `dir`) and
    /// writes `dir`/manifest.json.
    std::filesystem::path write(const std::filesystem::path& dir);

private:
    nlohmann::json doc_;
    std::vector<std::filesystem::path> files_;
};

}  // namespace rte::io
