#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rte/field.hpp"

namespace rte::io {

/// Writes snapshot_k{k}.csv (one row per grid point and direction) and
/// intensity_k{k}.csv (weighted direction sum per grid point). Outflow
/// boundary entries are written as the nearest interior value. Values use
/// 17 significant digits. Returns the written paths.
///
/// 2D headers: i,j,n,x1,x2,theta,I and i,j,x1,x2,phi_total
/// 3D headers: i,j,l,m,n,x1,x2,x3,theta,phi,I and i,j,l,x1,x2,x3,phi_total
template <int D>
std::vector<std::filesystem::path> emit_snapshot(const Field<D>& field, long k, const std::filesystem::path& outdir);

/// Column-major table read back from a CSV written above.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

/// Writes a header and rows of numbers with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace rte::io
