#include "rte/io/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "rte/transient.hpp"

namespace rte::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_write(const std::filesystem::path& path) {
    File f(std::fopen(path.c_str(), "w"));
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

void finish(File& f, const std::filesystem::path& path) {
    if (std::ferror(f.get()) || std::fclose(f.release()) != 0) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

template <int D>
std::vector<std::filesystem::path> emit_snapshot(const Field<D>& field, long k, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    const auto& g = field.grid();
    const auto snap_path = outdir / ("snapshot_k" + std::to_string(k) + ".csv");
    const auto int_path = outdir / ("intensity_k" + std::to_string(k) + ".csv");

    File snap = open_for_write(snap_path);
    File inten = open_for_write(int_path);
    if constexpr (D == 2) {
        std::fputs("i,j,n,x1,x2,theta,I\n", snap.get());
        std::fputs("i,j,x1,x2,phi_total\n", inten.get());
    } else {
        std::fputs("i,j,l,m,n,x1,x2,x3,theta,phi,I\n", snap.get());
        std::fputs("i,j,l,x1,x2,x3,phi_total\n", inten.get());
    }
    const auto total = integrated_intensity(field);
    for (std::size_t p = 0; p < g.num_points(); ++p) {
        const auto idx = g.point_index(p);
        const Point x = g.position(p);
        for (std::size_t n = 0; n < g.num_directions(); ++n) {
            const auto& d = g.direction(n);
            const double v = display_value(field, p, n);
            if constexpr (D == 2) {
                std::fprintf(snap.get(), "%d,%d,%zu,%.17g,%.17g,%.17g,%.17g\n", idx[0], idx[1], n, x[0], x[1], d.theta,
                             v);
            } else {
                std::fprintf(snap.get(), "%d,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", idx[0], idx[1],
                             idx[2], d.m, d.n, x[0], x[1], x[2], d.theta, d.phi, v);
            }
        }
        if constexpr (D == 2) {
            std::fprintf(inten.get(), "%d,%d,%.17g,%.17g,%.17g\n", idx[0], idx[1], x[0], x[1], total[p]);
        } else {
            std::fprintf(inten.get(), "%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", idx[0], idx[1], idx[2], x[0], x[1], x[2],
                         total[p]);
        }
    }
    finish(snap, snap_path);
    finish(inten, int_path);
    return {snap_path, int_path};
}

template std::vector<std::filesystem::path> emit_snapshot(const Field<2>&, long, const std::filesystem::path&);
template std::vector<std::filesystem::path> emit_snapshot(const Field<3>&, long, const std::filesystem::path&);

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) return t;
    std::stringstream hs(line);
    for (std::string col; std::getline(hs, col, ',');) t.header.push_back(col);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        if (row.size() != t.header.size()) throw std::runtime_error("ragged row in " + path.string());
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    File f = open_for_write(path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::fputs(header[i].c_str(), f.get());
        std::fputc(i + 1 < header.size() ? ',' : '\n', f.get());
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::fprintf(f.get(), "%.17g", row[i]);
            std::fputc(i + 1 < row.size() ? ',' : '\n', f.get());
        }
    }
    finish(f, path);
}

}  // namespace rte::io
