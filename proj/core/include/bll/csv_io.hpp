#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bll/crocco.hpp"
#include "bll/grid.hpp"

namespace bll {

/// Full-precision, locale-independent decimal formatting (std::to_chars).
std::string format_double(double v);

/// Named-column time series.
struct Series {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Writes header + rows; atomic (write to temp, then rename).
void emit_csv(const Series& s, const std::filesystem::path& path);

Series read_csv(const std::filesystem::path& path);

/// Field snapshot: one-line header `# role,n_x,n_y,x_period,y_max,y_stretch,t`
/// then an n_x x n_y matrix (rows = x index). Atomic write.
void write_snapshot(const Field& f, double t, const std::filesystem::path& path);

struct Snapshot {
    Field field;
    double t = 0.0;
};

Snapshot read_snapshot(const std::filesystem::path& path);

/// Crocco snapshot: header `# crocco,n_xi,n_eta,X,nu,tau` then the w matrix.
void write_crocco_snapshot(const CroccoState& c, const std::filesystem::path& path);
CroccoState read_crocco_snapshot(const std::filesystem::path& path);

/// 3D snapshot: one CSV matrix per z-slice in a directory plus manifest.json.
void write_snapshot3d(const Field3D& u, double t, const std::filesystem::path& dir);

/// Writes text atomically (temp file + rename).
void write_text_atomic(const std::string& text, const std::filesystem::path& path);

}  // namespace bll
