#include "bll/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bll/errors.hpp"

namespace fs = std::filesystem;

namespace bll {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_text_atomic(const std::string& text, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void emit_csv(const Series& s, const fs::path& path) {
    std::string text;
    for (size_t c = 0; c < s.columns.size(); ++c) {
        if (c) text += ',';
        text += s.columns[c];
    }
    text += '\n';
    for (const auto& row : s.rows) {
        if (row.size() != s.columns.size())
            throw PreconditionError("emit_csv: row width does not match the header");
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) text += ',';
            text += format_double(row[c]);
        }
        text += '\n';
    }
    write_text_atomic(text, path);
}

namespace {
std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc())
        throw PreconditionError("csv parse: bad number '" + s + "'");
    return v;
}
}  // namespace

Series read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    Series s;
    std::string line;
    if (!std::getline(in, line)) throw PreconditionError("csv: empty file");
    s.columns = split(line, ',');
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split(line, ',');
        std::vector<double> row;
        row.reserve(parts.size());
        for (const auto& p : parts) row.push_back(parse_double(p));
        s.rows.push_back(std::move(row));
    }
    return s;
}

void write_snapshot(const Field& f, double t, const fs::path& path) {
    const Grid2D& g = *f.grid;
    std::string text = "# " + to_string(f.role) + "," + std::to_string(g.n_x) + "," +
                       std::to_string(g.n_y) + "," + format_double(g.x_period) + "," +
                       format_double(g.y_max) + "," + format_double(g.y_stretch) + "," +
                       format_double(t) + "\n";
    for (int i = 0; i < g.n_x; ++i) {
        for (int j = 0; j < g.n_y; ++j) {
            if (j) text += ',';
            text += format_double(f.at(i, j));
        }
        text += '\n';
    }
    write_text_atomic(text, path);
}

Snapshot read_snapshot(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.size() < 2 || line[0] != '#')
        throw PreconditionError("snapshot: missing header line");
    auto head = split(line.substr(2), ',');
    if (head.size() != 7) throw PreconditionError("snapshot: malformed header");
    const int n_x = static_cast<int>(parse_double(head[1]));
    const int n_y = static_cast<int>(parse_double(head[2]));
    auto grid = build_grid(n_x, parse_double(head[3]), n_y, parse_double(head[4]),
                           parse_double(head[5]));
    Snapshot snap;
    snap.field = Field(grid, field_role_from_string(head[0]));
    snap.t = parse_double(head[6]);
    for (int i = 0; i < n_x; ++i) {
        if (!std::getline(in, line)) throw PreconditionError("snapshot: truncated matrix");
        auto parts = split(line, ',');
        if (static_cast<int>(parts.size()) != n_y)
            throw PreconditionError("snapshot: row width mismatch");
        for (int j = 0; j < n_y; ++j) snap.field.at(i, j) = parse_double(parts[j]);
    }
    return snap;
}

void write_crocco_snapshot(const CroccoState& c, const fs::path& path) {
    std::string text = "# crocco," + std::to_string(c.n_xi) + "," + std::to_string(c.n_eta) +
                       "," + format_double(c.X) + "," + format_double(c.nu) + "," +
                       format_double(c.tau) + "\n";
    for (int l = 0; l <= c.n_xi; ++l) {
        for (int k = 0; k <= c.n_eta; ++k) {
            if (k) text += ',';
            text += format_double(c.at(l, k));
        }
        text += '\n';
    }
    write_text_atomic(text, path);
}

CroccoState read_crocco_snapshot(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# crocco,", 0) != 0)
        throw PreconditionError("crocco snapshot: missing header");
    auto head = split(line.substr(2), ',');
    if (head.size() != 6) throw PreconditionError("crocco snapshot: malformed header");
    CroccoState c;
    c.n_xi = static_cast<int>(parse_double(head[1]));
    c.n_eta = static_cast<int>(parse_double(head[2]));
    c.X = parse_double(head[3]);
    c.nu = parse_double(head[4]);
    c.tau = parse_double(head[5]);
    c.w.assign(static_cast<size_t>(c.n_xi + 1) * (c.n_eta + 1), 0.0);
    for (int l = 0; l <= c.n_xi; ++l) {
        if (!std::getline(in, line)) throw PreconditionError("crocco snapshot: truncated");
        auto parts = split(line, ',');
        for (int k = 0; k <= c.n_eta; ++k) c.at(l, k) = parse_double(parts[k]);
    }
    return c;
}

void write_snapshot3d(const Field3D& u, double t, const fs::path& dir) {
    const Grid3D& g = *u.grid;
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["n_x"] = g.n_x;
    manifest["n_y"] = g.n_y;
    manifest["n_z"] = g.n_z;
    manifest["x_period"] = g.x_period;
    manifest["y_period"] = g.y_period;
    manifest["z_max"] = g.z_max;
    manifest["z_stretch"] = g.z_stretch;
    manifest["t"] = t;
    std::vector<std::string> slices;
    for (int k = 0; k < g.n_z; ++k) {
        std::string text;
        for (int i = 0; i < g.n_x; ++i) {
            for (int j = 0; j < g.n_y; ++j) {
                if (j) text += ',';
                text += format_double(u.at(i, j, k));
            }
            text += '\n';
        }
        const std::string name = "slice_" + std::to_string(k) + ".csv";
        write_text_atomic(text, dir / name);
        slices.push_back(name);
    }
    manifest["slices"] = slices;
    write_text_atomic(manifest.dump(2) + "\n", dir / "manifest.json");
}

}  // namespace bll
