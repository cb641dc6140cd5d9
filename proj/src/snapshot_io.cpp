#include "nlcl/snapshot_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlcl {

namespace {

void put_u32(std::string& out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& out, double x)
{
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p)
{
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

double get_f64(const unsigned char* p)
{
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    double x;
    std::memcpy(&x, &bits, sizeof x);
    return x;
}

double parse_field(const std::string& s, int lineno)
{
    const char* b = s.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (e == b || *e != '\0')
        throw IoError("snapshot line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return v;
}

struct Row {
    int c, i, j;
    double x, y, rho;
};

} // namespace

std::string format_real(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string snapshot_csv(const Snapshot& snap)
{
    std::string out = "t,class,i,j,x,y,rho\n";
    const std::string t = format_real(snap.t);
    for (std::size_t c = 0; c < snap.rho.size(); ++c) {
        const Field2D& f = snap.rho[c];
        const Grid& g = f.grid();
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                out += t;
                out += ',' + std::to_string(c + 1) + ',' + std::to_string(i) + ',' + std::to_string(j) + ',';
                out += format_real(g.x_center(i)) + ',' + format_real(g.y_center(j)) + ',' + format_real(f(i, j));
                out += '\n';
            }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open for writing: " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f)
        throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_snapshot_csv(const Snapshot& snap, const std::string& path) { write_text(path, snapshot_csv(snap)); }

Snapshot parse_snapshot_csv(const std::string& text, const Grid* hint)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || (line != "t,class,i,j,x,y,rho" && line != "t,class,i,j,x,y,rho\r"))
        throw IoError("snapshot CSV: missing header t,class,i,j,x,y,rho");
    std::vector<Row> rows;
    double t = 0.0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::array<std::string, 7> cols;
        std::istringstream ls(line);
        std::size_t n = 0;
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            if (n >= cols.size())
                throw IoError("snapshot line " + std::to_string(lineno) + ": too many columns");
            cols[n++] = cell;
        }
        if (n != cols.size())
            throw IoError("snapshot line " + std::to_string(lineno) + ": expected 7 columns");
        const double tv = parse_field(cols[0], lineno);
        if (rows.empty())
            t = tv;
        else if (tv != t)
            throw IoError("snapshot line " + std::to_string(lineno) + ": mixed times in one snapshot");
        Row r{static_cast<int>(parse_field(cols[1], lineno)), static_cast<int>(parse_field(cols[2], lineno)),
              static_cast<int>(parse_field(cols[3], lineno)), parse_field(cols[4], lineno),
              parse_field(cols[5], lineno), parse_field(cols[6], lineno)};
        if (r.c < 1 || r.i < 0 || r.j < 0)
            throw IoError("snapshot line " + std::to_string(lineno) + ": bad index");
        rows.push_back(r);
    }
    if (rows.empty())
        throw IoError("snapshot CSV has no rows");

    int nc = 0, nx = 0, ny = 0;
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    for (const Row& r : rows) {
        nc = std::max(nc, r.c);
        nx = std::max(nx, r.i + 1);
        ny = std::max(ny, r.j + 1);
    }
    for (const Row& r : rows) {
        if (r.i == 0)
            xlo = r.x;
        if (r.i == nx - 1)
            xhi = r.x;
        if (r.j == 0)
            ylo = r.y;
        if (r.j == ny - 1)
            yhi = r.y;
    }
    Grid g;
    if (hint) {
        g = *hint;
        if (g.nx != nx || g.ny != ny)
            throw IoError("snapshot CSV does not match the expected grid");
    } else {
        double dx = nx > 1 ? (xhi - xlo) / (nx - 1) : 0.0;
        double dy = ny > 1 ? (yhi - ylo) / (ny - 1) : 0.0;
        if (dx == 0.0)
            dx = dy > 0.0 ? dy : 1.0;
        if (dy == 0.0)
            dy = dx;
        g = Grid(nx, ny, dx, dy, xlo - 0.5 * dx, ylo - 0.5 * dy);
    }
    if (rows.size() != static_cast<std::size_t>(nc) * g.cell_count())
        throw IoError("snapshot CSV: expected one row per class and cell");

    Snapshot snap;
    snap.t = t;
    snap.rho.assign(static_cast<std::size_t>(nc), Field2D(g, 0.0));
    std::vector<char> seen(static_cast<std::size_t>(nc) * g.cell_count(), 0);
    for (const Row& r : rows) {
        const std::size_t k = static_cast<std::size_t>(r.c - 1) * g.cell_count() + g.index(r.i, r.j);
        if (seen[k])
            throw IoError("snapshot CSV: duplicate row for class " + std::to_string(r.c));
        seen[k] = 1;
        snap.rho[static_cast<std::size_t>(r.c - 1)](r.i, r.j) = r.rho;
    }
    return snap;
}

Snapshot read_snapshot_csv(const std::string& path, const Grid* hint) { return parse_snapshot_csv(read_text(path), hint); }

void write_snapshot_binary(const Snapshot& snap, const std::string& path)
{
    if (snap.rho.empty())
        throw StructuralError("binary snapshot needs at least one class");
    const Grid& g = snap.rho.front().grid();
    std::string out = "NLCL";
    put_u32(out, static_cast<std::uint32_t>(g.nx));
    put_u32(out, static_cast<std::uint32_t>(g.ny));
    put_u32(out, static_cast<std::uint32_t>(snap.rho.size()));
    out.reserve(16 + 8 * g.cell_count() * snap.rho.size());
    for (const Field2D& f : snap.rho) {
        require_same_grid(f.grid(), g, "binary snapshot");
        for (double v : f.values())
            put_f64(out, v);
    }
    write_text(path, out);
}

Snapshot read_snapshot_binary(const std::string& path, const Grid* hint)
{
    const std::string data = read_text(path);
    if (data.size() < 16 || data.compare(0, 4, "NLCL") != 0)
        throw IoError("not an NLCL binary snapshot: " + path);
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint32_t nx = get_u32(p + 4), ny = get_u32(p + 8), nc = get_u32(p + 12);
    if (nx == 0 || ny == 0 || nc == 0)
        throw IoError("binary snapshot with empty extent: " + path);
    const std::size_t cells = static_cast<std::size_t>(nx) * ny;
    if (data.size() != 16 + 8 * cells * nc)
        throw IoError("binary snapshot size does not match its header: " + path);
    Grid g = hint ? *hint : Grid(static_cast<int>(nx), static_cast<int>(ny), 1.0, 1.0);
    if (g.nx != static_cast<int>(nx) || g.ny != static_cast<int>(ny))
        throw IoError("binary snapshot does not match the expected grid");
    Snapshot snap;
    for (std::uint32_t c = 0; c < nc; ++c) {
        std::vector<double> v(cells);
        for (std::size_t k = 0; k < cells; ++k)
            v[k] = get_f64(p + 16 + 8 * (c * cells + k));
        snap.rho.emplace_back(g, std::move(v));
    }
    return snap;
}

std::string outflow_csv(const std::vector<double>& t, const std::vector<std::vector<double>>& U)
{
    if (t.empty() || t.size() != U.size())
        throw StructuralError("outflow series must be nonempty with one row per time");
    std::string out = "t";
    for (std::size_t c = 0; c < U.front().size(); ++c)
        out += ",U_class" + std::to_string(c + 1);
    out += '\n';
    for (std::size_t k = 0; k < t.size(); ++k) {
        out += format_real(t[k]);
        for (double u : U[k])
            out += ',' + format_real(u);
        out += '\n';
    }
    return out;
}

void write_outflow_csv(const std::vector<double>& t, const std::vector<std::vector<double>>& U,
                       const std::string& path)
{
    write_text(path, outflow_csv(t, U));
}

} // namespace nlcl
