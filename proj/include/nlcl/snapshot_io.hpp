#pragma once

#include <string>
#include <vector>

#include "nlcl/grid.hpp"

namespace nlcl {

struct Snapshot {
    double t = 0.0;
    std::vector<Field2D> rho;  // one field per class
};

/// %.17g
std::string format_real(double x);

/// Header "t,class,i,j,x,y,rho"; rows sorted by (class, j, i); class is 1-based; LF endings.
std::string snapshot_csv(const Snapshot& snap);
void write_snapshot_csv(const Snapshot& snap, const std::string& path);

/**
 * Reads a snapshot CSV. The mesh is inferred from the (i, j, x, y) columns
 * (spacing from neighbouring centers, or 1 for a single cell) unless a grid
 * hint is given, in which case the file must match it.
 */
Snapshot parse_snapshot_csv(const std::string& text, const Grid* hint = nullptr);
Snapshot read_snapshot_csv(const std::string& path, const Grid* hint = nullptr);

/**
 * 16-byte header: "NLCL", u32 nx, u32 ny, u32 class count, all little-endian;
 * then f64 values class-major, row-major (j outer, i inner). The time and
 * spacing are not stored; pass the grid to restore coordinates.
 */
void write_snapshot_binary(const Snapshot& snap, const std::string& path);
Snapshot read_snapshot_binary(const std::string& path, const Grid* hint = nullptr);

/// "t,U_class1,U_class2,..." then one row per sample.
std::string outflow_csv(const std::vector<double>& t, const std::vector<std::vector<double>>& U);
void write_outflow_csv(const std::vector<double>& t, const std::vector<std::vector<double>>& U,
                       const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

} // namespace nlcl
