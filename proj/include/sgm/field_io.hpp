#pragma once

#include <string>
#include <vector>

#include "sgm/grid.hpp"

namespace sgm {

/// SGMF field file, bit-exact layout:
///   magic "SGMF" | u32 version=1 | u32 nx | u32 ny | u32 kind | f64 Lx | f64 Ly
///   | nx*ny*components f64, row-major with y outer, little-endian throughout.
void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);

/// Loads every *.sgmf in a directory in lexicographic order.
std::vector<Field> load_snapshot_dir(const std::string& dir);

}  // namespace sgm
