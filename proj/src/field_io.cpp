#include "sgm/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace sgm {

namespace {

static_assert(std::endian::native == std::endian::little,
              "SGMF writer assumes a little-endian host");

constexpr char kMagic[4] = {'S', 'G', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxDim = 1u << 20;

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

void put_f64(std::ofstream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), 8);
}

std::uint32_t get_u32(std::ifstream& in, const char* what) {
  std::uint32_t v;
  in.read(reinterpret_cast<char*>(&v), 4);
  if (!in) throw Error(ErrorCode::truncated_payload, what);
  return v;
}

double get_f64(std::ifstream& in, const char* what) {
  double v;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (!in) throw Error(ErrorCode::truncated_payload, what);
  return v;
}

}  // namespace

void save_field(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(f.grid().nx));
  put_u32(out, static_cast<std::uint32_t>(f.grid().ny));
  put_u32(out, static_cast<std::uint32_t>(f.kind()));
  put_f64(out, f.grid().Lx);
  put_f64(out, f.grid().Ly);
  out.write(reinterpret_cast<const char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(double)));
  if (!out) throw Error(ErrorCode::io_failure, "short write to " + path);
}

Field load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw Error(ErrorCode::bad_magic, "not an SGMF file: " + path);
  std::uint32_t version = get_u32(in, "version");
  if (version != kVersion)
    throw Error(ErrorCode::version_mismatch,
                "SGMF version " + std::to_string(version) + " is not supported");
  std::uint32_t nx = get_u32(in, "nx");
  std::uint32_t ny = get_u32(in, "ny");
  std::uint32_t kind_raw = get_u32(in, "kind");
  if (kind_raw > 3) throw Error(ErrorCode::unsupported_kind, "unknown kind enum in " + path);
  double Lx = get_f64(in, "Lx");
  double Ly = get_f64(in, "Ly");
  if (nx > kMaxDim || ny > kMaxDim)
    throw Error(ErrorCode::dimension_overflow, "grid dimensions exceed sane bounds");
  FieldKind kind = static_cast<FieldKind>(kind_raw);
  std::uint64_t count = static_cast<std::uint64_t>(nx) * ny * components(kind);
  if (count > (1ull << 32))
    throw Error(ErrorCode::dimension_overflow, "payload size overflows sane bounds");

  Field f(Grid2D(static_cast<int>(nx), static_cast<int>(ny), Lx, Ly), kind);
  in.read(reinterpret_cast<char*>(f.data().data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::uint64_t>(in.gcount()) != count * sizeof(double))
    throw Error(ErrorCode::truncated_payload, "payload shorter than header promises: " + path);
  return f;
}

std::vector<Field> load_snapshot_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::io_failure, dir + " is not a directory");
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".sgmf") names.push_back(e.path().string());
  std::sort(names.begin(), names.end());
  std::vector<Field> fields;
  fields.reserve(names.size());
  for (const auto& n : names) fields.push_back(load_field(n));
  return fields;
}

}  // namespace sgm
