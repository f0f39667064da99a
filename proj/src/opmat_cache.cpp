#include <array>
#include <cstring>
#include <fstream>
#include <iostream>

#include "haarverify/opmat.hpp"

namespace haarverify {

namespace {

constexpr std::array<char, 8> kMagic = {'H', 'V', 'O', 'P', 'M', 'A', 'T', '\0'};

void write_matrix(std::ofstream& out, const IntervalMat& m) {
  std::uint8_t has_rad = m.has_radius() ? 1 : 0;
  out.write(reinterpret_cast<const char*>(&has_rad), 1);
  out.write(reinterpret_cast<const char*>(m.mid().data()), static_cast<std::streamsize>(m.mid().size() * sizeof(double)));
  if (has_rad)
    out.write(reinterpret_cast<const char*>(m.rad().data()), static_cast<std::streamsize>(m.rad().size() * sizeof(double)));
}

bool read_matrix(std::ifstream& in, Index n, IntervalMat& m) {
  std::uint8_t has_rad = 0;
  if (!in.read(reinterpret_cast<char*>(&has_rad), 1)) return false;
  Eigen::MatrixXd mid(n, n);
  if (!in.read(reinterpret_cast<char*>(mid.data()), static_cast<std::streamsize>(mid.size() * sizeof(double)))) return false;
  if (has_rad) {
    Eigen::MatrixXd rad(n, n);
    if (!in.read(reinterpret_cast<char*>(rad.data()), static_cast<std::streamsize>(rad.size() * sizeof(double)))) return false;
    m = IntervalMat(std::move(mid), std::move(rad));
  } else {
    m = IntervalMat(std::move(mid));
  }
  return true;
}

}  // namespace

std::filesystem::path opcache_path(const std::filesystem::path& dir, int J) {
  return dir / ("opmat_J" + std::to_string(J) + "_v" + std::to_string(kOpCacheVersion) + ".bin");
}

void save_opmatrices(const OpMatrixSet& set, const std::filesystem::path& file) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out.write(kMagic.data(), kMagic.size());
    std::uint32_t version = kOpCacheVersion;
    std::int32_t J = set.J;
    std::uint64_t M = set.M;
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&J), sizeof J);
    out.write(reinterpret_cast<const char*>(&M), sizeof M);
    write_matrix(out, set.H);
    write_matrix(out, set.P);
    write_matrix(out, set.OmegaTilde);
    write_matrix(out, set.Gamma);
    if (!out) throw std::runtime_error("failed writing cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::optional<OpMatrixSet> load_opmatrices(const std::filesystem::path& file, int J) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  std::uint32_t version = 0;
  std::int32_t stored_J = -1;
  std::uint64_t M = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&stored_J), sizeof stored_J);
  in.read(reinterpret_cast<char*>(&M), sizeof M);
  if (!in || magic != kMagic || version != kOpCacheVersion || stored_J != J || M != order_for_level(J))
    return std::nullopt;
  OpMatrixSet set;
  set.J = J;
  set.M = M;
  const Index n = static_cast<Index>(M);
  if (!read_matrix(in, n, set.H) || !read_matrix(in, n, set.P) || !read_matrix(in, n, set.OmegaTilde) ||
      !read_matrix(in, n, set.Gamma))
    return std::nullopt;
  return set;
}

OpMatrixSet cached_opmatrices(int J, const std::optional<std::filesystem::path>& dir) {
  if (!dir) return build_opmatrices(J);
  std::filesystem::path file = opcache_path(*dir, J);
  if (auto loaded = load_opmatrices(file, J)) return std::move(*loaded);
  OpMatrixSet set = build_opmatrices(J);
  try {
    std::filesystem::create_directories(*dir);
    save_opmatrices(set, file);
  } catch (const std::exception& e) {
    std::cerr << "warning: could not store operator cache: " << e.what() << '\n';
  }
  return set;
}

}  // namespace haarverify
