#ifndef ANISONS_FIELD_IO_HPP
#define ANISONS_FIELD_IO_HPP

// AFLD1 on-disk format, little-endian:
//   bytes 0..7   magic "AFLD0001"
//   3 x u32      nh, nh, nv
//   2 x f64      Lh, Lv
//   payload      nh*nh*nv complex f64, row-major (i1,i2,i3), i3 fastest,
//                each axis in DFT order 0,1,...,n/2,-n/2+1,...,-1
// The payload covers the full spectral box; no symmetry compression.

#include <bit>
#include <cstdio>
#include <cstring>
#include <memory>

#include "anisons/field.hpp"

namespace anisons {

static_assert(std::endian::native == std::endian::little,
              "AFLD1 i/o assumes a little-endian host");

namespace detail {
struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace detail

inline void write_afld(const std::string& path, const Field& a) {
  detail::FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open for writing: " + path);
  const Grid& g = a.grid();
  const char magic[8] = {'A', 'F', 'L', 'D', '0', '0', '0', '1'};
  std::uint32_t dims[3] = {std::uint32_t(g.nh), std::uint32_t(g.nh), std::uint32_t(g.nv)};
  double periods[2] = {g.Lh, g.Lv};
  if (std::fwrite(magic, 1, 8, f.get()) != 8 ||
      std::fwrite(dims, 4, 3, f.get()) != 3 ||
      std::fwrite(periods, 8, 2, f.get()) != 2 ||
      std::fwrite(a.data(), sizeof(cplx), a.size(), f.get()) != std::size_t(a.size()))
    throw IoError("short write: " + path);
}

inline Field read_afld(const std::string& path) {
  detail::FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open: " + path);
  char magic[8];
  if (std::fread(magic, 1, 8, f.get()) != 8 || std::memcmp(magic, "AFLD0001", 8) != 0)
    throw IoError(path + ": not an AFLD1 file (bad magic)");
  std::uint32_t dims[3];
  double periods[2];
  if (std::fread(dims, 4, 3, f.get()) != 3 || std::fread(periods, 8, 2, f.get()) != 2)
    throw IoError(path + ": truncated AFLD1 header");
  if (dims[0] != dims[1])
    throw IoError(path + ": AFLD1 requires square horizontal dims, got " +
                  std::to_string(dims[0]) + "x" + std::to_string(dims[1]));
  Grid g(static_cast<int>(dims[0]), static_cast<int>(dims[2]), periods[0], periods[1]);
  Field a(g);
  if (std::fread(a.data(), sizeof(cplx), a.size(), f.get()) != std::size_t(a.size()))
    throw IoError(path + ": truncated AFLD1 payload");
  return a;
}

inline void write_afld(const std::string& stem, const VecField& u) {
  write_afld(stem + ".c1.afld", u.c1);
  write_afld(stem + ".c2.afld", u.c2);
  write_afld(stem + ".c3.afld", u.c3);
}

}  // namespace anisons

#endif
