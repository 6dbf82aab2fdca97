#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "sqr/csv.hpp"
#include "sqr/errors.hpp"
#include "sqr/wavefield.hpp"

namespace sqr {

// Raw snapshot: little-endian, header { "SQR1", n_x, n_r (0 for 1D), x_min,
// dx, dr, t }, then float64 (re, im) pairs row-major.
namespace detail {

inline void put_u32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
               char((v >> 24) & 0xff)};
  out.write(b, 4);
}

inline void put_f64(std::ofstream& out, double v) {
  char b[8];
  std::memcpy(b, &v, 8);  // host is little-endian
  out.write(b, 8);
}

inline std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

inline double get_f64(std::ifstream& in) {
  char b[8];
  in.read(b, 8);
  double v;
  std::memcpy(&v, b, 8);
  return v;
}

}  // namespace detail

inline void save_snapshot(const std::string& path, const Field1D& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.write("SQR1", 4);
  detail::put_u32(out, static_cast<std::uint32_t>(f.grid.n_x));
  detail::put_u32(out, 0);
  detail::put_f64(out, f.grid.x_min);
  detail::put_f64(out, f.grid.dx());
  detail::put_f64(out, 0.0);
  detail::put_f64(out, f.time);
  for (const auto& p : f.psi) {
    detail::put_f64(out, p.real());
    detail::put_f64(out, p.imag());
  }
}

inline void save_snapshot(const std::string& path, const FieldCyl& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.write("SQR1", 4);
  detail::put_u32(out, static_cast<std::uint32_t>(f.grid.axial.n_x));
  detail::put_u32(out, static_cast<std::uint32_t>(f.grid.n_r));
  detail::put_f64(out, f.grid.axial.x_min);
  detail::put_f64(out, f.grid.axial.dx());
  detail::put_f64(out, f.grid.dr());
  detail::put_f64(out, f.time);
  for (const auto& p : f.psi) {
    detail::put_f64(out, p.real());
    detail::put_f64(out, p.imag());
  }
}

struct Snapshot {
  bool cylindrical = false;
  Field1D field_1d;
  FieldCyl field_cyl;
};

inline Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "SQR1", 4) != 0) throw ConfigError("'" + path + "': bad magic");
  const std::uint32_t n_x = detail::get_u32(in);
  const std::uint32_t n_r = detail::get_u32(in);
  const double x_min = detail::get_f64(in);
  const double dx = detail::get_f64(in);
  const double dr = detail::get_f64(in);
  const double t = detail::get_f64(in);
  Snapshot s;
  const Grid1D axial{x_min, x_min + dx * (n_x - 1), static_cast<int>(n_x)};
  if (n_r == 0) {
    s.field_1d = {axial, std::vector<cdouble>(n_x), t};
    for (auto& p : s.field_1d.psi) {
      const double re = detail::get_f64(in), im = detail::get_f64(in);
      p = {re, im};
    }
  } else {
    s.cylindrical = true;
    s.field_cyl = {GridCyl{axial, dr * n_r, static_cast<int>(n_r)},
                   std::vector<cdouble>(std::size_t(n_x) * n_r), t};
    for (auto& p : s.field_cyl.psi) {
      const double re = detail::get_f64(in), im = detail::get_f64(in);
      p = {re, im};
    }
  }
  if (!in) throw ConfigError("'" + path + "': truncated snapshot");
  return s;
}

inline void write_density_csv(const std::string& path, const Field1D& f) {
  CsvWriter csv(path, "x_m,density");
  for (int i = 0; i < f.grid.n_x; ++i)
    csv.row({f.grid.x(i), std::norm(f.psi[i])});
}

inline void write_density_csv(const std::string& path, const FieldCyl& f) {
  CsvWriter csv(path, "x_m,r_m,density");
  for (int ix = 0; ix < f.grid.axial.n_x; ++ix)
    for (int ir = 0; ir < f.grid.n_r; ++ir)
      csv.row({f.grid.axial.x(ix), f.grid.r(ir), std::norm(f.at(ix, ir))});
}

}  // namespace sqr
