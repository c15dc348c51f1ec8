#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "harnack/pde_lab.hpp"

namespace harnack {

namespace {

constexpr char kMagic[8] = {'H', 'K', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ofstream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("truncated field dump");
  return to_little(v);
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.boundary));
  for (double e : f.grid.extent) put<double>(os, e);
  for (std::size_t p : f.grid.points) put<std::uint64_t>(os, p);
  for (double o : f.grid.origin) put<double>(os, o);
  put<double>(os, f.t);
  for (double v : f.u) put<double>(os, v);
  if (!os) throw std::runtime_error("write failed for " + path);
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error(path + ": not a field dump");
  Field f;
  f.grid.dim = static_cast<int>(get<std::uint32_t>(is));
  std::uint32_t b = get<std::uint32_t>(is);
  if (b > 2) throw std::runtime_error(path + ": bad boundary code");
  f.grid.boundary = static_cast<Boundary>(b);
  for (double& e : f.grid.extent) e = get<double>(is);
  for (std::size_t& p : f.grid.points) p = static_cast<std::size_t>(get<std::uint64_t>(is));
  for (double& o : f.grid.origin) o = get<double>(is);
  f.t = get<double>(is);
  f.grid.validate();
  f.u.resize(f.grid.size());
  for (double& v : f.u) v = get<double>(is);
  return f;
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << std::setprecision(17);
  os << (f.grid.dim == 2 ? "x,y,u\n" : "x,u\n");
  std::size_t ny = f.grid.dim == 2 ? f.grid.points[1] : 1;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < f.grid.points[0]; ++i) {
      os << f.grid.coord(0, i) << ',';
      if (f.grid.dim == 2) os << f.grid.coord(1, j) << ',';
      os << f.u[f.index(i, j)] << '\n';
    }
}

}  // namespace harnack
