#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace topoiga {

using Vec3 = std::array<double, 3>;
using Index3 = std::array<int, 3>;

/// Base class of all errors raised by the core library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree (image dims, grid/basis boxes, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A linear solve or factorization failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

/// Row-major-free linear index with x fastest.
inline std::size_t linear_index(const Index3& i, const Index3& dims) {
  return static_cast<std::size_t>(i[0]) +
         static_cast<std::size_t>(dims[0]) *
             (static_cast<std::size_t>(i[1]) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(i[2]));
}

inline Index3 unravel_index(std::size_t n, const Index3& dims) {
  Index3 i{};
  i[0] = static_cast<int>(n % static_cast<std::size_t>(dims[0]));
  n /= static_cast<std::size_t>(dims[0]);
  i[1] = static_cast<int>(n % static_cast<std::size_t>(dims[1]));
  i[2] = static_cast<int>(n / static_cast<std::size_t>(dims[1]));
  return i;
}

inline std::size_t product(const Index3& dims) {
  return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(dims[2]);
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Axis-aligned box; unused axes (beyond the dimension) have lo == hi == 0.
struct Box {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{0.0, 0.0, 0.0};

  double length(int axis) const { return hi[axis] - lo[axis]; }
  Vec3 center() const { return 0.5 * (lo + hi); }
  bool operator==(const Box&) const = default;
};

/// Iterate a tensor index range [lo, hi) over the first `nd` axes, x fastest.
template <class Fn>
void for_each_index(int nd, const Index3& lo, const Index3& hi, Fn&& fn) {
  const int k0 = nd > 2 ? lo[2] : 0, k1 = nd > 2 ? hi[2] : 1;
  const int j0 = nd > 1 ? lo[1] : 0, j1 = nd > 1 ? hi[1] : 1;
  for (int k = k0; k < k1; ++k)
    for (int j = j0; j < j1; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) fn(Index3{i, j, k});
}

}  // namespace topoiga
