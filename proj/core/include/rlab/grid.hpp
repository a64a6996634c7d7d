#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace rlab {

using Index = std::array<std::int64_t, 2>;

/// Shape of a periodic grid: `dim` axes of `n` points each, row-major.
struct GridShape {
  int dim = 1;
  std::int64_t n = 1;

  std::int64_t cells() const { return dim == 1 ? n : n * n; }

  std::int64_t linear(const Index& idx) const { return dim == 1 ? idx[0] : idx[0] * n + idx[1]; }

  Index coords(std::int64_t linear) const {
    if (dim == 1) return {linear, 0};
    return {linear / n, linear % n};
  }

  /// Reduces each coordinate into [0, n).
  Index wrap(Index idx) const {
    for (int a = 0; a < dim; ++a) idx[a] = ((idx[a] % n) + n) % n;
    return idx;
  }

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

inline bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

inline void check_shape(const GridShape& s) {
  if (s.dim != 1 && s.dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (!is_power_of_two(s.n)) throw std::invalid_argument("resolution must be a power of two");
}

/// Signed representative of a periodic offset: the value in [-n/2, n/2).
inline std::int64_t centered(std::int64_t v, std::int64_t n) {
  v = ((v % n) + n) % n;
  return v >= n / 2 ? v - n : v;
}

}  // namespace rlab
