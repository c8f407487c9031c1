#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cgbg/errors.hpp"

namespace cgbg {

// Row-major flattening shared by every table in the library: the last
// position varies fastest.
inline std::size_t local_index(std::span<const std::size_t> sizes,
                               std::span<const std::size_t> assignment) {
  if (sizes.size() != assignment.size()) {
    throw InvalidArgument("local_index: " + std::to_string(assignment.size()) +
                          " indices for " + std::to_string(sizes.size()) + " dimensions");
  }
  std::size_t index = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (assignment[j] >= sizes[j]) {
      throw InvalidArgument("local_index: index " + std::to_string(assignment[j]) +
                            " out of range for dimension " + std::to_string(j) +
                            " of size " + std::to_string(sizes[j]));
    }
    index = index * sizes[j] + assignment[j];
  }
  return index;
}

inline std::vector<std::size_t> local_unindex(std::span<const std::size_t> sizes,
                                              std::size_t index) {
  std::vector<std::size_t> out(sizes.size());
  for (std::size_t j = sizes.size(); j-- > 0;) {
    out[j] = index % sizes[j];
    index /= sizes[j];
  }
  if (index != 0) throw InvalidArgument("local_unindex: index out of range");
  return out;
}

inline std::vector<std::size_t> row_major_strides(std::span<const std::size_t> sizes) {
  std::vector<std::size_t> strides(sizes.size());
  std::size_t s = 1;
  for (std::size_t j = sizes.size(); j-- > 0;) {
    strides[j] = s;
    s *= sizes[j];
  }
  return strides;
}

// Product of sizes, saturating at SIZE_MAX so callers can compare against caps
// without overflow.
inline std::size_t saturating_product(std::span<const std::size_t> sizes) {
  std::size_t p = 1;
  for (std::size_t s : sizes) {
    if (s != 0 && p > std::numeric_limits<std::size_t>::max() / s) {
      return std::numeric_limits<std::size_t>::max();
    }
    p *= s;
  }
  return p;
}

inline std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::vector<std::size_t> v(exp, base);
  return saturating_product(v);
}

// Mixed-radix counter over a fixed shape; next() returns false after the
// last assignment and leaves the counter at all zeros.
class Odometer {
 public:
  explicit Odometer(std::vector<std::size_t> sizes)
      : sizes_(std::move(sizes)), digits_(sizes_.size(), 0) {}

  const std::vector<std::size_t>& digits() const { return digits_; }
  std::size_t operator[](std::size_t j) const { return digits_[j]; }

  // Advances; returns the most significant position that changed, or size()
  // on wrap.
  std::size_t advance() {
    for (std::size_t j = sizes_.size(); j-- > 0;) {
      if (++digits_[j] < sizes_[j]) return j;
      digits_[j] = 0;
    }
    return sizes_.size();
  }

  bool next() { return advance() != sizes_.size(); }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> digits_;
};

}  // namespace cgbg
