// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>

namespace graphvar {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

/// |a - b| / max(|a|, |b|, scale). Returns 0 when all three vanish.
/// `scale` carries the magnitude of the summands that produced a and b, so
/// cancellation in a sum is not mistaken for a large relative error.
inline double relative_error(double a, double b, double scale = 0.0) noexcept {
  const double denom = std::max({std::abs(a), std::abs(b), std::abs(scale)});
  const double diff = std::abs(a - b);
  if (denom == 0.0) return diff;
  return diff / denom;
}

/// |x|^e with the convention 0^e = 0 for every e (callers only use it where
/// the accompanying factor vanishes as well).
inline double safe_pow(double x, double e) noexcept {
  const double ax = std::abs(x);
  if (ax == 0.0) return e == 0.0 ? 1.0 : 0.0;
  return std::pow(ax, e);
}

/// sign(x)|x|^e.
inline double signed_pow(double x, double e) noexcept {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), e), x);
}

/// 64-bit FNV-1a, used to fingerprint configuration inputs in reports.
inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace graphvar
