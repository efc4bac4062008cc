#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace noisygd {

// 1 - exp(-x), accurate for small x.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

// (1 - eta)^k evaluated in log space; exact 1 for k = 0. Requires eta < 1.
inline double pow_one_minus(double eta, std::int64_t k) {
  if (k == 0) return 1.0;
  return std::exp(static_cast<double>(k) * std::log1p(-eta));
}

inline double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(squared_norm(v)); }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace noisygd
