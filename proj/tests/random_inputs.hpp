// Deterministic random inputs shared by the test suites.
#pragma once

#include "cwave/boxset.hpp"

#include <random>

namespace cwave::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20260917ULL);
  return engine;
}

inline long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }
inline double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

// p / den with p uniform in [lo*den, hi*den].
inline Rational dyadic(long lo, long hi, long den) { return Rational(uniform_int(lo * den, hi * den), den); }

// A union of up to `max_boxes` random boxes with dyadic corners in
// [lo, hi)^dim (units of pi).
inline DyadicBoxSet random_box_set(size_t dim, int max_boxes, long lo = -2, long hi = 2, long den = 4) {
  std::vector<RBox> boxes;
  int count = static_cast<int>(uniform_int(1, max_boxes));
  for (int k = 0; k < count; ++k) {
    Vec<Rational> a(dim), b(dim);
    for (size_t i = 0; i < dim; ++i) {
      Rational x = dyadic(lo, hi, den), y = dyadic(lo, hi, den);
      if (x == y) y += Rational(1, den);
      a[i] = x < y ? x : y;
      b[i] = x < y ? y : x;
    }
    boxes.push_back({a, b});
  }
  return DyadicBoxSet::from_boxes(dim, boxes);
}

}  // namespace cwave::testing
