#pragma once

// Random exact inputs for identity tests: rationals p/q with p, q uniform in
// [-40, 40] \ {0}, resampled until the coordinate sets are admissible.

#include "qcduality/model.hpp"
#include "qcduality/scalar.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qcd {

class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed, long bound = 40) : rng_(seed), bound_(bound) {}

  Rational next() {
    std::uniform_int_distribution<long> d(-bound_, bound_ - 1);
    auto draw = [&] {
      long v = d(rng_);
      return v >= 0 ? v + 1 : v;  // skip zero
    };
    Rational r(draw(), draw());
    r.canonicalize();
    return r;
  }

  QSqrt2 next_q() { return QSqrt2(next()); }

  /// n rationals with x_i != 0, x_i != x_k and (when `signed_distinct`) x_i != -x_k.
  std::vector<QSqrt2> admissible(std::size_t n, bool signed_distinct = true) {
    for (;;) {
      std::vector<QSqrt2> v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(next_q());
      if (distinct(v, signed_distinct)) return v;
    }
  }

  /// Draws `m` values admissible jointly with `fixed` (all of them pairwise
  /// distinct, non-opposite and nonzero).
  std::vector<QSqrt2> admissible_with(const std::vector<QSqrt2>& fixed, std::size_t m, bool signed_distinct = true) {
    for (;;) {
      std::vector<QSqrt2> v;
      for (std::size_t i = 0; i < m; ++i) v.push_back(next_q());
      std::vector<QSqrt2> all = fixed;
      all.insert(all.end(), v.begin(), v.end());
      if (distinct(all, signed_distinct)) return v;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  static bool distinct(const std::vector<QSqrt2>& v, bool signed_distinct) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) return false;
      for (std::size_t k = i + 1; k < v.size(); ++k) {
        if (v[i] == v[k]) return false;
        if (signed_distinct && v[i] == -v[k]) return false;
      }
    }
    return true;
  }

  std::mt19937_64 rng_;
  long bound_;
};

}  // namespace qcd
