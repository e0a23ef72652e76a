#pragma once

#include <cstdint>

namespace revar {

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// P(X > x) for X ~ chi-squared(df).
double chi_squared_upper_tail(double x, double df);

/// SplitMix64 finalizer; derives independent stream seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t s = mix_seed(master);
  s = mix_seed(s ^ (a + 0x9e3779b97f4a7c15ULL));
  s = mix_seed(s ^ (b + 0xbf58476d1ce4e5b9ULL));
  s = mix_seed(s ^ (c + 0x94d049bb133111ebULL));
  return s;
}

}  // namespace revar
