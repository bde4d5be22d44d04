#pragma once

// Reproducible random test vectors. MCHUFF_SEED overrides the default seed.

#include <mchuff/core.hpp>

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

namespace mchuff {

inline std::uint64_t seed_from_env(std::uint64_t fallback = 20240611) {
  if (const char* text = std::getenv("MCHUFF_SEED"); text && *text) {
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      return fallback;
    }
  }
  return fallback;
}

// m masses proportional to integer weights drawn from [1, max_weight].
inline Distribution random_distribution(std::mt19937_64& rng, std::size_t m, long max_weight = 100) {
  std::uniform_int_distribution<long> weight(1, max_weight);
  std::vector<long> w(m);
  long total = 0;
  for (auto& x : w) total += (x = weight(rng));
  std::vector<Rational> masses;
  masses.reserve(m);
  for (auto x : w) {
    Rational r{mpz_class(x), mpz_class(total)};
    r.canonicalize();
    masses.push_back(std::move(r));
  }
  return Distribution::from_masses(std::move(masses));
}

}  // namespace mchuff
