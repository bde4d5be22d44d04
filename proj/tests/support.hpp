#pragma once

// Shared fixtures for the test suites.

#include <mchuff/mchuff.hpp>
#include <mchuff/random.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace mchuff::testing {

inline Distribution dist_of(std::vector<std::string> masses) { return Distribution::parse(masses); }

inline Distribution thirds_source() { return dist_of({"1/6", "1/6", "1/3", "1/3"}); }
inline Distribution halves_source() { return dist_of({"1/6", "1/6", "1/6", "1/2"}); }
inline Distribution pruning_source() { return dist_of({"0.13", "0.199", "0.212", "0.217", "0.242"}); }

// Root reads the ternary channel; slot 0 holds a binary node over the two
// 1/6 masses, slots 1 and 2 the 1/3 masses.
inline DecodingTree ternary_root_tree() {
  DecodingTree t;
  const auto a = t.add_leaf(0);
  const auto b = t.add_leaf(1);
  const auto inner = t.add_internal(0, {a, b});
  const auto c = t.add_leaf(2);
  const auto d = t.add_leaf(3);
  t.set_root(t.add_internal(1, {inner, c, d}));
  return t;
}

// Root reads the binary channel; slot 0 is the 1/2 mass, slot 1 a ternary
// node over the three 1/6 masses.
inline DecodingTree binary_root_tree() {
  DecodingTree t;
  const auto half = t.add_leaf(3);
  const auto a = t.add_leaf(0);
  const auto b = t.add_leaf(1);
  const auto c = t.add_leaf(2);
  const auto inner = t.add_internal(1, {a, b, c});
  t.set_root(t.add_internal(0, {half, inner}));
  return t;
}

inline ChannelProfile binary_ternary() { return ChannelProfile({2, 3}); }

// Three binary channels: {(0,0,e), (1,e,0), (e,1,1)}.
inline Codebook no_tree_code() {
  Codebook cb{ChannelProfile({2, 2, 2}), {}};
  cb.words.push_back({{{0}, {0}, {}}});
  cb.words.push_back({{{1}, {}, {0}}});
  cb.words.push_back({{{}, {1}, {1}}});
  return cb;
}

inline std::mt19937_64 make_rng(std::uint64_t salt = 0) { return std::mt19937_64(seed_from_env() + salt); }

// A random valid decoding tree: repeatedly merges a random subset of the
// pending subtrees under a node of a random class, padding unused slots
// with dummies and shuffling slot order.
inline DecodingTree random_tree(std::mt19937_64& rng, std::size_t m, const ChannelProfile& ch) {
  DecodingTree t;
  std::vector<std::size_t> pending;
  for (std::size_t j = 0; j < m; ++j) pending.push_back(t.add_leaf(j));
  std::shuffle(pending.begin(), pending.end(), rng);
  std::uniform_int_distribution<std::size_t> pick_channel(0, ch.count() - 1);
  while (pending.size() > 1) {
    const auto channel = pick_channel(rng);
    const auto q = static_cast<std::size_t>(ch.size(channel));
    const auto most = std::min(q, pending.size());
    const auto k = std::uniform_int_distribution<std::size_t>(std::min<std::size_t>(2, most), most)(rng);
    std::shuffle(pending.begin(), pending.end(), rng);
    std::vector<std::size_t> children(pending.end() - static_cast<std::ptrdiff_t>(k), pending.end());
    pending.resize(pending.size() - k);
    while (children.size() < q) children.push_back(t.add_dummy());
    std::shuffle(children.begin(), children.end(), rng);
    pending.push_back(t.add_internal(channel, std::move(children)));
  }
  t.set_root(pending.front());
  return t;
}

inline ChannelProfile random_profile(std::mt19937_64& rng) {
  static const std::vector<std::vector<int>> profiles{{2, 3}, {2, 4}, {3, 4}, {2, 2, 3}, {2, 5}, {3, 5}, {2}, {3},
                                                      {4, 2}, {3, 2, 2}};
  return ChannelProfile(profiles[std::uniform_int_distribution<std::size_t>(0, profiles.size() - 1)(rng)]);
}

}  // namespace mchuff::testing
