#pragma once

// Classic q-ary Huffman coding and its trivial embedding into a
// multi-channel profile.

#include <mchuff/core.hpp>
#include <mchuff/tree.hpp>

#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <vector>

namespace mchuff {

// Dummy masses needed so that m + w = 1 (mod q - 1).
inline std::size_t dummy_count(std::size_t m, std::size_t q) {
  if (m < 1 || q < 2) throw InvalidArgument("dummy_count needs m >= 1 and q >= 2");
  return (q - 1 - ((m - 1) % (q - 1))) % (q - 1);
}

struct SingleChannelCode {
  int q = 2;
  std::vector<std::size_t> lengths;    // per symbol, in digits
  std::vector<DigitString> codewords;  // per symbol
  Nats expected_length = 0;
  std::size_t dummies = 0;
  DecodingTree tree;  // every internal node has class 0
};

namespace detail {

struct HeapItem {
  Rational mass;
  std::size_t seq;
  std::size_t node;
  bool dummy;
};

struct HeapOrder {
  bool operator()(const HeapItem& a, const HeapItem& b) const {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.seq > b.seq;
  }
};

// Huffman merges over (mass, creation order). Returns the tree and the
// exact weighted depth sum(p_j * depth_j).
inline std::pair<DecodingTree, Rational> huffman_build(const Distribution& dist, int q, std::size_t channel) {
  if (q < 2) throw InvalidArgument("alphabet size must be at least 2");
  const std::size_t m = dist.size();
  if (m == 1) return {DecodingTree::single_leaf(dist.order().front()), Rational(0)};

  DecodingTree t;
  std::priority_queue<HeapItem, std::vector<HeapItem>, HeapOrder> heap;
  std::size_t seq = 0;
  const auto w = dummy_count(m, static_cast<std::size_t>(q));
  for (std::size_t d = 0; d < w; ++d) heap.push({Rational(0), seq++, t.add_dummy(), true});
  for (std::size_t k = 0; k < m; ++k) heap.push({dist.sorted()[k], seq++, t.add_leaf(dist.order()[k]), false});

  Rational weighted_depth = 0;
  while (heap.size() > 1) {
    std::vector<std::size_t> real;
    std::vector<std::size_t> fillers;
    Rational merged = 0;
    for (int i = 0; i < q; ++i) {
      HeapItem item = heap.top();
      heap.pop();
      merged += item.mass;
      (item.dummy ? fillers : real).push_back(item.node);
    }
    real.insert(real.end(), fillers.begin(), fillers.end());
    weighted_depth += merged;
    heap.push({merged, seq++, t.add_internal(channel, std::move(real)), false});
  }
  t.set_root(heap.top().node);
  return {std::move(t), weighted_depth};
}

// Huffman cost of an arbitrary multiset (zeros allowed), without the tree:
// the sum of all merged masses times ln q.
inline Nats huffman_length_of(std::span<const Rational> masses, int q) {
  if (masses.size() <= 1) return 0;
  std::priority_queue<Rational, std::vector<Rational>, std::greater<>> heap(masses.begin(), masses.end());
  const auto w = dummy_count(masses.size(), static_cast<std::size_t>(q));
  for (std::size_t d = 0; d < w; ++d) heap.push(Rational(0));
  Rational weighted_depth = 0;
  while (heap.size() > 1) {
    Rational merged = 0;
    for (int i = 0; i < q; ++i) {
      merged += heap.top();
      heap.pop();
    }
    weighted_depth += merged;
    heap.push(merged);
  }
  return to_double(weighted_depth) * std::log(static_cast<double>(q));
}

}  // namespace detail

inline SingleChannelCode build_single_huffman(const Distribution& dist, int q) {
  auto [tree, weighted_depth] = detail::huffman_build(dist, q, 0);
  SingleChannelCode code;
  code.q = q;
  code.expected_length = to_double(weighted_depth) * std::log(static_cast<double>(q));
  code.dummies = dist.size() == 1 ? 0 : dummy_count(dist.size(), static_cast<std::size_t>(q));
  const auto cb = codebook_from_tree(tree, ChannelProfile({q}));
  for (const auto& w : cb.words) {
    code.codewords.push_back(w.parts.front());
    code.lengths.push_back(w.parts.front().size());
  }
  code.tree = std::move(tree);
  return code;
}

// The Huffman tree for one channel of a profile, with that channel as the
// class of every internal node.
inline DecodingTree single_channel_tree(const Distribution& dist, const ChannelProfile& ch, std::size_t channel) {
  if (channel >= ch.count()) throw InvalidArgument("channel " + std::to_string(channel) + " does not exist");
  return detail::huffman_build(dist, ch.size(channel), channel).first;
}

// Places each codeword on one channel and leaves the others empty.
inline Codebook trivial_extension(const SingleChannelCode& code, std::size_t channel, const ChannelProfile& ch) {
  if (channel >= ch.count()) throw DimensionMismatch("channel " + std::to_string(channel) + " does not exist");
  if (ch.size(channel) != code.q)
    throw DimensionMismatch("code is " + std::to_string(code.q) + "-ary but channel " + std::to_string(channel) +
                            " has alphabet size " + std::to_string(ch.size(channel)));
  Codebook cb{ch, {}};
  cb.words.reserve(code.codewords.size());
  for (const auto& c : code.codewords) {
    Codeword w{std::vector<DigitString>(ch.count())};
    w.parts[channel] = c;
    cb.words.push_back(std::move(w));
  }
  return cb;
}

}  // namespace mchuff
