#pragma once

// Generalized Huffman procedure for multi-channel tree-decodable codes.
//
// Each iteration merges the k smallest masses under one internal node.
// Only the first merge may pad with dummy masses: for a first merge of k
// real masses the node takes the smallest alphabet q >= k and q - k dummies.
// Later merges use k = q_i exactly. The optimal code is found by a memoized
// search over the choice of k at every level.

#include <mchuff/core.hpp>
#include <mchuff/tree.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mchuff {

struct MergeStep {
  std::size_t k = 0;        // real (non-dummy) masses merged
  std::size_t channel = 0;  // class of the new internal node
  std::size_t dummies = 0;  // only ever non-zero on the first step
  Rational merged_mass;

  friend bool operator==(const MergeStep&, const MergeStep&) = default;
};

struct SearchResult {
  DecodingTree tree;
  std::vector<MergeStep> sequence;
  Nats expected_length = 0;
  std::size_t subproblem_count = 0;

  std::vector<std::size_t> merge_counts() const {
    std::vector<std::size_t> out;
    out.reserve(sequence.size());
    for (const auto& s : sequence) out.push_back(s.k);
    return out;
  }
};

inline std::string format_sequence(const std::vector<std::size_t>& ks) {
  std::string out = "(";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ks[i]);
  }
  return out + ")";
}

// Alphabet sizes usable after the first merge, each with the lowest channel
// that has it.
inline std::vector<std::pair<int, std::size_t>> later_merge_options(const ChannelProfile& ch) {
  std::vector<std::pair<int, std::size_t>> out;
  for (auto c : ch.ascending())
    if (out.empty() || out.back().first != ch.size(c)) out.push_back({ch.size(c), c});
  return out;
}

// A multiset being reduced by merges, together with the partial tree.
// Items stay ordered by (mass, creation order), so ties always resolve the
// same way a stable Huffman heap would.
class MergeState {
 public:
  explicit MergeState(const Distribution& dist) {
    items_.reserve(dist.size());
    for (std::size_t k = 0; k < dist.size(); ++k)
      items_.push_back({dist.sorted()[k], next_seq_++, tree_.add_leaf(dist.order()[k])});
  }

  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<MergeStep>& steps() const noexcept { return steps_; }

  std::vector<Rational> masses() const {
    std::vector<Rational> out;
    out.reserve(items_.size());
    for (const auto& it : items_) out.push_back(it.mass);
    return out;
  }

  // Merges the k smallest items plus `dummies` zero masses into one node of
  // the given class. Returns the exact masses that were merged, dummies
  // included as zeros.
  std::vector<Rational> merge(std::size_t k, std::size_t channel, std::size_t dummies) {
    if (k < 1 || k > items_.size()) throw InvalidArgument("merge of " + std::to_string(k) + " masses is out of range");
    std::vector<std::size_t> children;
    std::vector<Rational> parts;
    Rational merged = 0;
    for (std::size_t i = 0; i < k; ++i) {
      children.push_back(items_[i].node);
      parts.push_back(items_[i].mass);
      merged += items_[i].mass;
    }
    for (std::size_t d = 0; d < dummies; ++d) {
      children.push_back(tree_.add_dummy());
      parts.push_back(Rational(0));
    }
    items_.erase(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(k));
    Item fresh{merged, next_seq_++, tree_.add_internal(channel, std::move(children))};
    auto pos = std::upper_bound(items_.begin(), items_.end(), fresh.mass,
                                [](const Rational& m, const Item& it) { return m < it.mass; });
    items_.insert(pos, std::move(fresh));
    steps_.push_back({k, channel, dummies, merged});
    return parts;
  }

  // The finished tree; valid once a single item remains.
  DecodingTree tree() const {
    if (items_.size() != 1) throw std::logic_error("merge state is not fully reduced");
    DecodingTree t = tree_;
    t.set_root(items_.front().node);
    return t;
  }

 private:
  struct Item {
    Rational mass;
    std::size_t seq;
    std::size_t node;
  };
  std::vector<Item> items_;
  std::vector<MergeStep> steps_;
  DecodingTree tree_;
  std::size_t next_seq_ = 0;
};

namespace detail {

inline std::vector<Rational> reduce_sorted(const std::vector<Rational>& sorted, std::size_t k, Rational& merged) {
  merged = 0;
  for (std::size_t i = 0; i < k; ++i) merged += sorted[i];
  std::vector<Rational> out(sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
  out.insert(std::upper_bound(out.begin(), out.end(), merged), merged);
  return out;
}

// Memoized optimum over dummy-free merge sequences for a sorted multiset.
class MergeSearch {
 public:
  struct Best {
    bool feasible = false;
    Nats length = 0;
    std::vector<std::pair<std::size_t, std::size_t>> steps;  // (k, channel)
  };

  explicit MergeSearch(const ChannelProfile& ch) : options_(later_merge_options(ch)) {
    for (const auto& [q, c] : options_) log_size_.push_back(std::log(static_cast<double>(q)));
  }

  const Best& solve(const std::vector<Rational>& sorted) {
    if (auto it = memo_.find(sorted); it != memo_.end()) return it->second;
    Best best;
    if (sorted.size() == 1) {
      best.feasible = true;
    } else {
      for (std::size_t o = 0; o < options_.size(); ++o) {
        const auto [q, channel] = options_[o];
        if (static_cast<std::size_t>(q) > sorted.size()) break;
        Rational merged;
        auto reduced = reduce_sorted(sorted, static_cast<std::size_t>(q), merged);
        const Best& sub = solve(reduced);
        if (!sub.feasible) continue;
        const Nats cost = sub.length + to_double(merged) * log_size_[o];
        if (!best.feasible || nats_less(cost, best.length)) {
          best.feasible = true;
          best.length = cost;
          best.steps.clear();
          best.steps.push_back({static_cast<std::size_t>(q), channel});
          best.steps.insert(best.steps.end(), sub.steps.begin(), sub.steps.end());
        }
      }
    }
    return memo_.emplace(sorted, std::move(best)).first->second;
  }

  std::size_t subproblems() const noexcept { return memo_.size(); }

 private:
  std::vector<std::pair<int, std::size_t>> options_;
  std::vector<double> log_size_;
  std::map<std::vector<Rational>, Best> memo_;
};

inline void extend_sequences(std::size_t remaining, const std::vector<int>& later, std::vector<std::size_t>& prefix,
                             std::vector<std::vector<std::size_t>>& out) {
  if (remaining == 1) {
    out.push_back(prefix);
    return;
  }
  for (int q : later) {
    if (static_cast<std::size_t>(q) > remaining) break;
    prefix.push_back(static_cast<std::size_t>(q));
    extend_sequences(remaining - static_cast<std::size_t>(q) + 1, later, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

// Every merge sequence that reduces m masses to one, in lexicographic order.
// The first term ranges over 2..q_max, later terms over the distinct q_i.
inline std::vector<std::vector<std::size_t>> enumerate_merge_sequences(std::size_t m, const ChannelProfile& ch) {
  if (m < 2) throw InvalidArgument("enumerate_merge_sequences needs m >= 2");
  std::vector<int> later;
  for (const auto& [q, c] : later_merge_options(ch)) later.push_back(q);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  const auto top = std::min<std::size_t>(static_cast<std::size_t>(ch.largest()), m);
  for (std::size_t k = 2; k <= top; ++k) {
    prefix.push_back(k);
    detail::extend_sequences(m - k + 1, later, prefix, out);
    prefix.pop_back();
  }
  return out;
}

// Replays a merge sequence (real-mass counts) on a distribution. The first
// step picks its class and dummy padding by the smallest-fitting-alphabet
// rule; later steps must match an alphabet size exactly.
inline MergeState replay_sequence(const Distribution& dist, const ChannelProfile& ch,
                                  const std::vector<std::size_t>& ks) {
  MergeState state(dist);
  const auto later = later_merge_options(ch);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto k = ks[i];
    if (i == 0) {
      const auto channel = ch.smallest_fitting(static_cast<int>(k));
      if (k < 2 || channel == ch.count()) throw InvalidArgument("first merge size " + std::to_string(k) + " is not admissible");
      state.merge(k, channel, static_cast<std::size_t>(ch.size(channel)) - k);
    } else {
      auto it = std::find_if(later.begin(), later.end(),
                             [&](const auto& o) { return static_cast<std::size_t>(o.first) == k; });
      if (it == later.end()) throw InvalidArgument("merge size " + std::to_string(k) + " matches no alphabet");
      state.merge(k, it->second, 0);
    }
  }
  return state;
}

// The optimal tree-decodable code. Ties within kTieEpsilon go to the smaller
// k at each level, which yields the lexicographically smallest sequence.
inline SearchResult optimal_search(const Distribution& dist, const ChannelProfile& ch) {
  SearchResult result;
  const std::size_t m = dist.size();
  if (m == 1) {
    result.tree = DecodingTree::single_leaf(0);
    result.expected_length = 0;
    return result;
  }

  detail::MergeSearch search(ch);
  const auto& sorted = dist.sorted();
  std::optional<std::size_t> best_k;
  Nats best_length = 0;
  std::vector<std::pair<std::size_t, std::size_t>> best_tail;
  const auto top = std::min<std::size_t>(static_cast<std::size_t>(ch.largest()), m);
  for (std::size_t k = 2; k <= top; ++k) {
    const auto channel = ch.smallest_fitting(static_cast<int>(k));
    Rational merged;
    auto reduced = detail::reduce_sorted(sorted, k, merged);
    const auto& sub = search.solve(reduced);
    if (!sub.feasible) continue;
    const Nats cost = sub.length + to_double(merged) * ch.log_size(channel);
    if (!best_k || nats_less(cost, best_length)) {
      best_k = k;
      best_length = cost;
      best_tail = sub.steps;
    }
  }
  if (!best_k) throw std::logic_error("optimal_search: no admissible merge sequence");

  std::vector<std::size_t> ks{*best_k};
  for (const auto& [k, c] : best_tail) ks.push_back(k);
  auto state = replay_sequence(dist, ch, ks);
  result.tree = state.tree();
  result.sequence = state.steps();
  result.expected_length = expected_length(result.tree, dist);
  result.subproblem_count = search.subproblems();
  return result;
}

namespace detail {

// Leaf profiles of every class-labelled subtree with `leaves` real leaves and
// `dummies` dummy leaves. A profile is the sorted list of real-leaf length
// tuples. Children are chosen as unordered multisets of (leaves, dummies)
// parts, which loses nothing because slot order does not change lengths.
class TreeProfiles {
 public:
  using Profile = std::vector<LengthTuple>;

  explicit TreeProfiles(const ChannelProfile& ch) : ch_(ch) {}

  const std::set<Profile>& of(std::size_t leaves, std::size_t dummies) {
    const auto key = std::pair{leaves, dummies};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::set<Profile> out;
    if (leaves == 1 && dummies == 0) out.insert(Profile{LengthTuple{std::vector<std::size_t>(ch_.count(), 0)}});
    if (leaves >= 1 && leaves + dummies >= 2) {
      for (std::size_t c = 0; c < ch_.count(); ++c) {
        std::vector<std::pair<std::size_t, std::size_t>> parts;
        expand_children(c, static_cast<std::size_t>(ch_.size(c)), leaves, dummies, parts, out);
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  // Enumerates nonincreasing (leaves, dummies) parts so each multiset of
  // children is produced once.
  void expand_children(std::size_t channel, std::size_t slots_left, std::size_t leaves, std::size_t dummies,
                       std::vector<std::pair<std::size_t, std::size_t>>& parts, std::set<Profile>& out) {
    if (slots_left == 0) {
      if (leaves == 0 && dummies == 0) combine(channel, parts, 0, Profile{}, out);
      return;
    }
    for (std::size_t l = 0; l <= leaves; ++l) {
      for (std::size_t d = 0; d <= dummies; ++d) {
        if (l == 0 && d != 1) continue;  // a slot is a leaf, a dummy, or a subtree with real leaves
        if ((leaves - l) + (dummies - d) < slots_left - 1) continue;  // every later slot needs something
        std::pair part{l, d};
        if (!parts.empty() && part > parts.back()) continue;
        if (l >= 1 && of(l, d).empty()) continue;
        parts.push_back(part);
        expand_children(channel, slots_left - 1, leaves - l, dummies - d, parts, out);
        parts.pop_back();
      }
    }
  }

  void combine(std::size_t channel, const std::vector<std::pair<std::size_t, std::size_t>>& parts, std::size_t index,
               Profile acc, std::set<Profile>& out) {
    if (index == parts.size()) {
      for (auto& lt : acc) ++lt.lengths[channel];
      std::sort(acc.begin(), acc.end());
      out.insert(std::move(acc));
      return;
    }
    const auto [l, d] = parts[index];
    if (l == 0) {
      combine(channel, parts, index + 1, std::move(acc), out);
      return;
    }
    for (const auto& child : of(l, d)) {
      Profile next = acc;
      next.insert(next.end(), child.begin(), child.end());
      combine(channel, parts, index + 1, std::move(next), out);
    }
  }

  ChannelProfile ch_;
  std::map<std::pair<std::size_t, std::size_t>, std::set<Profile>> memo_;
};

}  // namespace detail

// Exhaustive reference optimum, independent of the merge machinery: every
// class-labelled tree with m real leaves and fewer than dummy_bound(ch)
// dummies, under every assignment of symbols to leaves. Such a tree has at
// most m + w - 1 internal nodes, so no extra size cap is needed. Cost grows
// roughly as m! times the number of leaf-length profiles; keep m <= 5.
inline Nats brute_force_oracle(const Distribution& dist, const ChannelProfile& ch, std::size_t max_m = 5) {
  const std::size_t m = dist.size();
  if (m > max_m)
    throw InvalidArgument("brute_force_oracle: m = " + std::to_string(m) + " exceeds max_m = " + std::to_string(max_m));
  if (m == 1) return 0;

  std::vector<double> p;
  for (const auto& mass : dist.by_symbol()) p.push_back(to_double(mass));

  detail::TreeProfiles profiles(ch);
  Nats best = std::numeric_limits<double>::infinity();
  const auto bound = static_cast<std::size_t>(dummy_bound(ch));
  for (std::size_t w = 0; w < bound; ++w) {
    for (const auto& profile : profiles.of(m, w)) {
      std::vector<double> lengths;
      for (const auto& lt : profile) lengths.push_back(description_length(lt, ch));
      std::vector<std::size_t> perm(m);
      for (std::size_t j = 0; j < m; ++j) perm[j] = j;
      do {
        Nats total = 0;
        for (std::size_t j = 0; j < m; ++j) total += p[perm[j]] * lengths[j];
        best = std::min(best, total);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return best;
}

}  // namespace mchuff
