#pragma once

// Multi-channel decoding trees and the codebooks they induce.
//
// Every internal node reads one digit from the channel named by its class
// and has exactly q_class child slots. Unused slots hold dummy leaves so the
// Kraft bookkeeping stays exact.

#include <mchuff/core.hpp>
#include <mchuff/errors.hpp>
#include <mchuff/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mchuff {

enum class NodeKind : std::uint8_t { leaf, dummy, internal };

struct TreeNode {
  NodeKind kind = NodeKind::leaf;
  std::size_t symbol = 0;   // leaf only
  std::size_t channel = 0;  // internal only: the node's class
  std::vector<std::size_t> children;
};

// Nodes live in a flat arena and refer to children by index.
class DecodingTree {
 public:
  static DecodingTree single_leaf(std::size_t symbol) {
    DecodingTree t;
    t.root_ = t.add_leaf(symbol);
    return t;
  }

  std::size_t add_leaf(std::size_t symbol) {
    nodes_.push_back(TreeNode{NodeKind::leaf, symbol, 0, {}});
    return nodes_.size() - 1;
  }
  std::size_t add_dummy() {
    nodes_.push_back(TreeNode{NodeKind::dummy, 0, 0, {}});
    return nodes_.size() - 1;
  }
  std::size_t add_internal(std::size_t channel, std::vector<std::size_t> children) {
    nodes_.push_back(TreeNode{NodeKind::internal, 0, channel, std::move(children)});
    return nodes_.size() - 1;
  }
  void set_root(std::size_t index) { root_ = index; }

  std::size_t root() const noexcept { return root_; }
  const TreeNode& node(std::size_t index) const { return nodes_.at(index); }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  bool empty() const noexcept { return nodes_.empty(); }

  // Visits reachable nodes in preorder. The callback gets the node index and
  // the slot path from the root.
  template <typename Visitor>
  void preorder(Visitor&& visit) const {
    if (nodes_.empty()) return;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> stack;
    stack.push_back({root_, {}});
    std::vector<bool> seen(nodes_.size(), false);
    while (!stack.empty()) {
      auto [index, path] = std::move(stack.back());
      stack.pop_back();
      if (index >= nodes_.size() || seen[index]) continue;
      seen[index] = true;
      visit(index, path);
      const auto& n = nodes_[index];
      if (n.kind != NodeKind::internal) continue;
      for (std::size_t slot = n.children.size(); slot-- > 0;) {
        auto child_path = path;
        child_path.push_back(slot);
        stack.push_back({n.children[slot], std::move(child_path)});
      }
    }
  }

 private:
  std::vector<TreeNode> nodes_;
  std::size_t root_ = 0;
};

using DigitString = std::vector<std::uint32_t>;

struct Codeword {
  std::vector<DigitString> parts;  // one digit string per channel

  LengthTuple lengths() const {
    LengthTuple lt;
    lt.lengths.reserve(parts.size());
    for (const auto& p : parts) lt.lengths.push_back(p.size());
    return lt;
  }
  friend bool operator==(const Codeword&, const Codeword&) = default;
};

// Codewords indexed by source symbol.
struct Codebook {
  ChannelProfile channels;
  std::vector<Codeword> words;

  std::size_t size() const noexcept { return words.size(); }

  std::vector<LengthTuple> length_tuples() const {
    std::vector<LengthTuple> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(w.lengths());
    return out;
  }

  friend bool operator==(const Codebook&, const Codebook&) = default;
};

inline std::string format_path(const std::vector<std::size_t>& path) {
  if (path.empty()) return "/";
  std::string out;
  for (auto slot : path) out += "/" + std::to_string(slot);
  return out;
}

struct TreeViolation {
  std::string path;
  std::string message;
};

namespace detail {

// Structural checks that need no channel profile: the arena forms a tree,
// each symbol below m appears once, and no subtree is all dummies.
inline void check_structure(const DecodingTree& t, std::size_t m, std::vector<TreeViolation>& out) {
  const auto& nodes = t.nodes();
  if (nodes.empty()) {
    out.push_back({"/", "tree has no nodes"});
    return;
  }
  if (t.root() >= nodes.size()) {
    out.push_back({"/", "root index out of range"});
    return;
  }
  if (nodes[t.root()].kind == NodeKind::dummy) out.push_back({"/", "root is a dummy leaf"});

  std::vector<int> visits(nodes.size(), 0);
  std::vector<int> symbol_seen(m, 0);
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> stack{{t.root(), {}}};
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> internal_order;
  while (!stack.empty()) {
    auto [index, path] = std::move(stack.back());
    stack.pop_back();
    if (index >= nodes.size()) {
      out.push_back({format_path(path), "child index out of range"});
      continue;
    }
    if (visits[index]++ > 0) {
      out.push_back({format_path(path), "node reached twice"});
      continue;
    }
    const auto& n = nodes[index];
    switch (n.kind) {
      case NodeKind::leaf:
        if (n.symbol >= m)
          out.push_back({format_path(path), "symbol " + std::to_string(n.symbol) + " out of range"});
        else if (symbol_seen[n.symbol]++ > 0)
          out.push_back({format_path(path), "symbol " + std::to_string(n.symbol) + " appears twice"});
        break;
      case NodeKind::dummy:
        break;
      case NodeKind::internal:
        if (n.children.size() < 2)
          out.push_back({format_path(path), "internal node has fewer than two slots"});
        internal_order.push_back({index, path});
        for (std::size_t slot = n.children.size(); slot-- > 0;) {
          auto child_path = path;
          child_path.push_back(slot);
          stack.push_back({n.children[slot], std::move(child_path)});
        }
        break;
    }
  }
  for (std::size_t j = 0; j < m; ++j)
    if (symbol_seen[j] == 0) out.push_back({"/", "symbol " + std::to_string(j) + " has no leaf"});

  // Children precede parents when the preorder list is walked backwards.
  std::vector<bool> live(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) live[i] = nodes[i].kind == NodeKind::leaf;
  for (auto it = internal_order.rbegin(); it != internal_order.rend(); ++it) {
    const auto& n = nodes[it->first];
    bool any = false;
    for (auto c : n.children)
      if (c < nodes.size() && live[c]) any = true;
    live[it->first] = any;
    if (!any) out.push_back({format_path(it->second), "internal node has only dummy descendants"});
  }
}

inline void throw_if_invalid(const std::vector<TreeViolation>& violations) {
  if (!violations.empty())
    throw InvalidArgument("invalid decoding tree at " + violations.front().path + ": " + violations.front().message);
}

inline std::size_t count_leaves(const DecodingTree& t) {
  std::size_t leaves = 0;
  t.preorder([&](std::size_t index, const auto&) {
    if (t.node(index).kind == NodeKind::leaf) ++leaves;
  });
  return leaves;
}

// Probability of reaching each node, bottom-up, exact. Dummies reach with 0.
inline std::vector<Rational> reach_masses(const DecodingTree& t, const Distribution& dist) {
  std::vector<Rational> reach(t.nodes().size(), Rational(0));
  std::vector<std::size_t> order;
  t.preorder([&](std::size_t index, const auto&) { order.push_back(index); });
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& n = t.node(*it);
    if (n.kind == NodeKind::leaf) {
      reach[*it] = dist.mass_of(n.symbol);
    } else if (n.kind == NodeKind::internal) {
      Rational s = 0;
      for (auto c : n.children) s += reach[c];
      reach[*it] = s;
    }
  }
  return reach;
}

}  // namespace detail

// Every violated invariant, each with the slot path of the offending node.
// An empty result means the tree is valid for this profile and m symbols.
inline std::vector<TreeViolation> validate_tree(const DecodingTree& t, const ChannelProfile& ch, std::size_t m) {
  std::vector<TreeViolation> out;
  detail::check_structure(t, m, out);
  if (t.empty() || t.root() >= t.nodes().size()) return out;
  t.preorder([&](std::size_t index, const std::vector<std::size_t>& path) {
    const auto& n = t.node(index);
    if (n.kind != NodeKind::internal) return;
    if (n.channel >= ch.count()) {
      out.push_back({format_path(path), "class " + std::to_string(n.channel) + " is not a channel"});
      return;
    }
    if (n.children.size() != static_cast<std::size_t>(ch.size(n.channel)))
      out.push_back({format_path(path), "class " + std::to_string(n.channel) + " node has " +
                                            std::to_string(n.children.size()) + " slots, expected " +
                                            std::to_string(ch.size(n.channel))});
  });
  return out;
}

inline Codebook codebook_from_tree(const DecodingTree& t, const ChannelProfile& ch) {
  const std::size_t m = t.empty() ? 0 : detail::count_leaves(t);
  detail::throw_if_invalid(validate_tree(t, ch, m));

  Codebook cb{ch, std::vector<Codeword>(m, Codeword{std::vector<DigitString>(ch.count())})};
  // Walk with the digit strings accumulated along the path.
  struct Frame {
    std::size_t index;
    std::vector<DigitString> parts;
  };
  std::vector<Frame> stack{{t.root(), std::vector<DigitString>(ch.count())}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const auto& n = t.node(f.index);
    if (n.kind == NodeKind::leaf) {
      cb.words[n.symbol].parts = std::move(f.parts);
    } else if (n.kind == NodeKind::internal) {
      for (std::size_t slot = n.children.size(); slot-- > 0;) {
        auto parts = f.parts;
        parts[n.channel].push_back(static_cast<std::uint32_t>(slot));
        stack.push_back({n.children[slot], std::move(parts)});
      }
    }
  }
  return cb;
}

// Length tuples of the dummy leaves, in preorder.
inline std::vector<LengthTuple> dummy_length_tuples(const DecodingTree& t, const ChannelProfile& ch) {
  std::vector<LengthTuple> out;
  std::vector<std::pair<std::size_t, LengthTuple>> stack{{t.root(), LengthTuple{std::vector<std::size_t>(ch.count(), 0)}}};
  while (!stack.empty()) {
    auto [index, lt] = std::move(stack.back());
    stack.pop_back();
    const auto& n = t.node(index);
    if (n.kind == NodeKind::dummy) {
      out.push_back(std::move(lt));
    } else if (n.kind == NodeKind::internal) {
      for (std::size_t slot = n.children.size(); slot-- > 0;) {
        auto child = lt;
        ++child.lengths[n.channel];
        stack.push_back({n.children[slot], std::move(child)});
      }
    }
  }
  return out;
}

// L = sum over internal nodes of s_k ln(alpha_k). The reach masses are summed
// exactly per arity before the logs are taken.
inline Nats expected_length(const DecodingTree& t, const Distribution& dist) {
  std::vector<TreeViolation> violations;
  detail::check_structure(t, dist.size(), violations);
  detail::throw_if_invalid(violations);
  const auto reach = detail::reach_masses(t, dist);
  std::map<std::size_t, Rational> weight_by_arity;
  t.preorder([&](std::size_t index, const auto&) {
    const auto& n = t.node(index);
    if (n.kind == NodeKind::internal) weight_by_arity[n.children.size()] += reach[index];
  });
  Nats total = 0;
  for (const auto& [arity, weight] : weight_by_arity)
    total += to_double(weight) * std::log(static_cast<double>(arity));
  return total;
}

struct NodeRedundancy {
  std::size_t node = 0;
  Rational reach;          // s_k
  Nats branching_entropy;  // h_k
  std::size_t arity = 0;   // alpha_k
  Nats redundancy;         // r_k = s_k (ln alpha_k - h_k)
};

struct RedundancyReport {
  std::vector<NodeRedundancy> nodes;  // preorder
  Nats expected_length = 0;           // L
  Nats entropy = 0;                   // H
  Nats redundancy = 0;                // L - H
  Nats local_sum = 0;                 // sum of r_k
  Nats entropy_from_nodes = 0;        // sum of s_k h_k
};

inline RedundancyReport local_redundancy(const DecodingTree& t, const Distribution& dist) {
  RedundancyReport report;
  report.expected_length = expected_length(t, dist);
  report.entropy = entropy(dist);
  report.redundancy = report.expected_length - report.entropy;

  const auto reach = detail::reach_masses(t, dist);
  t.preorder([&](std::size_t index, const auto&) {
    const auto& n = t.node(index);
    if (n.kind != NodeKind::internal) return;
    NodeRedundancy r;
    r.node = index;
    r.reach = reach[index];
    r.arity = n.children.size();
    r.branching_entropy = 0;
    for (auto c : n.children) {
      if (sgn(reach[c]) == 0) continue;
      Rational ratio = reach[c] / reach[index];
      r.branching_entropy += plogp_neg(ratio);
    }
    const double s = to_double(r.reach);
    r.redundancy = s * (std::log(static_cast<double>(r.arity)) - r.branching_entropy);
    report.local_sum += r.redundancy;
    report.entropy_from_nodes += s * r.branching_entropy;
    report.nodes.push_back(std::move(r));
  });
  if (std::fabs(report.entropy_from_nodes - report.entropy) > 1e-9)
    throw std::logic_error("local_redundancy: node entropies do not add up to the source entropy");
  return report;
}

// Channels in which no codeword is empty. A decoding tree must read its root
// digit from such a channel, so an empty result proves there is no tree.
inline std::vector<std::size_t> necessary_tree_check(const Codebook& cb) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cb.channels.count(); ++i) {
    bool always = true;
    for (const auto& w : cb.words)
      if (i >= w.parts.size() || w.parts[i].empty()) always = false;
    if (always) out.push_back(i);
  }
  return out;
}

namespace detail {

inline bool is_prefix(const DigitString& a, const DigitString& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Two words are prefix-free when some channel has components neither of
// which is a prefix of the other.
inline bool words_prefix_free(const Codeword& a, const Codeword& b) {
  for (std::size_t i = 0; i < a.parts.size() && i < b.parts.size(); ++i)
    if (!is_prefix(a.parts[i], b.parts[i]) && !is_prefix(b.parts[i], a.parts[i])) return true;
  return false;
}

inline std::optional<std::pair<std::size_t, std::size_t>> first_prefix_violation(const Codebook& cb) {
  for (std::size_t a = 0; a < cb.words.size(); ++a)
    for (std::size_t b = a + 1; b < cb.words.size(); ++b)
      if (!words_prefix_free(cb.words[a], cb.words[b])) return std::pair{a, b};
  return std::nullopt;
}

struct Suffix {
  std::size_t symbol;
  std::vector<std::size_t> offsets;  // digits already consumed per channel
};

inline std::size_t build_from_prefix(const Codebook& cb, std::vector<Suffix> group, DecodingTree& t) {
  // A lone codeword still has to consume its remaining digits, one node per
  // digit, so that the tree's codebook matches the input.
  if (group.size() == 1) {
    const auto& s = group.front();
    bool done = true;
    for (std::size_t i = 0; i < cb.channels.count(); ++i) done = done && s.offsets[i] == cb.words[s.symbol].parts[i].size();
    if (done) return t.add_leaf(s.symbol);
  }
  std::size_t channel = cb.channels.count();
  for (std::size_t i = 0; i < cb.channels.count() && channel == cb.channels.count(); ++i) {
    bool always = std::all_of(group.begin(), group.end(), [&](const Suffix& s) {
      return s.offsets[i] < cb.words[s.symbol].parts[i].size();
    });
    if (always) channel = i;
  }
  if (channel == cb.channels.count())
    throw std::logic_error("prefix-free sub-code has no always-non-empty channel");

  const auto q = static_cast<std::size_t>(cb.channels.size(channel));
  std::vector<std::vector<Suffix>> chunks(q);
  for (auto& s : group) {
    const auto digit = cb.words[s.symbol].parts[channel][s.offsets[channel]];
    if (digit >= q)
      throw InvalidArgument("codeword " + std::to_string(s.symbol) + " uses digit " + std::to_string(digit) +
                            " outside channel " + std::to_string(channel) + "'s alphabet");
    ++s.offsets[channel];
    chunks[digit].push_back(std::move(s));
  }
  std::vector<std::size_t> children;
  children.reserve(q);
  for (auto& chunk : chunks)
    children.push_back(chunk.empty() ? t.add_dummy() : build_from_prefix(cb, std::move(chunk), t));
  return t.add_internal(channel, std::move(children));
}

}  // namespace detail

// Builds a decoding tree for any two-channel prefix code: the root reads an
// always-non-empty channel (the lower index if both qualify), codewords are
// split by that digit, and each part recurses. Slot j holds the codewords
// whose digit is j, so the tree's codebook reproduces the input exactly.
inline DecodingTree tree_from_two_channel_prefix(const Codebook& cb) {
  if (cb.channels.count() != 2)
    throw DimensionMismatch("tree_from_two_channel_prefix needs exactly 2 channels, got " +
                            std::to_string(cb.channels.count()));
  if (cb.words.empty()) throw InvalidArgument("codebook is empty");
  for (std::size_t j = 0; j < cb.words.size(); ++j)
    if (cb.words[j].parts.size() != 2)
      throw DimensionMismatch("codeword " + std::to_string(j) + " does not have 2 components");
  if (auto bad = detail::first_prefix_violation(cb)) throw NotPrefixFree(bad->first, bad->second);

  if (cb.words.size() == 1) return DecodingTree::single_leaf(0);

  std::vector<detail::Suffix> all;
  all.reserve(cb.words.size());
  for (std::size_t j = 0; j < cb.words.size(); ++j) all.push_back({j, {0, 0}});
  DecodingTree t;
  t.set_root(detail::build_from_prefix(cb, std::move(all), t));
  return t;
}

}  // namespace mchuff
