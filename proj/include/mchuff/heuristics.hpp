#pragma once

// Pruned merge-sequence search.
//
// States are compared only when they have reduced the multiset to the same
// number of masses; at each such count every state that is not minimal under
// the chosen metric is dropped. Ties within kTieEpsilon are all kept.

#include <mchuff/core.hpp>
#include <mchuff/huffman.hpp>
#include <mchuff/search.hpp>
#include <mchuff/tree.hpp>

#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mchuff {

enum class PruneMetric { redundancy, expected_length, entropy, expected_plus_entropy, huffman_completion };

inline constexpr PruneMetric kAllMetrics[] = {PruneMetric::redundancy, PruneMetric::expected_length,
                                              PruneMetric::entropy, PruneMetric::expected_plus_entropy,
                                              PruneMetric::huffman_completion};

inline std::string_view metric_name(PruneMetric metric) {
  switch (metric) {
    case PruneMetric::redundancy: return "redundancy";
    case PruneMetric::expected_length: return "expected_length";
    case PruneMetric::entropy: return "entropy";
    case PruneMetric::expected_plus_entropy: return "expected_plus_entropy";
    case PruneMetric::huffman_completion: return "huffman_completion";
  }
  return "?";
}

inline std::optional<PruneMetric> parse_metric(std::string_view name) {
  for (auto metric : kAllMetrics)
    if (metric_name(metric) == name) return metric;
  return std::nullopt;
}

// A merge state plus the running length and redundancy of the subtrees it
// has built so far.
class PartialMerge {
 public:
  explicit PartialMerge(const Distribution& dist) : state_(dist) {}

  void apply(std::size_t k, std::size_t channel, std::size_t dummies) {
    const auto parts = state_.merge(k, channel, dummies);
    Rational reach = 0;
    for (const auto& p : parts) reach += p;
    const double arity_log = std::log(static_cast<double>(parts.size()));
    Nats branching = 0;
    for (const auto& p : parts)
      if (sgn(p) > 0) branching += plogp_neg(p / reach);
    const double s = to_double(reach);
    length_ += s * arity_log;
    redundancy_ += s * (arity_log - branching);
    ks_.push_back(k);
  }

  const MergeState& state() const noexcept { return state_; }
  std::size_t remaining() const noexcept { return state_.size(); }
  const std::vector<std::size_t>& merge_counts() const noexcept { return ks_; }
  Nats accrued_length() const noexcept { return length_; }
  Nats accrued_redundancy() const noexcept { return redundancy_; }

 private:
  MergeState state_;
  std::vector<std::size_t> ks_;
  Nats length_ = 0;
  Nats redundancy_ = 0;
};

inline Nats metric_value(const PartialMerge& partial, PruneMetric metric, const ChannelProfile& ch) {
  switch (metric) {
    case PruneMetric::redundancy:
      return partial.accrued_redundancy();
    case PruneMetric::expected_length:
      return partial.accrued_length();
    case PruneMetric::entropy:
      return entropy_of(partial.state().masses());
    case PruneMetric::expected_plus_entropy:
      return partial.accrued_length() + entropy_of(partial.state().masses());
    case PruneMetric::huffman_completion: {
      const auto masses = partial.state().masses();
      Nats best = std::numeric_limits<double>::infinity();
      for (const auto& [q, c] : later_merge_options(ch)) best = std::min(best, detail::huffman_length_of(masses, q));
      return partial.accrued_length() + best;
    }
  }
  return 0;
}

struct TraceCell {
  std::optional<Nats> value;  // empty when the sequence skips this count
  bool pruned = false;
  bool column_min = false;
};

struct TraceRow {
  std::vector<std::size_t> sequence;
  std::vector<TraceCell> cells;  // aligned with TraceTable::counts
  bool survivor = false;
};

struct TraceTable {
  PruneMetric metric = PruneMetric::redundancy;
  std::vector<std::size_t> counts;  // remaining masses: m-1 down to 1
  std::vector<TraceRow> rows;

  const TraceRow* find(const std::vector<std::size_t>& sequence) const {
    for (const auto& r : rows)
      if (r.sequence == sequence) return &r;
    return nullptr;
  }

  std::string to_tsv(int digits = 10) const;
};

// Fixed-point with the given number of fractional digits. printf rounds the
// exact binary value to nearest, ties to even.
inline std::string format_fixed(double value, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string out(buf);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

inline std::string TraceTable::to_tsv(int digits) const {
  std::string out = "merge sequence";
  for (auto c : counts) out += "\t" + std::to_string(c);
  out += "\n";
  for (const auto& row : rows) {
    out += format_sequence(row.sequence);
    for (const auto& cell : row.cells) {
      out += "\t";
      if (cell.value) out += format_fixed(*cell.value, digits);
      if (cell.pruned) out += "*";
    }
    out += "\n";
  }
  return out;
}

struct PrunedSearch {
  SearchResult result;
  TraceTable trace;
  std::vector<std::vector<std::size_t>> survivors;  // every state kept at the final count
};

namespace detail {

// Counts from which later (dummy-free) merges can still reach one mass.
inline std::vector<bool> completable_counts(std::size_t m, const ChannelProfile& ch) {
  std::vector<bool> ok(m + 1, false);
  if (m >= 1) ok[1] = true;
  const auto options = later_merge_options(ch);
  for (std::size_t c = 2; c <= m; ++c)
    for (const auto& [q, channel] : options)
      if (static_cast<std::size_t>(q) <= c && ok[c - static_cast<std::size_t>(q) + 1]) ok[c] = true;
  return ok;
}

}  // namespace detail

// Pruned search under one metric. When with_trace is set, every complete
// merge sequence is also evaluated to fill the trace table, which is
// exponential in m; the search itself only expands surviving states.
inline PrunedSearch pruned_search(const Distribution& dist, const ChannelProfile& ch, PruneMetric metric,
                                  bool with_trace = true) {
  PrunedSearch out;
  out.trace.metric = metric;
  const std::size_t m = dist.size();
  if (m == 1) {
    out.result.tree = DecodingTree::single_leaf(0);
    out.survivors.push_back({});
    return out;
  }

  const auto completable = detail::completable_counts(m, ch);
  const auto later = later_merge_options(ch);

  struct Candidate {
    PartialMerge partial;
    Nats value = 0;
  };
  std::map<std::size_t, std::vector<Candidate>, std::greater<>> buckets;
  buckets[m].push_back({PartialMerge(dist), 0});
  std::set<std::vector<std::size_t>> kept;
  std::size_t evaluated = 0;
  std::vector<Candidate> finalists;

  while (!buckets.empty()) {
    auto node = buckets.extract(buckets.begin());
    const std::size_t count = node.key();
    auto& candidates = node.mapped();
    if (count < m) {
      Nats best = std::numeric_limits<double>::infinity();
      for (auto& c : candidates) {
        c.value = metric_value(c.partial, metric, ch);
        best = std::min(best, c.value);
        ++evaluated;
      }
      std::vector<Candidate> survivors;
      for (auto& c : candidates)
        if (!nats_less(best, c.value)) survivors.push_back(std::move(c));
      candidates = std::move(survivors);
    }
    for (const auto& c : candidates) kept.insert(c.partial.merge_counts());
    if (count == 1) {
      finalists = std::move(candidates);
      break;
    }
    for (const auto& c : candidates) {
      const bool first = c.partial.merge_counts().empty();
      if (first) {
        const auto top = std::min<std::size_t>(static_cast<std::size_t>(ch.largest()), count);
        for (std::size_t k = 2; k <= top; ++k) {
          if (!completable[count - k + 1]) continue;
          const auto channel = ch.smallest_fitting(static_cast<int>(k));
          auto next = c.partial;
          next.apply(k, channel, static_cast<std::size_t>(ch.size(channel)) - k);
          buckets[count - k + 1].push_back({std::move(next), 0});
        }
      } else {
        for (const auto& [q, channel] : later) {
          const auto k = static_cast<std::size_t>(q);
          if (k > count) break;
          if (!completable[count - k + 1]) continue;
          auto next = c.partial;
          next.apply(k, channel, 0);
          buckets[count - k + 1].push_back({std::move(next), 0});
        }
      }
    }
  }
  if (finalists.empty()) throw std::logic_error("pruned_search: no state reached a single mass");

  // Realized length first, then the lexicographically smaller sequence.
  std::size_t pick = 0;
  for (std::size_t i = 1; i < finalists.size(); ++i) {
    const auto& a = finalists[i].partial;
    const auto& b = finalists[pick].partial;
    if (nats_less(a.accrued_length(), b.accrued_length()) ||
        (nats_tie(a.accrued_length(), b.accrued_length()) && a.merge_counts() < b.merge_counts()))
      pick = i;
  }
  for (const auto& f : finalists) out.survivors.push_back(f.partial.merge_counts());
  std::sort(out.survivors.begin(), out.survivors.end());

  const auto& winner = finalists[pick].partial;
  out.result.tree = winner.state().tree();
  out.result.sequence = winner.state().steps();
  out.result.expected_length = expected_length(out.result.tree, dist);
  out.result.subproblem_count = evaluated;

  if (!with_trace) return out;

  auto& trace = out.trace;
  for (std::size_t c = m - 1; c >= 1; --c) trace.counts.push_back(c);
  auto column_of = [m](std::size_t count) { return m - 1 - count; };
  for (const auto& seq : enumerate_merge_sequences(m, ch)) {
    TraceRow row;
    row.sequence = seq;
    row.cells.resize(trace.counts.size());
    row.survivor = seq == winner.merge_counts();
    PartialMerge partial(dist);
    std::optional<std::size_t> pruned_from;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i == 0) {
        const auto channel = ch.smallest_fitting(static_cast<int>(seq[0]));
        partial.apply(seq[0], channel, static_cast<std::size_t>(ch.size(channel)) - seq[0]);
      } else {
        auto it = std::find_if(later.begin(), later.end(),
                               [&](const auto& o) { return static_cast<std::size_t>(o.first) == seq[i]; });
        partial.apply(seq[i], it->second, 0);
      }
      const auto col = column_of(partial.remaining());
      row.cells[col].value = metric_value(partial, metric, ch);
      if (!pruned_from && !kept.contains(partial.merge_counts())) pruned_from = col;
    }
    if (pruned_from)
      for (std::size_t col = *pruned_from; col < row.cells.size(); ++col) row.cells[col].pruned = true;
    trace.rows.push_back(std::move(row));
  }
  for (std::size_t col = 0; col < trace.counts.size(); ++col) {
    Nats best = std::numeric_limits<double>::infinity();
    for (const auto& r : trace.rows)
      if (r.cells[col].value) best = std::min(best, *r.cells[col].value);
    for (auto& r : trace.rows)
      if (r.cells[col].value && !nats_less(best, *r.cells[col].value)) r.cells[col].column_min = true;
  }
  return out;
}

// Pruning by Huffman completion. Never longer than the best single-channel
// Huffman code, because each of those codes is one admissible sequence.
inline SearchResult suboptimal_build(const Distribution& dist, const ChannelProfile& ch) {
  return pruned_search(dist, ch, PruneMetric::huffman_completion, false).result;
}

}  // namespace mchuff
