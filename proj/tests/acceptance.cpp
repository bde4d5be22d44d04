// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "support.hpp"

#include <mchuff/tables.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mchuff;
using mchuff::testing::dist_of;
using mchuff::testing::make_rng;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol))
      fail(what + ": got " + format_fixed(got, 12) + ", want " + format_fixed(want, 12));
  }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 means no limit
  std::function<Outcome()> run;
};

// ---- 1 ----------------------------------------------------------------

Outcome table_one() {
  Outcome o;
  const ChannelProfile ch({2, 3});
  const std::vector<std::pair<Distribution, std::vector<double>>> rows{
      {testing::thirds_source(), {1.32966134885, 1.38629436112, 1.46481638489}},
      {testing::halves_source(), {1.24245332489, 1.27076983103, 1.46481638489}},
  };
  for (const auto& [dist, want] : rows) {
    o.expect_near(optimal_search(dist, ch).expected_length, want[0], 1e-9, "(2,3)-ary");
    o.expect_near(build_single_huffman(dist, 2).expected_length, want[1], 1e-9, "2-ary");
    o.expect_near(build_single_huffman(dist, 3).expected_length, want[2], 1e-9, "3-ary");
  }
  return o;
}

// ---- 2 ----------------------------------------------------------------

Outcome reference_instance() {
  Outcome o;
  const auto r = optimal_search(testing::pruning_source(), ChannelProfile({2, 3}));
  if (r.merge_counts() != std::vector<std::size_t>{3, 2, 2})
    o.fail("merge sequence " + format_sequence(r.merge_counts()) + ", want (3,2,2)");
  o.expect_near(r.expected_length, 1.6056509846, 1e-9, "L");
  return o;
}

// ---- 3 ----------------------------------------------------------------

struct GoldenCell {
  std::optional<double> value;
  bool pruned = false;
};

struct GoldenRow {
  std::string sequence;
  std::vector<GoldenCell> cells;
};

std::vector<std::vector<GoldenRow>> read_golden_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<GoldenRow>> blocks;
  std::string line;
  bool in_trace = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      in_trace = line.rfind("# trace:", 0) == 0;
      if (in_trace) blocks.emplace_back();
      continue;
    }
    if (!in_trace || line.empty() || line.rfind("merge sequence", 0) == 0) continue;
    std::stringstream ss(line);
    std::string field;
    GoldenRow row;
    std::getline(ss, row.sequence, '\t');
    while (std::getline(ss, field, '\t')) {
      GoldenCell cell;
      if (!field.empty() && field.back() == '*') {
        cell.pruned = true;
        field.pop_back();
      }
      if (!field.empty()) cell.value = std::stod(field);
      row.cells.push_back(cell);
    }
    blocks.back().push_back(std::move(row));
  }
  return blocks;
}

Outcome trace_tables() {
  Outcome o;
  const auto golden = read_golden_traces(MCHUFF_GOLDEN_DIR "/tables.tsv");
  const auto& specs = tables::trace_specs();
  if (golden.size() != specs.size()) {
    o.fail("golden file has " + std::to_string(golden.size()) + " trace tables");
    return o;
  }
  const auto dist = testing::pruning_source();
  const ChannelProfile ch({2, 3});
  const std::vector<std::size_t> optimum{3, 2, 2};
  for (std::size_t t = 0; t < specs.size(); ++t) {
    const auto run = pruned_search(dist, ch, specs[t].metric, true);
    const std::string tag(metric_name(specs[t].metric));
    const auto& rows = run.trace.rows;
    if (rows.size() != golden[t].size()) {
      o.fail(tag + ": row count " + std::to_string(rows.size()));
      continue;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& g = golden[t][r];
      const auto seq = format_sequence(rows[r].sequence);
      if (seq != g.sequence) o.fail(tag + ": row " + seq + " where golden has " + g.sequence);
      // Trailing empty cells may be absent from the golden line.
      for (std::size_t c = 0; c < rows[r].cells.size(); ++c) {
        const auto& cell = rows[r].cells[c];
        const GoldenCell want = c < g.cells.size() ? g.cells[c] : GoldenCell{};
        const auto where = tag + " " + seq + " col " + std::to_string(run.trace.counts[c]);
        if (cell.pruned != want.pruned) o.fail(where + ": pruned marker differs");
        if (cell.value.has_value() != want.value.has_value()) {
          o.fail(where + ": populated cell differs");
        } else if (cell.value) {
          o.expect_near(*cell.value, *want.value, 1e-9, where);
        }
      }
    }
    const bool found_optimum = run.result.merge_counts() == optimum;
    const bool should_find = specs[t].metric == PruneMetric::huffman_completion;
    if (found_optimum != should_find)
      o.fail(tag + " picked " + format_sequence(run.result.merge_counts()));
  }
  return o;
}

// ---- 4 ----------------------------------------------------------------

Outcome oracle_equivalence() {
  Outcome o;
  auto rng = make_rng(4);
  const std::vector<ChannelProfile> profiles{ChannelProfile({2, 3}), ChannelProfile({2, 4}), ChannelProfile({3, 4}),
                                             ChannelProfile({2, 2, 3})};
  std::uniform_int_distribution<std::size_t> pick_m(2, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& ch = profiles[static_cast<std::size_t>(trial) % profiles.size()];
    const auto dist = random_distribution(rng, pick_m(rng));
    const auto fast = optimal_search(dist, ch).expected_length;
    const auto slow = brute_force_oracle(dist, ch);
    o.expect_near(fast, slow, 1e-9, "trial " + std::to_string(trial));
  }
  return o;
}

// ---- 5 and 6 ----------------------------------------------------------

struct Instance {
  Distribution dist;
  ChannelProfile ch;
};

const std::vector<Instance>& bound_instances() {
  static const std::vector<Instance> v = [] {
    std::vector<Instance> out;
    auto rng = make_rng(5);
    std::uniform_int_distribution<std::size_t> pick_m(2, 12);
    for (int i = 0; i < 1000; ++i) {
      auto ch = testing::random_profile(rng);
      out.push_back({random_distribution(rng, pick_m(rng)), std::move(ch)});
    }
    return out;
  }();
  return v;
}

Nats best_single_huffman(const Instance& in) {
  Nats best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < in.ch.count(); ++i)
    best = std::min(best, build_single_huffman(in.dist, in.ch.size(i)).expected_length);
  return best;
}

Outcome bound_suite() {
  Outcome o;
  std::size_t index = 0;
  for (const auto& in : bound_instances()) {
    const auto tag = "instance " + std::to_string(index++);
    const auto r = optimal_search(in.dist, in.ch);
    const auto h = entropy(in.dist);
    const auto l = r.expected_length;
    if (l < h - 1e-9) o.fail(tag + ": L below entropy");
    if (!(l < h + std::log(static_cast<double>(in.ch.smallest())))) o.fail(tag + ": L not below H + ln q1");
    if (l > best_single_huffman(in) + 1e-9) o.fail(tag + ": L exceeds a single-channel Huffman length");
    const auto report = local_redundancy(r.tree, in.dist);
    if (!(std::fabs(l - h - report.local_sum) < 1e-9)) o.fail(tag + ": local redundancies do not sum to L - H");
    const auto tuples = codebook_from_tree(r.tree, in.ch).length_tuples();
    const auto kraft = kraft_sum(tuples, in.ch);
    const bool no_dummies = dummy_length_tuples(r.tree, in.ch).empty();
    if (kraft > 1) o.fail(tag + ": Kraft sum above one");
    if ((kraft == 1) != no_dummies) o.fail(tag + ": Kraft equality does not match dummy-free tree");
  }
  return o;
}

Outcome suboptimality_guarantee() {
  Outcome o;
  std::size_t violations = 0;
  std::size_t index = 0;
  for (const auto& in : bound_instances()) {
    const auto l = suboptimal_build(in.dist, in.ch).expected_length;
    const auto best = best_single_huffman(in);
    if (nats_less(best, l)) {
      if (!violations)
        o.fail("instance " + std::to_string(index) + ": " + format_fixed(l, 12) + " > " + format_fixed(best, 12));
      ++violations;
    }
    ++index;
  }
  if (violations) o.detail += " (" + std::to_string(violations) + " violations)";
  return o;
}

// ---- 7 ----------------------------------------------------------------

Outcome tightness_trend() {
  Outcome o;
  const ChannelProfile ch({2, 3});
  double previous = std::numeric_limits<double>::infinity();
  for (long k : {10L, 100L, 1000L}) {
    const auto dist = tight_example(2, k);
    const auto gap = entropy(dist) + std::log(2.0) - optimal_search(dist, ch).expected_length;
    if (!(gap > 0)) o.fail("k=" + std::to_string(k) + ": gap not positive");
    if (!(gap < previous)) o.fail("k=" + std::to_string(k) + ": gap did not decrease");
    if (k == 1000 && !(gap < 0.01)) o.fail("k=1000: gap " + format_fixed(gap, 12) + " not below 0.01");
    previous = gap;
  }
  return o;
}

// ---- 8 ----------------------------------------------------------------

Outcome merge_census() {
  Outcome o;
  const ChannelProfile ch({2, 3});
  std::vector<std::size_t> c(21, 0);
  for (std::size_t m = 2; m <= 20; ++m) c[m] = enumerate_merge_sequences(m, ch).size();
  if (c[2] != 1 || c[3] != 2) o.fail("c(2), c(3) = " + std::to_string(c[2]) + ", " + std::to_string(c[3]));
  for (std::size_t m = 4; m <= 20; ++m)
    if (c[m] != c[m - 1] + c[m - 2]) o.fail("c(" + std::to_string(m) + ") = " + std::to_string(c[m]));
  const auto five = enumerate_merge_sequences(5, ch);
  const std::set<std::vector<std::size_t>> got(five.begin(), five.end());
  const std::set<std::vector<std::size_t>> want{{2, 2, 2, 2}, {2, 2, 3}, {2, 3, 2}, {3, 2, 2}, {3, 3}};
  if (got != want || five.size() != want.size()) o.fail("m=5 set differs");
  return o;
}

// ---- 9 ----------------------------------------------------------------

Outcome structural_fixtures() {
  Outcome o;
  const auto ex4 = testing::no_tree_code();
  if (prefix_free(ex4)) o.fail("no-tree code reported as not prefix-free");
  if (!necessary_tree_check(ex4).empty()) o.fail("no-tree code has an always-non-empty channel");

  auto rng = make_rng(9);
  const std::vector<ChannelProfile> profiles{ChannelProfile({2, 3}), ChannelProfile({2, 2}), ChannelProfile({3, 5}),
                                             ChannelProfile({4, 2})};
  std::uniform_int_distribution<std::size_t> pick_m(2, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& ch = profiles[static_cast<std::size_t>(trial) % profiles.size()];
    const auto m = pick_m(rng);
    const auto dist = random_distribution(rng, m);
    const auto tree = testing::random_tree(rng, m, ch);
    const auto cb = codebook_from_tree(tree, ch);
    const auto rebuilt = tree_from_two_channel_prefix(cb);
    const auto tag = "trial " + std::to_string(trial);
    if (!validate_tree(rebuilt, ch, m).empty()) o.fail(tag + ": rebuilt tree is invalid");
    const auto back = codebook_from_tree(rebuilt, ch);
    if (back.length_tuples() != cb.length_tuples()) o.fail(tag + ": length tuples changed");
    if (expected_length(rebuilt, dist) != expected_length(tree, dist)) o.fail(tag + ": expected length changed");
  }
  return o;
}

// ---- 10 ---------------------------------------------------------------

template <class E, class F>
bool throws(F&& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

Outcome codec_round_trip() {
  Outcome o;
  auto rng = make_rng(10);
  std::uniform_int_distribution<std::size_t> pick_m(2, 12);
  std::uniform_int_distribution<std::size_t> pick_len(0, 60);
  std::size_t sequences = 0;
  for (int code = 0; code < 100; ++code) {
    const auto ch = testing::random_profile(rng);
    const auto m = pick_m(rng);
    const auto dist = random_distribution(rng, m);
    const auto r = optimal_search(dist, ch);
    const auto cb = codebook_from_tree(r.tree, ch);
    std::uniform_int_distribution<std::size_t> pick_symbol(0, m - 1);
    for (int s = 0; s < 100; ++s, ++sequences) {
      std::vector<std::size_t> symbols(pick_len(rng));
      for (auto& x : symbols) x = pick_symbol(rng);
      const auto streams = encode(cb, symbols);
      if (decode(r.tree, streams) != symbols) {
        o.fail("code " + std::to_string(code) + " sequence " + std::to_string(s) + ": round trip differs");
        continue;
      }
      if (decode(r.tree, streams, symbols.size()) != symbols) o.fail("counted decode differs");
    }
  }
  if (sequences != 10000) o.fail("ran " + std::to_string(sequences) + " sequences");

  // Error paths on the ternary-root code.
  const auto tree = testing::ternary_root_tree();
  const auto ch = testing::binary_ternary();
  const auto cb = codebook_from_tree(tree, ch);
  const std::vector<std::size_t> symbols{0, 2};
  auto streams = encode(cb, symbols);
  auto truncated = streams;
  truncated.streams[0].clear();
  if (!throws<TruncationError>([&] { decode(tree, truncated); })) o.fail("truncation not reported");
  auto bad_digit = streams;
  bad_digit.streams[1][0] = 7;
  if (!throws<CorruptionError>([&] { decode(tree, bad_digit); })) o.fail("out-of-alphabet digit not reported");
  if (!throws<TrailingDataError>([&] { decode(tree, streams, 1); })) o.fail("trailing data not reported");

  // A dummy leaf reached by a digit is corruption.
  DecodingTree padded;
  const auto a = padded.add_leaf(0);
  const auto b = padded.add_leaf(1);
  padded.set_root(padded.add_internal(1, {a, b, padded.add_dummy()}));
  if (!throws<CorruptionError>([&] { decode(padded, ChannelStreams{{{}, {2}}}); }))
    o.fail("dummy leaf not reported");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "comparison table values", 1.0, table_one},
      {2, "reference instance optimum", 0, reference_instance},
      {3, "pruning trace tables", 1.0, trace_tables},
      {4, "oracle equivalence", 300.0, oracle_equivalence},
      {5, "bound suite", 0, bound_suite},
      {6, "suboptimality guarantee", 0, suboptimality_guarantee},
      {7, "tightness trend", 0, tightness_trend},
      {8, "merge-sequence census", 0, merge_census},
      {9, "structural fixtures", 0, structural_fixtures},
      {10, "codec round trip", 0, codec_round_trip},
  };
  std::cout << "seed " << seed_from_env() << "\n";
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s)
      o.fail("took " + format_fixed(secs, 3) + " s, limit " + format_fixed(c.time_limit_s, 0) + " s");
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << "  ["
              << format_fixed(secs, 3) << " s]";
    if (!o.ok) std::cout << "  " << o.detail;
    std::cout << "\n";
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << "(" << criteria.size() - failures << "/" << criteria.size()
            << ")\n";
  return failures ? 1 : 0;
}
