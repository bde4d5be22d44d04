#pragma once

// Regenerates the reference tables: optimal versus single-channel lengths
// for two four-symbol sources, and one pruning trace per metric for the
// five-symbol (2,3)-ary instance.

#include <mchuff/core.hpp>
#include <mchuff/heuristics.hpp>
#include <mchuff/huffman.hpp>
#include <mchuff/search.hpp>

#include <string>
#include <utility>
#include <vector>

namespace mchuff::tables {

inline Distribution distribution_of(const std::vector<std::string>& masses) { return Distribution::parse(masses); }

inline const std::vector<std::string>& comparison_source_a() {
  static const std::vector<std::string> v{"1/6", "1/6", "1/3", "1/3"};
  return v;
}
inline const std::vector<std::string>& comparison_source_b() {
  static const std::vector<std::string> v{"1/6", "1/6", "1/6", "1/2"};
  return v;
}
inline const std::vector<std::string>& pruning_source() {
  static const std::vector<std::string> v{"0.13", "0.199", "0.212", "0.217", "0.242"};
  return v;
}
inline ChannelProfile binary_ternary() { return ChannelProfile({2, 3}); }

struct TraceSpec {
  const char* title;
  PruneMetric metric;
};

inline const std::vector<TraceSpec>& trace_specs() {
  static const std::vector<TraceSpec> v{
      {"trace: prune by redundancy", PruneMetric::redundancy},
      {"trace: prune by expected codeword description length", PruneMetric::expected_length},
      {"trace: prune by entropy", PruneMetric::entropy},
      {"trace: prune by expected resultant codeword length + entropy", PruneMetric::expected_plus_entropy},
      {"trace: suboptimal code construction (Huffman completion)", PruneMetric::huffman_completion},
  };
  return v;
}

inline std::string label_of(const std::vector<std::string>& masses) {
  std::string out = "{";
  for (std::size_t i = 0; i < masses.size(); ++i) out += (i ? "," : "") + masses[i];
  return out + "}";
}

// The comparison keeps 11 fractional digits, the traces 10.
inline std::string comparison_table_tsv() {
  const auto ch = binary_ternary();
  std::string out = "# comparison: expected codeword lengths of optimal codes in nats\n";
  out += "source\t(2,3)-ary\t2-ary\t3-ary\n";
  for (const auto* masses : {&comparison_source_a(), &comparison_source_b()}) {
    const auto dist = distribution_of(*masses);
    out += label_of(*masses);
    out += "\t" + format_fixed(optimal_search(dist, ch).expected_length, 11);
    out += "\t" + format_fixed(build_single_huffman(dist, 2).expected_length, 11);
    out += "\t" + format_fixed(build_single_huffman(dist, 3).expected_length, 11);
    out += "\n";
  }
  return out;
}

inline std::string trace_table_tsv(const TraceSpec& spec) {
  const auto dist = distribution_of(pruning_source());
  const auto run = pruned_search(dist, binary_ternary(), spec.metric, true);
  return std::string("# ") + spec.title + "\n" + run.trace.to_tsv(10);
}

inline std::string all_tables_tsv() {
  std::string out = comparison_table_tsv();
  for (const auto& spec : trace_specs()) out += "\n" + trace_table_tsv(spec);
  return out;
}

}  // namespace mchuff::tables
