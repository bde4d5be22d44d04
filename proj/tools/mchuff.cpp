// mchuff: build, analyze and exercise multi-channel prefix codes.

#include <mchuff/io.hpp>
#include <mchuff/mchuff.hpp>
#include <mchuff/tables.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using mchuff::io::json;

enum ExitCode : int { kOk = 0, kUsage = 2, kCorrupt = 3, kTruncated = 4 };

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mchuff::InvalidArgument(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw mchuff::InvalidArgument(path + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mchuff::InvalidArgument(path.string() + ": cannot write file");
  out << text;
}

std::string kraft_text(const mchuff::Codebook& cb) {
  auto tuples = cb.length_tuples();
  return mchuff::to_string(mchuff::kraft_sum(tuples, cb.channels));
}

int cmd_analyze(const std::string& path) {
  const auto file = mchuff::io::distribution_from_json(read_json(path));
  const auto& ch = file.channels;
  const auto h = mchuff::entropy(file.dist);
  std::cout << "symbols\t" << file.dist.size() << "\n";
  if (file.dist.rescaled()) std::cout << "warning\tmasses rescaled to sum to 1\n";
  std::cout << "entropy\t" << mchuff::format_fixed(h) << "\n";
  std::cout << "entropy_bits\t" << mchuff::format_fixed(h / std::log(2.0)) << "\n";
  std::cout << "lower_bound\t" << mchuff::format_fixed(h) << "\n";
  std::cout << "upper_bound\t" << mchuff::format_fixed(h + std::log(static_cast<double>(ch.smallest())))
            << "\t(exclusive)\n";
  std::cout << "dummy_bound\t" << mchuff::dummy_bound(ch) << "\n";
  for (std::size_t i = 0; i < ch.count(); ++i) {
    const auto code = mchuff::build_single_huffman(file.dist, ch.size(i));
    const auto cb = mchuff::trivial_extension(code, i, ch);
    std::cout << "huffman[" << i << "]\tq=" << ch.size(i) << "\tlength=" << mchuff::format_fixed(code.expected_length)
              << "\tdummies=" << code.dummies << "\tkraft=" << kraft_text(cb) << "\n";
  }
  return kOk;
}

int cmd_build(const std::string& path, const std::string& method, const std::string& out_dir) {
  const auto file = mchuff::io::distribution_from_json(read_json(path));
  const auto& dist = file.dist;
  const auto& ch = file.channels;

  mchuff::SearchResult result;
  std::string method_label = method;
  if (method == "optimal") {
    result = mchuff::optimal_search(dist, ch);
  } else if (method == "suboptimal") {
    result = mchuff::suboptimal_build(dist, ch);
  } else if (method.rfind("prune=", 0) == 0) {
    auto metric = mchuff::parse_metric(method.substr(6));
    if (!metric) throw CLI::ValidationError("--method", "unknown metric '" + method.substr(6) + "'");
    result = mchuff::pruned_search(dist, ch, *metric, false).result;
  } else if (method.rfind("single=", 0) == 0) {
    std::size_t channel = 0;
    try {
      channel = std::stoul(method.substr(7));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--method", "single=<channel> needs a channel index");
    }
    if (channel >= ch.count()) throw CLI::ValidationError("--method", "channel " + method.substr(7) + " does not exist");
    result.tree = mchuff::single_channel_tree(dist, ch, channel);
    result.expected_length = mchuff::expected_length(result.tree, dist);
  } else {
    throw CLI::ValidationError("--method", "unknown method '" + method + "'");
  }

  const auto cb = mchuff::codebook_from_tree(result.tree, ch);
  const auto report = mchuff::local_redundancy(result.tree, dist);
  const auto dummies = mchuff::dummy_length_tuples(result.tree, ch).size();

  json stats;
  stats["method"] = method_label;
  stats["channels"] = ch.sizes();
  stats["symbols"] = dist.size();
  stats["rescaled"] = dist.rescaled();
  stats["expected_length"] = mchuff::format_fixed(result.expected_length);
  stats["entropy"] = mchuff::format_fixed(report.entropy);
  stats["redundancy"] = mchuff::format_fixed(report.redundancy);
  stats["merge_sequence"] = result.sequence.empty() ? "" : mchuff::format_sequence(result.merge_counts());
  json steps = json::array();
  for (const auto& s : result.sequence)
    steps.push_back({{"k", s.k}, {"class", s.channel}, {"dummies", s.dummies},
                     {"merged_mass", mchuff::to_string(s.merged_mass)}});
  stats["steps"] = std::move(steps);
  stats["dummy_leaves"] = dummies;
  stats["kraft_sum"] = kraft_text(cb);
  if (!result.sequence.empty()) stats["subproblems"] = result.subproblem_count;

  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "tree.json", mchuff::io::tree_to_json(result.tree, ch).dump(2) + "\n");
  write_file(dir / "codebook.json", mchuff::io::codebook_to_json(cb).dump(2) + "\n");
  write_file(dir / "stats.json", stats.dump(2) + "\n");

  std::cout << "method\t" << method_label << "\n";
  std::cout << "merge_sequence\t" << stats["merge_sequence"].get<std::string>() << "\n";
  std::cout << "expected_length\t" << mchuff::format_fixed(result.expected_length) << "\n";
  std::cout << "redundancy\t" << mchuff::format_fixed(report.redundancy) << "\n";
  return kOk;
}

int cmd_enumerate(std::size_t m, const std::vector<int>& channels) {
  const auto seqs = mchuff::enumerate_merge_sequences(m, mchuff::ChannelProfile(channels));
  for (const auto& s : seqs) std::cout << mchuff::format_sequence(s) << "\n";
  std::cout << "count\t" << seqs.size() << "\n";
  return kOk;
}

std::vector<std::size_t> read_symbols(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mchuff::InvalidArgument(path + ": cannot open file");
  std::vector<std::size_t> out;
  std::string token;
  while (in >> token) {
    if (token.find_first_not_of("0123456789") != std::string::npos)
      throw mchuff::InvalidArgument(path + ": '" + token + "' is not a symbol index");
    out.push_back(std::stoul(token));
  }
  return out;
}

int cmd_encode(const std::string& codebook_path, const std::string& symbols_path) {
  const auto cb = mchuff::io::codebook_from_json(read_json(codebook_path));
  const auto symbols = read_symbols(symbols_path);
  const auto streams = mchuff::encode(cb, symbols);
  std::cout << mchuff::io::streams_to_json(streams, cb.channels).dump() << "\n";
  return kOk;
}

// A decode input is either a tree file or a codebook; a two-channel
// codebook is turned into a tree, anything else is refused.
mchuff::io::TreeFile decoding_tree_from(const json& doc) {
  if (doc.contains("tree")) return mchuff::io::tree_from_json(doc);
  const auto cb = mchuff::io::codebook_from_json(doc);
  if (mchuff::necessary_tree_check(cb).empty())
    throw mchuff::InvalidArgument(
        "codebook has no decoding tree: every channel is empty in some codeword, so no channel can be read first");
  if (cb.channels.count() != 2)
    throw mchuff::InvalidArgument("decoding from a codebook is only supported for 2 channels; pass a tree file");
  return {mchuff::tree_from_two_channel_prefix(cb), cb.channels};
}

int cmd_decode(const std::string& tree_path, const std::string& streams_path, std::optional<std::size_t> count) {
  const auto file = decoding_tree_from(read_json(tree_path));
  const auto streams = mchuff::io::streams_from_json(read_json(streams_path), file.channels);
  const auto symbols = mchuff::decode(file.tree, streams, count);
  for (std::size_t i = 0; i < symbols.size(); ++i) std::cout << (i ? " " : "") << symbols[i];
  std::cout << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-channel Huffman codes: construction, analysis and coding"};
  app.require_subcommand(1);

  std::string dist_path;
  auto* analyze = app.add_subcommand("analyze", "Entropy, single-channel Huffman lengths and bounds");
  analyze->add_option("dist", dist_path, "Distribution JSON file")->required();

  std::string method = "optimal";
  std::string out_dir = ".";
  auto* build = app.add_subcommand("build", "Construct a code and write tree.json, codebook.json, stats.json");
  build->add_option("dist", dist_path, "Distribution JSON file")->required();
  build->add_option("--method", method, "optimal | suboptimal | prune=<metric> | single=<channel>");
  build->add_option("--out-dir", out_dir, "Directory for the output files");

  std::string tables_out;
  auto* tables = app.add_subcommand("tables", "Regenerate the reference tables as TSV");
  tables->add_option("--out", tables_out, "Write to this file instead of stdout");

  std::size_t m = 0;
  std::vector<int> channels;
  auto* enumerate = app.add_subcommand("enumerate", "List every merge sequence for m masses");
  enumerate->add_option("--m", m, "Number of masses")->required();
  enumerate->add_option("--channels", channels, "Alphabet sizes, comma separated")->required()->delimiter(',');

  std::string codebook_path;
  std::string symbols_path;
  auto* encode = app.add_subcommand("encode", "Encode whitespace-separated symbol indices");
  encode->add_option("codebook", codebook_path, "Codebook JSON file")->required();
  encode->add_option("symbols", symbols_path, "Symbol file")->required();

  std::string tree_path;
  std::string streams_path;
  std::optional<std::size_t> count;
  auto* decode = app.add_subcommand("decode", "Decode channel streams with a tree (or 2-channel codebook)");
  decode->add_option("tree", tree_path, "Tree or codebook JSON file")->required();
  decode->add_option("streams", streams_path, "Streams JSON file")->required();
  decode->add_option("--count", count, "Number of symbols to decode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(dist_path);
    if (*build) return cmd_build(dist_path, method, out_dir);
    if (*tables) {
      const auto text = mchuff::tables::all_tables_tsv();
      if (tables_out.empty())
        std::cout << text;
      else
        write_file(tables_out, text);
      return kOk;
    }
    if (*enumerate) return cmd_enumerate(m, channels);
    if (*encode) return cmd_encode(codebook_path, symbols_path);
    if (*decode) return cmd_decode(tree_path, streams_path, count);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const mchuff::TruncationError& e) {
    std::cerr << "error: truncated input: " << e.what() << "\n";
    return kTruncated;
  } catch (const mchuff::DecodeError& e) {
    std::cerr << "error: corrupt input: " << e.what() << "\n";
    return kCorrupt;
  } catch (const mchuff::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
