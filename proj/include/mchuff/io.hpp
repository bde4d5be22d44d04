#pragma once

// JSON file formats used by the command-line tool.
//
//   distribution: {"masses": ["0.13", "1/6", ...], "channels": [2, 3]}
//   tree:         {"channels": [2, 3], "tree": NODE}
//                 NODE = {"class": i, "children": [NODE...]} | {"symbol": j} | {"dummy": true}
//   codebook:     {"channels": [2, 3], "words": [["0", "1"], ...]}
//   streams:      {"streams": ["0110", "2012"]}

#include <mchuff/codec.hpp>
#include <mchuff/core.hpp>
#include <mchuff/tree.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace mchuff::io {

using json = nlohmann::ordered_json;

struct DistributionFile {
  Distribution dist;
  ChannelProfile channels;
};

inline ChannelProfile channels_from_json(const json& doc) {
  if (!doc.contains("channels")) throw InvalidArgument("channels: field is missing");
  const auto& arr = doc.at("channels");
  if (!arr.is_array()) throw InvalidArgument("channels: expected an array of integers");
  std::vector<int> sizes;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_integer()) throw InvalidArgument("channels[" + std::to_string(i) + "]: expected an integer");
    sizes.push_back(arr[i].get<int>());
  }
  return ChannelProfile(std::move(sizes));
}

inline DistributionFile distribution_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("distribution file: expected a JSON object");
  if (!doc.contains("masses")) throw InvalidArgument("masses: field is missing");
  const auto& arr = doc.at("masses");
  if (!arr.is_array()) throw InvalidArgument("masses: expected an array");
  std::vector<std::string> texts;
  for (std::size_t j = 0; j < arr.size(); ++j) {
    if (arr[j].is_string())
      texts.push_back(arr[j].get<std::string>());
    else if (arr[j].is_number())
      texts.push_back(arr[j].dump());
    else
      throw InvalidArgument("masses[" + std::to_string(j) + "]: expected a decimal or fraction string");
  }
  return {Distribution::parse(texts), channels_from_json(doc)};
}

inline json channels_to_json(const ChannelProfile& ch) { return json(ch.sizes()); }

inline json node_to_json(const DecodingTree& t, std::size_t index) {
  const auto& n = t.node(index);
  switch (n.kind) {
    case NodeKind::leaf: return json{{"symbol", n.symbol}};
    case NodeKind::dummy: return json{{"dummy", true}};
    case NodeKind::internal: {
      json children = json::array();
      for (auto c : n.children) children.push_back(node_to_json(t, c));
      return json{{"class", n.channel}, {"children", std::move(children)}};
    }
  }
  return {};
}

inline json tree_to_json(const DecodingTree& t, const ChannelProfile& ch) {
  return json{{"channels", channels_to_json(ch)}, {"tree", node_to_json(t, t.root())}};
}

namespace detail {

inline std::size_t node_from_json(const json& j, DecodingTree& t, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + ": expected a node object");
  if (j.contains("symbol")) {
    if (!j.at("symbol").is_number_unsigned()) throw InvalidArgument(where + ".symbol: expected a non-negative integer");
    return t.add_leaf(j.at("symbol").get<std::size_t>());
  }
  if (j.contains("dummy")) return t.add_dummy();
  if (!j.contains("class") || !j.contains("children"))
    throw InvalidArgument(where + ": node needs 'symbol', 'dummy', or 'class' with 'children'");
  if (!j.at("class").is_number_unsigned()) throw InvalidArgument(where + ".class: expected a non-negative integer");
  const auto& kids = j.at("children");
  if (!kids.is_array()) throw InvalidArgument(where + ".children: expected an array");
  std::vector<std::size_t> children;
  for (std::size_t i = 0; i < kids.size(); ++i)
    children.push_back(node_from_json(kids[i], t, where + ".children[" + std::to_string(i) + "]"));
  return t.add_internal(j.at("class").get<std::size_t>(), std::move(children));
}

}  // namespace detail

struct TreeFile {
  DecodingTree tree;
  ChannelProfile channels;
};

// Parses and validates a tree file; the symbol count is the number of leaves.
inline TreeFile tree_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("tree")) throw InvalidArgument("tree: field is missing");
  TreeFile out{DecodingTree{}, channels_from_json(doc)};
  out.tree.set_root(detail::node_from_json(doc.at("tree"), out.tree, "tree"));
  std::size_t leaves = 0;
  for (const auto& n : out.tree.nodes())
    if (n.kind == NodeKind::leaf) ++leaves;
  const auto violations = validate_tree(out.tree, out.channels, leaves);
  if (!violations.empty())
    throw InvalidArgument("tree" + violations.front().path + ": " + violations.front().message);
  return out;
}

inline json codebook_to_json(const Codebook& cb) {
  json words = json::array();
  for (const auto& w : cb.words) {
    json parts = json::array();
    for (std::size_t i = 0; i < w.parts.size(); ++i) parts.push_back(render_digits(w.parts[i], cb.channels.size(i)));
    words.push_back(std::move(parts));
  }
  return json{{"channels", channels_to_json(cb.channels)}, {"words", std::move(words)}};
}

inline Codebook codebook_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("words")) throw InvalidArgument("words: field is missing");
  Codebook cb{channels_from_json(doc), {}};
  const auto& words = doc.at("words");
  if (!words.is_array()) throw InvalidArgument("words: expected an array");
  for (std::size_t j = 0; j < words.size(); ++j) {
    const auto& parts = words[j];
    const auto where = "words[" + std::to_string(j) + "]";
    if (!parts.is_array() || parts.size() != cb.channels.count())
      throw InvalidArgument(where + ": expected " + std::to_string(cb.channels.count()) + " strings");
    Codeword w;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!parts[i].is_string()) throw InvalidArgument(where + "[" + std::to_string(i) + "]: expected a string");
      try {
        w.parts.push_back(parse_digits(parts[i].get<std::string>(), cb.channels.size(i)));
      } catch (const InvalidArgument& e) {
        throw InvalidArgument(where + "[" + std::to_string(i) + "]: " + e.what());
      }
    }
    cb.words.push_back(std::move(w));
  }
  return cb;
}

inline json streams_to_json(const ChannelStreams& s, const ChannelProfile& ch) {
  json arr = json::array();
  for (std::size_t i = 0; i < s.streams.size(); ++i) arr.push_back(render_digits(s.streams[i], ch.size(i)));
  return json{{"streams", std::move(arr)}};
}

inline ChannelStreams streams_from_json(const json& doc, const ChannelProfile& ch) {
  if (!doc.is_object() || !doc.contains("streams")) throw InvalidArgument("streams: field is missing");
  const auto& arr = doc.at("streams");
  if (!arr.is_array() || arr.size() != ch.count())
    throw InvalidArgument("streams: expected " + std::to_string(ch.count()) + " strings");
  ChannelStreams out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw InvalidArgument("streams[" + std::to_string(i) + "]: expected a string");
    try {
      out.streams.push_back(parse_digits(arr[i].get<std::string>(), ch.size(i)));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("streams[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

}  // namespace mchuff::io
