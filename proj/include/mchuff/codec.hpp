#pragma once

// Channel-wise encoding and tree-driven decoding.

#include <mchuff/errors.hpp>
#include <mchuff/tree.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mchuff {

// One digit stream per channel; streams drain independently.
struct ChannelStreams {
  std::vector<DigitString> streams;

  std::size_t count() const noexcept { return streams.size(); }
  friend bool operator==(const ChannelStreams&, const ChannelStreams&) = default;
};

// First pair of codewords (by index) that is not prefix-free in any
// channel, or nullopt when the whole code is prefix-free.
inline std::optional<std::pair<std::size_t, std::size_t>> prefix_free(const Codebook& cb) {
  return detail::first_prefix_violation(cb);
}

inline ChannelStreams encode(const Codebook& cb, std::span<const std::size_t> symbols) {
  if (cb.words.size() == 1) throw DegenerateCodeError();
  ChannelStreams out{std::vector<DigitString>(cb.channels.count())};
  for (std::size_t pos = 0; pos < symbols.size(); ++pos) {
    const auto s = symbols[pos];
    if (s >= cb.words.size())
      throw InvalidArgument("symbol " + std::to_string(s) + " at position " + std::to_string(pos) +
                            " is outside the codebook (m = " + std::to_string(cb.words.size()) + ")");
    const auto& word = cb.words[s];
    for (std::size_t i = 0; i < word.parts.size() && i < out.streams.size(); ++i)
      out.streams[i].insert(out.streams[i].end(), word.parts[i].begin(), word.parts[i].end());
  }
  return out;
}

// Walks the tree once per symbol, reading one digit from the channel of
// each internal node. Without a count, decoding stops when every stream is
// exhausted at a codeword boundary. With a count, exactly that many symbols
// are read and any leftover digit is an error.
inline std::vector<std::size_t> decode(const DecodingTree& t, const ChannelStreams& input,
                                       std::optional<std::size_t> count = std::nullopt) {
  if (t.empty()) throw InvalidArgument("decoding tree is empty");
  if (t.node(t.root()).kind != NodeKind::internal) throw DegenerateCodeError();

  std::vector<std::size_t> pos(input.count(), 0);
  auto all_drained = [&] {
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (pos[i] < input.streams[i].size()) return false;
    return true;
  };

  std::vector<std::size_t> out;
  while (count ? out.size() < *count : !all_drained()) {
    std::size_t index = t.root();
    while (true) {
      const auto& n = t.node(index);
      if (n.kind == NodeKind::leaf) {
        out.push_back(n.symbol);
        break;
      }
      if (n.kind == NodeKind::dummy)
        throw CorruptionError("symbol #" + std::to_string(out.size()) + " decodes to a dummy leaf");
      if (n.channel >= input.count())
        throw DimensionMismatch("tree reads channel " + std::to_string(n.channel) + " but only " +
                                std::to_string(input.count()) + " streams were given");
      const auto& stream = input.streams[n.channel];
      if (pos[n.channel] >= stream.size()) throw TruncationError(out.size(), n.channel, pos[n.channel]);
      const auto digit = stream[pos[n.channel]];
      if (digit >= n.children.size())
        throw CorruptionError("digit " + std::to_string(digit) + " at offset " + std::to_string(pos[n.channel]) +
                              " of stream " + std::to_string(n.channel) + " is outside the alphabet");
      ++pos[n.channel];
      index = n.children[digit];
    }
  }
  if (!all_drained())
    throw TrailingDataError("digits remain after " + std::to_string(out.size()) + " symbols");
  return out;
}

// Digits render as base-36 characters when q <= 36, and as comma-separated
// integers otherwise.
inline std::string render_digits(const DigitString& digits, int q) {
  std::string out;
  if (q <= 36) {
    for (auto d : digits) out.push_back(static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
    return out;
  }
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(digits[i]);
  }
  return out;
}

inline DigitString parse_digits(std::string_view text, int q) {
  DigitString out;
  auto bad = [&](const std::string& why) {
    return InvalidArgument("digit string '" + std::string(text) + "': " + why);
  };
  if (q <= 36) {
    for (char c : text) {
      std::uint32_t d;
      if (c >= '0' && c <= '9')
        d = static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'z')
        d = static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'Z')
        d = static_cast<std::uint32_t>(c - 'A' + 10);
      else
        throw bad(std::string("invalid character '") + c + "'");
      if (d >= static_cast<std::uint32_t>(q)) throw bad("digit outside alphabet of size " + std::to_string(q));
      out.push_back(d);
    }
    return out;
  }
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto piece = text.substr(start, end - start);
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string_view::npos) throw bad("malformed digit");
    const auto d = std::stoul(std::string(piece));
    if (d >= static_cast<unsigned long>(q)) throw bad("digit outside alphabet of size " + std::to_string(q));
    out.push_back(static_cast<std::uint32_t>(d));
    start = end + 1;
  }
  return out;
}

}  // namespace mchuff
