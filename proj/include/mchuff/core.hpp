#pragma once

// Domain types and information measures shared by the rest of the library.
//
// Probabilities are exact rationals. Lengths in nats are doubles; any two
// nats values within kTieEpsilon are treated as equal by the optimizers.

#include <mchuff/errors.hpp>
#include <mchuff/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace mchuff {

// Information in nats (natural-log units).
using Nats = double;

inline constexpr Nats kTieEpsilon = 1e-12;

// Inputs whose masses sum to 1 within this slack are rescaled exactly.
inline constexpr double kRescaleSlack = 1e-9;

inline bool nats_less(Nats a, Nats b) { return a < b - kTieEpsilon; }
inline bool nats_tie(Nats a, Nats b) { return std::fabs(a - b) <= kTieEpsilon; }

// A probability distribution over source symbols 0..m-1.
//
// Masses are kept both in symbol order and sorted ascending; the sort is
// stable, so equal masses keep their symbol order.
class Distribution {
 public:
  // Masses must be positive and sum to exactly one.
  static Distribution from_masses(std::vector<Rational> masses) {
    if (masses.empty()) throw InvalidArgument("distribution needs at least one mass");
    Rational total = 0;
    for (std::size_t j = 0; j < masses.size(); ++j) {
      masses[j].canonicalize();
      if (sgn(masses[j]) <= 0)
        throw InvalidArgument("masses[" + std::to_string(j) + "]: mass must be positive, got " +
                              to_string(masses[j]));
      total += masses[j];
    }
    if (total != 1) throw InvalidArgument("masses sum to " + to_string(total) + ", not 1");
    return Distribution(std::move(masses), false);
  }

  // Parses decimal or fraction strings. A total within kRescaleSlack of one
  // is corrected by moving the residue onto the last mass, and rescaled()
  // reports that it happened.
  static Distribution parse(std::span<const std::string> texts) {
    if (texts.empty()) throw InvalidArgument("masses: distribution needs at least one mass");
    std::vector<Rational> masses;
    masses.reserve(texts.size());
    Rational total = 0;
    for (std::size_t j = 0; j < texts.size(); ++j) {
      auto value = parse_rational(texts[j]);
      if (!value) throw InvalidArgument("masses[" + std::to_string(j) + "]: cannot parse '" + texts[j] + "'");
      if (sgn(*value) <= 0)
        throw InvalidArgument("masses[" + std::to_string(j) + "]: mass must be positive, got '" + texts[j] + "'");
      total += *value;
      masses.push_back(std::move(*value));
    }
    if (total == 1) return Distribution(std::move(masses), false);
    Rational residue = 1 - total;
    if (std::fabs(to_double(residue)) > kRescaleSlack)
      throw InvalidArgument("masses: sum is " + to_string(total) + ", which is not 1 within 1e-9");
    masses.back() += residue;
    if (sgn(masses.back()) <= 0)
      throw InvalidArgument("masses[" + std::to_string(masses.size() - 1) + "]: rescaling made the mass non-positive");
    return Distribution(std::move(masses), true);
  }

  std::size_t size() const noexcept { return by_symbol_.size(); }

  const Rational& mass_of(std::size_t symbol) const { return by_symbol_.at(symbol); }
  const std::vector<Rational>& by_symbol() const noexcept { return by_symbol_; }

  // Ascending masses; sorted()[k] belongs to symbol order()[k].
  const std::vector<Rational>& sorted() const noexcept { return sorted_; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  bool rescaled() const noexcept { return rescaled_; }

 private:
  Distribution(std::vector<Rational> masses, bool rescaled)
      : by_symbol_(std::move(masses)), rescaled_(rescaled) {
    order_.resize(by_symbol_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [this](std::size_t a, std::size_t b) { return by_symbol_[a] < by_symbol_[b]; });
    sorted_.reserve(order_.size());
    for (auto j : order_) sorted_.push_back(by_symbol_[j]);
  }

  std::vector<Rational> by_symbol_;
  std::vector<Rational> sorted_;
  std::vector<std::size_t> order_;
  bool rescaled_ = false;
};

// Alphabet sizes of the n channels.
//
// Channels keep the caller's numbering everywhere (trees, codebooks,
// streams). ascending() lists them by (size, index), which is the order the
// construction algorithms walk.
class ChannelProfile {
 public:
  ChannelProfile() = default;
  explicit ChannelProfile(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw InvalidArgument("channels: need at least one channel");
    for (std::size_t i = 0; i < sizes_.size(); ++i)
      if (sizes_[i] < 2)
        throw InvalidArgument("channels[" + std::to_string(i) + "]: alphabet size must be at least 2, got " +
                              std::to_string(sizes_[i]));
    ascending_.resize(sizes_.size());
    std::iota(ascending_.begin(), ascending_.end(), std::size_t{0});
    std::stable_sort(ascending_.begin(), ascending_.end(),
                     [this](std::size_t a, std::size_t b) { return sizes_[a] < sizes_[b]; });
  }

  std::size_t count() const noexcept { return sizes_.size(); }
  int size(std::size_t channel) const { return sizes_.at(channel); }
  double log_size(std::size_t channel) const { return std::log(static_cast<double>(size(channel))); }
  const std::vector<int>& sizes() const noexcept { return sizes_; }
  const std::vector<std::size_t>& ascending() const noexcept { return ascending_; }

  std::vector<int> sorted_sizes() const {
    std::vector<int> out;
    out.reserve(ascending_.size());
    for (auto c : ascending_) out.push_back(sizes_[c]);
    return out;
  }

  int smallest() const { return sizes_[ascending_.front()]; }
  int largest() const { return sizes_[ascending_.back()]; }

  // Lowest-numbered channel among those with the smallest size >= k, or
  // count() if no channel is that large.
  std::size_t smallest_fitting(int k) const {
    for (auto c : ascending_)
      if (sizes_[c] >= k) return c;
    return count();
  }

  friend bool operator==(const ChannelProfile&, const ChannelProfile&) = default;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> ascending_;
};

// Per-channel codeword lengths, in symbols.
struct LengthTuple {
  std::vector<std::size_t> lengths;

  std::size_t size() const noexcept { return lengths.size(); }
  std::size_t operator[](std::size_t i) const { return lengths[i]; }
  friend bool operator==(const LengthTuple&, const LengthTuple&) = default;
  friend auto operator<=>(const LengthTuple&, const LengthTuple&) = default;
};

inline Nats entropy(const Distribution& dist) {
  Nats h = 0;
  for (const auto& p : dist.sorted()) h += plogp_neg(p);
  return h;
}

// Entropy of an arbitrary multiset of nonnegative masses, taken as atoms.
inline Nats entropy_of(std::span<const Rational> masses) {
  Nats h = 0;
  for (const auto& p : masses) h += plogp_neg(p);
  return h;
}

inline Nats description_length(const LengthTuple& lt, const ChannelProfile& ch) {
  if (lt.size() != ch.count())
    throw DimensionMismatch("length tuple has " + std::to_string(lt.size()) + " entries for " +
                            std::to_string(ch.count()) + " channels");
  Nats total = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) total += static_cast<double>(lt[i]) * ch.log_size(i);
  return total;
}

// q^-e as an exact rational.
inline Rational inverse_power(int q, std::size_t e) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(e));
  return Rational(mpz_class(1), den);
}

// Sum over codewords of prod_i q_i^-l_i. A uniquely decodable code keeps
// this at or below one.
inline Rational kraft_sum(std::span<const LengthTuple> tuples, const ChannelProfile& ch) {
  Rational total = 0;
  for (const auto& lt : tuples) {
    if (lt.size() != ch.count())
      throw DimensionMismatch("length tuple has " + std::to_string(lt.size()) + " entries for " +
                              std::to_string(ch.count()) + " channels");
    Rational term = 1;
    for (std::size_t i = 0; i < lt.size(); ++i) term *= inverse_power(ch.size(i), lt[i]);
    total += term;
  }
  return total;
}

// Strict upper bound on the dummy leaves an optimal tree needs:
// max_i (q_i - q_{i-1}) over the sorted sizes, with q_0 = 1.
inline int dummy_bound(const ChannelProfile& ch) {
  int previous = 1;
  int bound = 0;
  for (int q : ch.sorted_sizes()) {
    bound = std::max(bound, q - previous);
    previous = q;
  }
  return bound;
}

// {1 - (q1-1)/k} plus q1-1 copies of 1/k. Its optimal length is ln q1
// while its entropy tends to zero as k grows.
inline Distribution tight_example(int q1, long k) {
  if (q1 < 2) throw InvalidArgument("tight_example: q1 must be at least 2");
  if (k < q1) throw InvalidArgument("tight_example: need k >= q1");
  std::vector<Rational> masses;
  masses.emplace_back(Rational(1) - Rational(mpz_class(q1 - 1), mpz_class(k)));
  for (int i = 0; i < q1 - 1; ++i) masses.emplace_back(Rational(mpz_class(1), mpz_class(k)));
  for (auto& m : masses) m.canonicalize();
  return Distribution::from_masses(std::move(masses));
}

}  // namespace mchuff
