#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mchuff {

// Base for every error this library raises on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Dimension or alphabet mismatch between a value and a channel profile.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NotPrefixFree : public InvalidArgument {
 public:
  NotPrefixFree(std::size_t first, std::size_t second)
      : InvalidArgument("codewords " + std::to_string(first) + " and " + std::to_string(second) +
                        " are not prefix-free"),
        first_(first),
        second_(second) {}
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

// Codec failures.
class DecodeError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public DecodeError {
 public:
  TruncationError(std::size_t symbol, std::size_t channel, std::size_t offset)
      : DecodeError("stream " + std::to_string(channel) + " exhausted at digit " + std::to_string(offset) +
                    " while decoding symbol #" + std::to_string(symbol)),
        channel_(channel),
        offset_(offset) {}
  std::size_t channel() const noexcept { return channel_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t channel_;
  std::size_t offset_;
};

class CorruptionError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

class TrailingDataError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

// Raised for one-symbol codes: the single codeword is empty, so a stream
// cannot say how many symbols it carries.
class DegenerateCodeError : public Error {
 public:
  DegenerateCodeError() : Error("degenerate code: the only codeword is empty") {}
};

}  // namespace mchuff
