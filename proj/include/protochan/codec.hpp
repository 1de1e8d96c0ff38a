// codec.hpp
//
// Bit-level codec for protocol channels. An ordered protocol alphabet
// assigns label i the bit pattern of the integer i, and a bit string is
// transported as the sequence of labels picked by consecutive bit groups.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace protochan {

using Bit = std::uint8_t;
using BitString = std::vector<Bit>;

// How a symbol index maps to its bit group. Groups are always consumed
// left to right from the bit string; only the intra-group interpretation
// changes. Both endpoints must agree on this out of band.
enum class BitOrder { MsbFirst, LsbFirst };

std::string to_string(BitOrder order);
std::optional<BitOrder> parse_bit_order(std::string_view text);

struct AlphabetTooSmall : std::runtime_error {
  explicit AlphabetTooSmall(std::size_t count);
};

struct InvalidAlphabet : std::runtime_error {
  explicit InvalidAlphabet(const std::string& reason);
};

struct LengthNotMultiple : std::runtime_error {
  LengthNotMultiple(std::size_t length, std::size_t width);
};

// A label outside the usable alphabet prefix reached the symbol decoder.
// This signals a configuration mismatch between the endpoints, not
// channel noise; noise filtering happens in the receiver.
struct UnknownProtocol : std::runtime_error {
  UnknownProtocol(std::string label_, std::size_t position_);
  std::string label;
  std::size_t position;
};

// floor(log2(label_count)) bits carried per packet.
std::size_t bits_per_symbol(std::size_t label_count);

class ProtocolAlphabet {
 public:
  // Labels must be distinct and non-empty; at least two are required.
  explicit ProtocolAlphabet(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t bits_per_symbol() const { return width_; }

  // Only the first 2^bits_per_symbol labels take part in encoding;
  // labels past that prefix are inert.
  std::size_t usable_size() const { return std::size_t{1} << width_; }

  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> index_of(const std::string& label) const;
  bool is_usable(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
};

// Groups the bit string into symbol-width chunks and maps each chunk to
// the label whose index equals the chunk value under `order`. The bit
// count must be a multiple of the symbol width.
std::vector<std::string> encode_bits(const BitString& bits,
                                     const ProtocolAlphabet& alphabet,
                                     BitOrder order);

// Exact inverse of encode_bits.
BitString decode_symbols(const std::vector<std::string>& labels,
                         const ProtocolAlphabet& alphabet,
                         BitOrder order);

}  // namespace protochan
