#include "protochan/codec.hpp"

#include <bit>

namespace protochan {

std::string to_string(BitOrder order) {
  return order == BitOrder::MsbFirst ? "msb_first" : "lsb_first";
}

std::optional<BitOrder> parse_bit_order(std::string_view text) {
  if (text == "msb_first" || text == "msb") return BitOrder::MsbFirst;
  if (text == "lsb_first" || text == "lsb") return BitOrder::LsbFirst;
  return std::nullopt;
}

AlphabetTooSmall::AlphabetTooSmall(std::size_t count)
    : std::runtime_error("alphabet too small: a protocol channel needs at least 2 protocols, got " +
                         std::to_string(count)) {}

InvalidAlphabet::InvalidAlphabet(const std::string& reason)
    : std::runtime_error("invalid alphabet: " + reason) {}

LengthNotMultiple::LengthNotMultiple(std::size_t length, std::size_t width)
    : std::runtime_error("bit string length " + std::to_string(length) +
                         " is not a multiple of the symbol width " + std::to_string(width)) {}

UnknownProtocol::UnknownProtocol(std::string label_, std::size_t position_)
    : std::runtime_error("unknown protocol \"" + label_ + "\" at position " +
                         std::to_string(position_)),
      label(std::move(label_)),
      position(position_) {}

std::size_t bits_per_symbol(std::size_t label_count) {
  if (label_count < 2) throw AlphabetTooSmall(label_count);
  return static_cast<std::size_t>(std::bit_width(label_count)) - 1;
}

ProtocolAlphabet::ProtocolAlphabet(std::vector<std::string> labels)
    : labels_(std::move(labels)), width_(protochan::bits_per_symbol(labels_.size())) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty())
      throw InvalidAlphabet("label at index " + std::to_string(i) + " is empty");
    if (!index_.emplace(labels_[i], i).second)
      throw InvalidAlphabet("duplicate label \"" + labels_[i] + "\"");
  }
}

std::optional<std::size_t> ProtocolAlphabet::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ProtocolAlphabet::is_usable(const std::string& label) const {
  auto idx = index_of(label);
  return idx.has_value() && *idx < usable_size();
}

namespace {

Bit checked_bit(Bit value) {
  if (value > 1)
    throw std::invalid_argument("bit value must be 0 or 1, got " + std::to_string(int(value)));
  return value;
}

}  // namespace

std::vector<std::string> encode_bits(const BitString& bits,
                                     const ProtocolAlphabet& alphabet,
                                     BitOrder order) {
  const std::size_t width = alphabet.bits_per_symbol();
  if (bits.size() % width != 0) throw LengthNotMultiple(bits.size(), width);

  std::vector<std::string> labels;
  labels.reserve(bits.size() / width);
  for (std::size_t group = 0; group < bits.size(); group += width) {
    std::size_t index = 0;
    for (std::size_t j = 0; j < width; ++j) {
      const Bit bit = checked_bit(bits[group + j]);
      if (order == BitOrder::MsbFirst) {
        index = (index << 1) | bit;
      } else {
        index |= static_cast<std::size_t>(bit) << j;
      }
    }
    labels.push_back(alphabet.label(index));
  }
  return labels;
}

BitString decode_symbols(const std::vector<std::string>& labels,
                         const ProtocolAlphabet& alphabet,
                         BitOrder order) {
  const std::size_t width = alphabet.bits_per_symbol();
  BitString bits;
  bits.reserve(labels.size() * width);
  for (std::size_t pos = 0; pos < labels.size(); ++pos) {
    const auto index = alphabet.index_of(labels[pos]);
    if (!index || *index >= alphabet.usable_size()) throw UnknownProtocol(labels[pos], pos);
    for (std::size_t j = 0; j < width; ++j) {
      const std::size_t shift = order == BitOrder::MsbFirst ? width - 1 - j : j;
      bits.push_back(static_cast<Bit>((*index >> shift) & 1));
    }
  }
  return bits;
}

}  // namespace protochan
