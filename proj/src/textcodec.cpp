#include "protochan/textcodec.hpp"

namespace protochan {

namespace {

// code -> character, positions 0..30; code 31 is the EOT sentinel.
constexpr std::string_view kTable = "ABCDEFGHIJKLMNOPQRSTUVWXYZ .,?-";

constexpr std::uint8_t kSubstituteCode = 29;  // '?'

void append_unit(BitString& bits, std::uint8_t code) {
  for (std::size_t j = 0; j < kCodeBits; ++j) {
    bits.push_back(static_cast<Bit>((code >> (kCodeBits - 1 - j)) & 1));
  }
  bits.push_back(parity_bit(code));
}

}  // namespace

CodeOutOfRange::CodeOutOfRange(unsigned code)
    : std::runtime_error("character code " + std::to_string(code) + " out of range") {}

std::uint8_t char_to_code(char ch) noexcept {
  if (ch >= 'A' && ch <= 'Z') return static_cast<std::uint8_t>(ch - 'A');
  if (ch >= 'a' && ch <= 'z') return static_cast<std::uint8_t>(ch - 'a');
  switch (ch) {
    case ' ': return 26;
    case '.': return 27;
    case ',': return 28;
    case '?': return 29;
    case '-': return 30;
    default: return kSubstituteCode;
  }
}

char code_to_char(std::uint8_t code) {
  if (code >= kEotCode) throw CodeOutOfRange(code);
  return kTable[code];
}

std::uint8_t parity_bit(std::uint8_t code) {
  if (code > 31) throw CodeOutOfRange(code);
  std::uint8_t parity = 0;
  for (std::size_t j = 0; j < kCodeBits; ++j) parity ^= (code >> j) & 1;
  return parity;
}

std::string canonicalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) out.push_back(code_to_char(char_to_code(ch)));
  return out;
}

BitString encode_text(std::string_view text, std::size_t pad_to) {
  if (pad_to < 1) throw std::invalid_argument("pad_to width must be >= 1");
  BitString bits;
  bits.reserve((text.size() + 1) * kUnitBits + pad_to);
  for (char ch : text) append_unit(bits, char_to_code(ch));
  append_unit(bits, kEotCode);
  while (bits.size() % pad_to != 0) bits.push_back(0);
  return bits;
}

TextDecodeResult decode_text(const BitString& bits) {
  TextDecodeResult result;
  std::size_t unit = 0;
  for (std::size_t offset = 0; offset + kUnitBits <= bits.size(); offset += kUnitBits, ++unit) {
    std::uint8_t code = 0;
    unsigned ones = 0;
    for (std::size_t j = 0; j < kUnitBits; ++j) {
      const Bit bit = bits[offset + j];
      if (bit > 1)
        throw std::invalid_argument("bit value must be 0 or 1, got " + std::to_string(int(bit)));
      if (j < kCodeBits) code = static_cast<std::uint8_t>((code << 1) | bit);
      ones += bit;
    }
    if (ones % 2 != 0) {
      result.parity_failures.push_back(unit);
      result.text.push_back('?');
      continue;
    }
    if (code == kEotCode) return result;  // trailing bits are padding
    result.text.push_back(code_to_char(code));
  }
  result.missing_eot = true;
  return result;
}

}  // namespace protochan
