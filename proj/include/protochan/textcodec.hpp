// textcodec.hpp
//
// Text payload codec: each character becomes a 6-bit unit holding a
// 5-bit code and a parity bit, and a reserved unit terminates the
// message in band.
//
// Wire-format constants (cross-implementations must match bit for bit):
//   code 0..25   'A'..'Z' (input is case-folded)
//   code 26      space
//   code 27      '.'
//   code 28      ','
//   code 29      '?'  (also the substitute for unmapped characters)
//   code 30      '-'
//   code 31      end of message, never printable
//   unit layout  5 code bits most significant first, then the parity bit
//   parity       XOR of the code bits, so every unit has even popcount
//   message      one unit per character, the EOT unit (111111), then
//                zero bits padding the total length to a multiple of
//                the channel symbol width
//
// Parity detects every odd number of flipped bits inside a unit and no
// even number; it never corrects.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "protochan/codec.hpp"

namespace protochan {

inline constexpr std::size_t kUnitBits = 6;
inline constexpr std::size_t kCodeBits = 5;
inline constexpr std::uint8_t kEotCode = 31;

struct CodeOutOfRange : std::runtime_error {
  explicit CodeOutOfRange(unsigned code);
};

// Total over all characters: unmapped input becomes '?' (code 29).
std::uint8_t char_to_code(char ch) noexcept;

// Printable codes 0..30 only; code 31 is the EOT sentinel.
char code_to_char(std::uint8_t code);

// XOR of the five code bits of `code` (0..31).
std::uint8_t parity_bit(std::uint8_t code);

// The text as it survives a codec roundtrip: upper-cased, unmapped
// characters substituted with '?'.
std::string canonicalize(std::string_view text);

// Encodes `text`, appends the EOT unit and pads with zero bits until the
// length is a multiple of `pad_to` (the channel symbol width, >= 1).
BitString encode_text(std::string_view text, std::size_t pad_to);

struct TextDecodeResult {
  std::string text;
  std::vector<std::size_t> parity_failures;  // unit indices
  bool missing_eot = false;
};

// Consumes 6-bit units until the first valid EOT unit. Units with bad
// parity decode to '?' and are recorded; bits after EOT are ignored; a
// trailing partial unit is dropped. Decoding is total: corruption is
// reported through the diagnostics, never as an error.
TextDecodeResult decode_text(const BitString& bits);

}  // namespace protochan
