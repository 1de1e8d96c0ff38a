#pragma once

// Seeded generators shared by the test binaries. The uniform mapping and
// the cumulative label pick mirror the channel's documented draw
// procedure, so synthetic benign traffic is reproducible the same way.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "protochan/codec.hpp"
#include "protochan/packet.hpp"

namespace testutil {

inline double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline std::string pick_weighted(const std::map<std::string, double>& weights, double x) {
  for (const auto& [label, weight] : weights) {
    if (x < weight) return label;
    x -= weight;
  }
  return weights.rbegin()->first;
}

inline std::vector<protochan::PacketRecord> benign_trace(
    std::size_t count, const std::map<std::string, double>& weights, std::uint64_t seed,
    const std::string& dst = "receiver") {
  std::mt19937_64 engine(seed);
  double total = 0.0;
  for (const auto& [label, weight] : weights) total += weight;
  std::vector<protochan::PacketRecord> trace;
  trace.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    trace.push_back(protochan::PacketRecord{
        .seq = i,
        .time = static_cast<double>(i),
        .protocol = pick_weighted(weights, unit_uniform(engine) * total),
        .more_fragments = false,
        .src = "background",
        .dst = dst,
        .covert = false,
    });
  }
  return trace;
}

inline protochan::BitString random_bits(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  protochan::BitString bits;
  bits.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    bits.push_back(static_cast<protochan::Bit>(engine() & 1));
  return bits;
}

// Random message over the full 31-character payload alphabet.
inline std::string random_message(std::mt19937_64& engine, std::size_t min_len,
                                  std::size_t max_len) {
  static constexpr std::string_view kChars = "ABCDEFGHIJKLMNOPQRSTUVWXYZ .,?-";
  const std::size_t len = min_len + engine() % (max_len - min_len + 1);
  std::string text;
  text.reserve(len);
  for (std::size_t i = 0; i < len; ++i) text.push_back(kChars[engine() % kChars.size()]);
  return text;
}

inline protochan::BitString bits_of(std::string_view text) {
  protochan::BitString bits;
  bits.reserve(text.size());
  for (char c : text) bits.push_back(c == '1');
  return bits;
}

}  // namespace testutil
