// channel.hpp
//
// Sender, deterministic fault-injecting channel model, and receiver.
//
// The channel transform is reproducible from the seed alone. All draws
// come from a Mersenne Twister (std::mt19937_64) seeded with
// ChannelConfig::seed; a uniform double in [0,1) is
// (engine() >> 11) * 2^-53. Per covert input packet, in input order:
//
//   1. loss draw          dropped when u < loss_prob
//   2. fragmentation draw emitted twice when u < frag_prob, the first
//                         copy with more_fragments set, the second clean
//   3. benign count       Knuth poisson with mean benign_rate: multiply
//                         uniforms until the product falls to
//                         exp(-benign_rate); consumes one uniform per
//                         step, so at least one. Then one uniform per
//                         benign packet picks its protocol by cumulative
//                         weight over the distribution's labels in
//                         lexicographic order.
//
// Draws 1-3 are consumed for every covert packet regardless of outcome
// (a lost packet still consumes its fragmentation and benign draws).
// Non-covert input packets pass through unchanged and consume nothing.
// Benign packets take the timestamp and destination of the covert
// packet whose slot they follow, source kBenignSrc, and never carry the
// more_fragments flag.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "protochan/codec.hpp"
#include "protochan/packet.hpp"

namespace protochan {

inline constexpr std::string_view kBenignSrc = "background";

struct InvalidConfig : std::runtime_error {
  explicit InvalidConfig(const std::string& reason);
};

struct ChannelConfig {
  double loss_prob = 0.0;
  double frag_prob = 0.0;
  // Expected benign packets injected per covert packet slot.
  double benign_rate = 0.0;
  std::map<std::string, double> benign_distribution;  // label -> weight
  double interval = 1.0;  // seconds between covert sends
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidConfig
};

// Emits one covert packet per channel symbol of the encoded message at
// times i * interval. The protocol label and packet order are the only
// information carriers; nothing else identifies the channel.
std::vector<PacketRecord> send_message(std::string_view text,
                                       const ProtocolAlphabet& alphabet,
                                       BitOrder order,
                                       double interval,
                                       std::string_view src,
                                       std::string_view dst);

// Bit-level variant: transmits `bits` directly, without the text framing.
std::vector<PacketRecord> send_bits(const BitString& bits,
                                    const ProtocolAlphabet& alphabet,
                                    BitOrder order,
                                    double interval,
                                    std::string_view src,
                                    std::string_view dst);

// Applies loss, duplication and benign interleaving as documented above.
// Output seq is renumbered to observation order; identical input and
// config (including seed) give bit-identical output.
std::vector<PacketRecord> channel_transmit(const std::vector<PacketRecord>& packets,
                                           const ChannelConfig& cfg);

struct ReceiverConfig {
  ProtocolAlphabet alphabet;
  BitOrder order = BitOrder::MsbFirst;
  bool drop_more_fragments = false;  // the More-Fragments mitigation
  std::optional<std::string> dst_filter;
};

struct ReceiveReport {
  std::string text;
  std::vector<std::size_t> parity_failures;  // unit indices
  bool missing_eot = false;
  std::size_t consumed_packets = 0;  // packets whose protocol fed the decoder
  bool desync_suspected = false;     // parity_failures non-empty or missing_eot
};

// Keeps packets that match dst_filter (when set) and whose protocol is
// in the usable alphabet prefix, optionally drops flagged fragments,
// then decodes the surviving symbol sequence. Never reads the covert
// field. Total: every anomaly surfaces as a diagnostic.
ReceiveReport receive(const std::vector<PacketRecord>& trace,
                      const ReceiverConfig& cfg);

}  // namespace protochan
