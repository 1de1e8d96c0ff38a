#include "protochan/channel.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "protochan/textcodec.hpp"

namespace protochan {

namespace {

// Draw procedure documented in channel.hpp; the tests replay it
// independently, so any change here is a wire-format change.
class ChannelRng {
 public:
  explicit ChannelRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::size_t count = 0;
    double product = 1.0;
    do {
      product *= uniform();
      ++count;
    } while (product > limit);
    return count - 1;
  }

 private:
  std::mt19937_64 engine_;
};

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

InvalidConfig::InvalidConfig(const std::string& reason)
    : std::runtime_error("invalid channel config: " + reason) {}

void ChannelConfig::validate() const {
  if (!valid_probability(loss_prob)) throw InvalidConfig("loss_prob must be in [0,1]");
  if (!valid_probability(frag_prob)) throw InvalidConfig("frag_prob must be in [0,1]");
  if (!(benign_rate >= 0.0) || !std::isfinite(benign_rate))
    throw InvalidConfig("benign_rate must be finite and >= 0");
  if (!(interval > 0.0)) throw InvalidConfig("interval must be > 0");
  double weight_sum = 0.0;
  for (const auto& [label, weight] : benign_distribution) {
    if (label.empty()) throw InvalidConfig("benign_distribution labels must be non-empty");
    if (!(weight >= 0.0) || !std::isfinite(weight))
      throw InvalidConfig("benign_distribution weight for \"" + label +
                          "\" must be finite and >= 0");
    weight_sum += weight;
  }
  if (benign_rate > 0.0 && !(weight_sum > 0.0))
    throw InvalidConfig("benign_rate > 0 requires a benign_distribution with positive total weight");
}

std::vector<PacketRecord> send_bits(const BitString& bits,
                                    const ProtocolAlphabet& alphabet,
                                    BitOrder order,
                                    double interval,
                                    std::string_view src,
                                    std::string_view dst) {
  if (!(interval > 0.0)) throw InvalidConfig("interval must be > 0");
  auto labels = encode_bits(bits, alphabet, order);
  std::vector<PacketRecord> packets;
  packets.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    packets.push_back(PacketRecord{
        .seq = i,
        .time = static_cast<double>(i) * interval,
        .protocol = std::move(labels[i]),
        .more_fragments = false,
        .src = std::string(src),
        .dst = std::string(dst),
        .covert = true,
    });
  }
  return packets;
}

std::vector<PacketRecord> send_message(std::string_view text,
                                       const ProtocolAlphabet& alphabet,
                                       BitOrder order,
                                       double interval,
                                       std::string_view src,
                                       std::string_view dst) {
  return send_bits(encode_text(text, alphabet.bits_per_symbol()), alphabet, order, interval, src,
                   dst);
}

std::vector<PacketRecord> channel_transmit(const std::vector<PacketRecord>& packets,
                                           const ChannelConfig& cfg) {
  cfg.validate();
  ChannelRng rng(cfg.seed);

  // std::map iteration gives the lexicographic label order the cumulative
  // pick is specified against.
  double total_weight = 0.0;
  for (const auto& [label, weight] : cfg.benign_distribution) total_weight += weight;
  auto pick_benign = [&]() -> const std::string& {
    double x = rng.uniform() * total_weight;
    auto last = cfg.benign_distribution.begin();
    for (auto it = cfg.benign_distribution.begin(); it != cfg.benign_distribution.end(); ++it) {
      if (x < it->second) return it->first;
      x -= it->second;
      last = it;
    }
    return last->first;  // floating-point tail
  };

  std::vector<PacketRecord> out;
  out.reserve(packets.size());
  for (const PacketRecord& pkt : packets) {
    if (!pkt.covert) {
      out.push_back(pkt);
      continue;
    }
    const bool lost = rng.uniform() < cfg.loss_prob;
    const bool duplicated = rng.uniform() < cfg.frag_prob;
    if (!lost) {
      if (duplicated) {
        PacketRecord flagged = pkt;
        flagged.more_fragments = true;
        out.push_back(std::move(flagged));
      }
      PacketRecord clean = pkt;
      clean.more_fragments = false;
      out.push_back(std::move(clean));
    }
    const std::size_t benign_count = rng.poisson(cfg.benign_rate);
    for (std::size_t k = 0; k < benign_count; ++k) {
      out.push_back(PacketRecord{
          .seq = 0,
          .time = pkt.time,
          .protocol = pick_benign(),
          .more_fragments = false,
          .src = std::string(kBenignSrc),
          .dst = pkt.dst,
          .covert = false,
      });
    }
  }
  // seq is observation order, not send order.
  for (std::size_t i = 0; i < out.size(); ++i) out[i].seq = i;
  return out;
}

ReceiveReport receive(const std::vector<PacketRecord>& trace, const ReceiverConfig& cfg) {
  std::vector<std::string> labels;
  for (const PacketRecord& pkt : trace) {
    if (cfg.dst_filter && pkt.dst != *cfg.dst_filter) continue;
    if (cfg.drop_more_fragments && pkt.more_fragments) continue;
    if (!cfg.alphabet.is_usable(pkt.protocol)) continue;
    labels.push_back(pkt.protocol);
  }

  const BitString bits = decode_symbols(labels, cfg.alphabet, cfg.order);
  TextDecodeResult decoded = decode_text(bits);

  ReceiveReport report;
  report.text = std::move(decoded.text);
  report.parity_failures = std::move(decoded.parity_failures);
  report.missing_eot = decoded.missing_eot;
  report.consumed_packets = labels.size();
  report.desync_suspected = !report.parity_failures.empty() || report.missing_eot;
  return report;
}

}  // namespace protochan
