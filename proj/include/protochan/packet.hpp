// packet.hpp

#pragma once

#include <cstdint>
#include <string>

namespace protochan {

// One observed packet, reduced to the attributes the channel cares
// about. `covert` is evaluation-only ground truth: the receiver and the
// detector never read it.
struct PacketRecord {
  std::uint64_t seq = 0;
  double time = 0.0;  // seconds, synthetic
  std::string protocol;
  bool more_fragments = false;
  std::string src;
  std::string dst;
  bool covert = false;

  bool operator==(const PacketRecord&) const = default;
};

}  // namespace protochan
