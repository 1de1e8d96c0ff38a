// trace.hpp
//
// JSON Lines trace interchange format, one packet record per line:
//
//   {"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,
//    "src":"sender","dst":"receiver","covert":true}
//
// Field set is exact: seq (non-negative integer, strictly increasing),
// time (number, seconds, non-decreasing), protocol (non-empty string),
// more_fragments (bool), src (string), dst (string), covert (bool,
// optional, absent means false). Unknown fields are rejected in strict
// mode and reported through the warning callback otherwise. Blank lines
// are skipped.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "protochan/packet.hpp"

namespace protochan {

struct MalformedRecord : std::runtime_error {
  MalformedRecord(std::size_t line_number_, std::string line_, const std::string& reason);
  std::size_t line_number;
  std::string line;
};

struct TraceReadOptions {
  bool strict = true;
  // Receives warnings in non-strict mode; defaults to silent.
  std::function<void(std::size_t line_number, const std::string& message)> on_warning;
};

void write_trace(const std::vector<PacketRecord>& packets, std::ostream& out);
void write_trace(const std::vector<PacketRecord>& packets, const std::filesystem::path& path);

std::vector<PacketRecord> read_trace(std::istream& in, const TraceReadOptions& options = {});
std::vector<PacketRecord> read_trace(const std::filesystem::path& path,
                                     const TraceReadOptions& options = {});

}  // namespace protochan
