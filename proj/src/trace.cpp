#include "protochan/trace.hpp"

#include <array>
#include <fstream>
#include <ostream>
#include <string_view>

#include <json.hpp>

namespace protochan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 7> kKnownFields = {
    "seq", "time", "protocol", "more_fragments", "src", "dst", "covert"};

bool known_field(std::string_view name) {
  for (std::string_view field : kKnownFields)
    if (field == name) return true;
  return false;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

const json& require_field(const json& record, const char* name, std::size_t line_number,
                          const std::string& line) {
  auto it = record.find(name);
  if (it == record.end())
    throw MalformedRecord(line_number, line, std::string("missing field \"") + name + "\"");
  return *it;
}

}  // namespace

MalformedRecord::MalformedRecord(std::size_t line_number_, std::string line_,
                                 const std::string& reason)
    : std::runtime_error("malformed trace record at line " + std::to_string(line_number_) + ": " +
                         reason + " in: " + line_),
      line_number(line_number_),
      line(std::move(line_)) {}

void write_trace(const std::vector<PacketRecord>& packets, std::ostream& out) {
  for (const PacketRecord& pkt : packets) {
    ordered_json record;
    record["seq"] = pkt.seq;
    record["time"] = pkt.time;
    record["protocol"] = pkt.protocol;
    record["more_fragments"] = pkt.more_fragments;
    record["src"] = pkt.src;
    record["dst"] = pkt.dst;
    record["covert"] = pkt.covert;
    out << record.dump() << '\n';
  }
  if (!out) throw std::runtime_error("trace write failed");
}

void write_trace(const std::vector<PacketRecord>& packets, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path.string());
  write_trace(packets, out);
}

std::vector<PacketRecord> read_trace(std::istream& in, const TraceReadOptions& options) {
  std::vector<PacketRecord> packets;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (blank(line)) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& err) {
      throw MalformedRecord(line_number, line, std::string("invalid JSON (") + err.what() + ")");
    }
    if (!record.is_object()) throw MalformedRecord(line_number, line, "record is not an object");

    for (const auto& item : record.items()) {
      if (known_field(item.key())) continue;
      if (options.strict)
        throw MalformedRecord(line_number, line, "unknown field \"" + item.key() + "\"");
      if (options.on_warning)
        options.on_warning(line_number, "ignoring unknown field \"" + item.key() + "\"");
    }

    const json& seq = require_field(record, "seq", line_number, line);
    if (!seq.is_number_integer() || seq.get<std::int64_t>() < 0)
      throw MalformedRecord(line_number, line, "\"seq\" must be a non-negative integer");
    const json& time = require_field(record, "time", line_number, line);
    if (!time.is_number()) throw MalformedRecord(line_number, line, "\"time\" must be a number");
    const json& protocol = require_field(record, "protocol", line_number, line);
    if (!protocol.is_string() || protocol.get_ref<const std::string&>().empty())
      throw MalformedRecord(line_number, line, "\"protocol\" must be a non-empty string");
    const json& more_fragments = require_field(record, "more_fragments", line_number, line);
    if (!more_fragments.is_boolean())
      throw MalformedRecord(line_number, line, "\"more_fragments\" must be a boolean");
    const json& src = require_field(record, "src", line_number, line);
    if (!src.is_string()) throw MalformedRecord(line_number, line, "\"src\" must be a string");
    const json& dst = require_field(record, "dst", line_number, line);
    if (!dst.is_string()) throw MalformedRecord(line_number, line, "\"dst\" must be a string");

    bool covert = false;
    if (auto it = record.find("covert"); it != record.end()) {
      if (!it->is_boolean())
        throw MalformedRecord(line_number, line, "\"covert\" must be a boolean");
      covert = it->get<bool>();
    }

    PacketRecord pkt{
        .seq = seq.get<std::uint64_t>(),
        .time = time.get<double>(),
        .protocol = protocol.get<std::string>(),
        .more_fragments = more_fragments.get<bool>(),
        .src = src.get<std::string>(),
        .dst = dst.get<std::string>(),
        .covert = covert,
    };

    if (!packets.empty()) {
      if (pkt.seq <= packets.back().seq)
        throw MalformedRecord(line_number, line, "\"seq\" must be strictly increasing");
      if (pkt.time < packets.back().time)
        throw MalformedRecord(line_number, line, "\"time\" must be non-decreasing");
    }
    packets.push_back(std::move(pkt));
  }
  return packets;
}

std::vector<PacketRecord> read_trace(const std::filesystem::path& path,
                                     const TraceReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file for reading: " + path.string());
  return read_trace(in, options);
}

}  // namespace protochan
