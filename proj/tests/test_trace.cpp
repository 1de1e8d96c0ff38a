#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "protochan/trace.hpp"

using namespace protochan;

namespace {

std::vector<PacketRecord> sample_packets() {
  return {
      {0, 0.0, "ICMP", false, "sender", "receiver", true},
      {1, 0.5, "DNS", false, "background", "receiver", false},
      {2, 1.0, "ARP", true, "sender", "receiver", true},
  };
}

std::vector<PacketRecord> roundtrip(const std::vector<PacketRecord>& packets) {
  std::stringstream buffer;
  write_trace(packets, buffer);
  return read_trace(buffer);
}

}  // namespace

TEST_CASE("write then read restores every field") {
  const auto packets = sample_packets();
  CHECK(roundtrip(packets) == packets);
  CHECK(roundtrip({}).empty());
}

TEST_CASE("file roundtrip") {
  const auto path = std::filesystem::temp_directory_path() / "protochan_trace_test.jsonl";
  const auto packets = sample_packets();
  write_trace(packets, path);
  CHECK(read_trace(path) == packets);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_trace(path), std::runtime_error);
}

TEST_CASE("line format is stable") {
  std::stringstream buffer;
  write_trace({{7, 1.25, "ICMP", true, "a", "b", false}}, buffer);
  CHECK(buffer.str() ==
        "{\"seq\":7,\"time\":1.25,\"protocol\":\"ICMP\",\"more_fragments\":true,"
        "\"src\":\"a\",\"dst\":\"b\",\"covert\":false}\n");
}

TEST_CASE("covert is optional and defaults to false") {
  std::stringstream in(
      R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})");
  const auto packets = read_trace(in);
  REQUIRE(packets.size() == 1);
  CHECK(!packets[0].covert);
}

TEST_CASE("blank lines are skipped") {
  std::stringstream in(
      "\n"
      R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})"
      "\n \t\r\n"
      R"({"seq":1,"time":0.5,"protocol":"ARP","more_fragments":false,"src":"a","dst":"b"})"
      "\n\n");
  CHECK(read_trace(in).size() == 2);
}

TEST_CASE("malformed records carry the line number and the offending line") {
  std::stringstream in(
      R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})"
      "\nnot json\n");
  try {
    read_trace(in);
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord& err) {
    CHECK(err.line_number == 2);
    CHECK(err.line == "not json");
  }
}

TEST_CASE("schema violations are rejected") {
  static const std::pair<const char*, const char*> kBad[] = {
      {"missing protocol",
       R"({"seq":0,"time":0.0,"more_fragments":false,"src":"a","dst":"b"})"},
      {"not an object", R"([1,2,3])"},
      {"negative seq",
       R"({"seq":-1,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})"},
      {"string time",
       R"({"seq":0,"time":"0","protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})"},
      {"empty protocol",
       R"({"seq":0,"time":0.0,"protocol":"","more_fragments":false,"src":"a","dst":"b"})"},
      {"non-bool more_fragments",
       R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":1,"src":"a","dst":"b"})"},
      {"non-string src",
       R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":3,"dst":"b"})"},
      {"non-bool covert",
       R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b","covert":"yes"})"},
  };
  for (const auto& [label, line] : kBad) {
    CAPTURE(label);
    std::stringstream in(line);
    CHECK_THROWS_AS(read_trace(in), MalformedRecord);
  }
}

TEST_CASE("missing-field report names the field") {
  std::stringstream in(R"({"seq":0,"time":0.0,"more_fragments":false,"src":"a","dst":"b"})");
  try {
    read_trace(in);
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord& err) {
    CHECK(std::string(err.what()).find("protocol") != std::string::npos);
  }
}

TEST_CASE("unknown fields throw in strict mode and warn otherwise") {
  const std::string line =
      R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b","ttl":64})";

  std::stringstream strict(line);
  CHECK_THROWS_AS(read_trace(strict), MalformedRecord);

  std::vector<std::pair<std::size_t, std::string>> warnings;
  TraceReadOptions lax;
  lax.strict = false;
  lax.on_warning = [&](std::size_t line_number, const std::string& message) {
    warnings.emplace_back(line_number, message);
  };
  std::stringstream relaxed(line);
  const auto packets = read_trace(relaxed, lax);
  REQUIRE(packets.size() == 1);
  CHECK(packets[0].protocol == "ICMP");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].first == 1);
  CHECK(warnings[0].second.find("ttl") != std::string::npos);
}

TEST_CASE("sequence numbers must increase and times must not go backwards") {
  const char* dup_seq =
      R"({"seq":0,"time":0.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})"
      "\n"
      R"({"seq":0,"time":1.0,"protocol":"ARP","more_fragments":false,"src":"a","dst":"b"})";
  std::stringstream dup(dup_seq);
  CHECK_THROWS_AS(read_trace(dup), MalformedRecord);

  const char* backwards =
      R"({"seq":0,"time":1.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})"
      "\n"
      R"({"seq":1,"time":0.5,"protocol":"ARP","more_fragments":false,"src":"a","dst":"b"})";
  std::stringstream back(backwards);
  CHECK_THROWS_AS(read_trace(back), MalformedRecord);

  const char* simultaneous =
      R"({"seq":0,"time":1.0,"protocol":"ICMP","more_fragments":false,"src":"a","dst":"b"})"
      "\n"
      R"({"seq":1,"time":1.0,"protocol":"ARP","more_fragments":false,"src":"a","dst":"b"})";
  std::stringstream same(simultaneous);
  CHECK(read_trace(same).size() == 2);
}
