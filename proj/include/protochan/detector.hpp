// detector.hpp
//
// Defender-side traffic analysis: a baseline profile of per-protocol
// frequencies defines what "usual" traffic looks like, sliding windows
// of a query trace are scored with a chi-square goodness-of-fit
// statistic against the smoothed baseline, and protocols absent from
// the baseline are flagged outright. Also hosts the attacker-side
// alphabet selector (most frequent protocols first).

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "protochan/codec.hpp"
#include "protochan/packet.hpp"

namespace protochan {

struct EmptyTrace : std::runtime_error {
  EmptyTrace();
};

struct NotEnoughProtocols : std::runtime_error {
  NotEnoughProtocols(std::size_t available, std::size_t requested);
};

struct WindowLargerThanTrace : std::runtime_error {
  WindowLargerThanTrace(std::size_t window, std::size_t trace_size);
};

struct ProtocolProfile {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  double alpha = 1.0;  // smoothing pseudocount, > 0
};

// Per-protocol frequencies of the trace; the covert field is ignored.
ProtocolProfile baseline_profile(const std::vector<PacketRecord>& trace, double alpha = 1.0);

// The k most frequent labels, ties broken lexicographically, in
// descending-frequency order.
ProtocolAlphabet select_alphabet(const ProtocolProfile& profile, std::size_t k);

struct WindowScore {
  std::uint64_t start_seq = 0;
  double statistic = 0.0;

  bool operator==(const WindowScore&) const = default;
};

// Chi-square statistic per window of `window_size` packets, advancing by
// `stride`. Expected counts are window_size * (count + alpha) /
// (total + alpha * K), with K the size of the union of the profile and
// query vocabularies.
std::vector<WindowScore> windowed_scores(const std::vector<PacketRecord>& trace,
                                         const ProtocolProfile& profile,
                                         std::size_t window_size,
                                         std::size_t stride);

struct DetectionReport {
  std::size_t window_size = 0;
  std::vector<WindowScore> scores;
  std::vector<std::string> unusual_protocols;  // in query, absent from baseline
  bool verdict = false;  // any score > threshold, or unusual_protocols non-empty
  double threshold = 0.0;
};

DetectionReport detect(const std::vector<PacketRecord>& trace,
                       const ProtocolProfile& profile,
                       std::size_t window_size,
                       std::size_t stride,
                       double threshold);

// Nearest-rank percentile, for calibrating a threshold from the window
// scores of a known-benign trace.
double score_percentile(std::vector<double> scores, double percentile);

std::string profile_to_json_text(const ProtocolProfile& profile);
ProtocolProfile profile_from_json_text(const std::string& text);

std::string detection_report_to_json_text(const DetectionReport& report);

}  // namespace protochan
