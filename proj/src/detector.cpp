#include "protochan/detector.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace protochan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::set<std::string> union_vocabulary(const std::vector<PacketRecord>& trace,
                                       const ProtocolProfile& profile) {
  std::set<std::string> vocabulary;
  for (const auto& [label, count] : profile.counts) vocabulary.insert(label);
  for (const PacketRecord& pkt : trace) vocabulary.insert(pkt.protocol);
  return vocabulary;
}

}  // namespace

EmptyTrace::EmptyTrace() : std::runtime_error("trace is empty") {}

NotEnoughProtocols::NotEnoughProtocols(std::size_t available, std::size_t requested)
    : std::runtime_error("not enough protocols: need " + std::to_string(requested) +
                         " (minimum 2), profile has " + std::to_string(available)) {}

WindowLargerThanTrace::WindowLargerThanTrace(std::size_t window, std::size_t trace_size)
    : std::runtime_error("window size " + std::to_string(window) + " exceeds trace length " +
                         std::to_string(trace_size)) {}

ProtocolProfile baseline_profile(const std::vector<PacketRecord>& trace, double alpha) {
  if (trace.empty()) throw EmptyTrace();
  if (!(alpha > 0.0)) throw std::invalid_argument("smoothing pseudocount must be > 0");
  ProtocolProfile profile;
  profile.alpha = alpha;
  for (const PacketRecord& pkt : trace) {
    ++profile.counts[pkt.protocol];
    ++profile.total;
  }
  return profile;
}

ProtocolAlphabet select_alphabet(const ProtocolProfile& profile, std::size_t k) {
  if (k < 2 || profile.counts.size() < k) throw NotEnoughProtocols(profile.counts.size(), k);
  std::vector<std::pair<std::string, std::uint64_t>> ranked(profile.counts.begin(),
                                                            profile.counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> labels;
  labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) labels.push_back(ranked[i].first);
  return ProtocolAlphabet(std::move(labels));
}

std::vector<WindowScore> windowed_scores(const std::vector<PacketRecord>& trace,
                                         const ProtocolProfile& profile,
                                         std::size_t window_size,
                                         std::size_t stride) {
  if (window_size < 10) throw std::invalid_argument("window_size must be >= 10");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (!(profile.alpha > 0.0)) throw std::invalid_argument("smoothing pseudocount must be > 0");
  if (trace.size() < window_size) throw WindowLargerThanTrace(window_size, trace.size());

  const std::set<std::string> vocabulary = union_vocabulary(trace, profile);
  const double denominator =
      static_cast<double>(profile.total) + profile.alpha * static_cast<double>(vocabulary.size());

  std::map<std::string, double> expected;  // per window of window_size packets
  for (const std::string& label : vocabulary) {
    const auto it = profile.counts.find(label);
    const double count = it == profile.counts.end() ? 0.0 : static_cast<double>(it->second);
    expected[label] = static_cast<double>(window_size) * (count + profile.alpha) / denominator;
  }

  std::vector<WindowScore> scores;
  for (std::size_t start = 0; start + window_size <= trace.size(); start += stride) {
    std::map<std::string, std::size_t> observed;
    for (std::size_t i = start; i < start + window_size; ++i) ++observed[trace[i].protocol];
    double statistic = 0.0;
    for (const auto& [label, exp_count] : expected) {
      const auto it = observed.find(label);
      const double obs = it == observed.end() ? 0.0 : static_cast<double>(it->second);
      const double diff = obs - exp_count;
      statistic += diff * diff / exp_count;
    }
    scores.push_back(WindowScore{trace[start].seq, statistic});
  }
  return scores;
}

DetectionReport detect(const std::vector<PacketRecord>& trace,
                       const ProtocolProfile& profile,
                       std::size_t window_size,
                       std::size_t stride,
                       double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");

  DetectionReport report;
  report.window_size = window_size;
  report.threshold = threshold;
  report.scores = windowed_scores(trace, profile, window_size, stride);

  std::set<std::string> unusual;
  for (const PacketRecord& pkt : trace) {
    const auto it = profile.counts.find(pkt.protocol);
    if (it == profile.counts.end() || it->second == 0) unusual.insert(pkt.protocol);
  }
  report.unusual_protocols.assign(unusual.begin(), unusual.end());

  bool exceeded = false;
  for (const WindowScore& score : report.scores)
    if (score.statistic > threshold) exceeded = true;
  report.verdict = exceeded || !report.unusual_protocols.empty();
  return report;
}

double score_percentile(std::vector<double> scores, double percentile) {
  if (scores.empty()) throw std::invalid_argument("cannot take a percentile of no scores");
  if (!(percentile > 0.0) || percentile > 100.0)
    throw std::invalid_argument("percentile must be in (0, 100]");
  std::sort(scores.begin(), scores.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(percentile / 100.0 * static_cast<double>(scores.size())));
  return scores[rank - 1];
}

std::string profile_to_json_text(const ProtocolProfile& profile) {
  ordered_json doc;
  doc["alpha"] = profile.alpha;
  doc["total"] = profile.total;
  doc["counts"] = ordered_json::object();
  for (const auto& [label, count] : profile.counts) doc["counts"][label] = count;
  return doc.dump(2) + "\n";
}

ProtocolProfile profile_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("invalid profile document: ") + err.what());
  }
  if (!doc.is_object()) throw std::runtime_error("invalid profile document: not an object");
  for (const auto& item : doc.items()) {
    if (item.key() != "alpha" && item.key() != "total" && item.key() != "counts")
      throw std::runtime_error("invalid profile document: unknown field \"" + item.key() + "\"");
  }
  if (!doc.contains("alpha") || !doc["alpha"].is_number() || !(doc["alpha"].get<double>() > 0.0))
    throw std::runtime_error("invalid profile document: \"alpha\" must be a number > 0");
  if (!doc.contains("counts") || !doc["counts"].is_object())
    throw std::runtime_error("invalid profile document: \"counts\" must be an object");

  ProtocolProfile profile;
  profile.alpha = doc["alpha"].get<double>();
  std::uint64_t sum = 0;
  for (const auto& item : doc["counts"].items()) {
    if (!item.value().is_number_integer() || item.value().get<std::int64_t>() < 0)
      throw std::runtime_error("invalid profile document: count for \"" + item.key() +
                               "\" must be a non-negative integer");
    const auto count = item.value().get<std::uint64_t>();
    profile.counts[item.key()] = count;
    sum += count;
  }
  if (!doc.contains("total") || !doc["total"].is_number_integer())
    throw std::runtime_error("invalid profile document: \"total\" must be an integer");
  profile.total = doc["total"].get<std::uint64_t>();
  if (profile.total != sum)
    throw std::runtime_error("invalid profile document: \"total\" does not match the count sum");
  return profile;
}

std::string detection_report_to_json_text(const DetectionReport& report) {
  ordered_json doc;
  doc["window_size"] = report.window_size;
  doc["scores"] = ordered_json::array();
  for (const WindowScore& score : report.scores) {
    ordered_json entry;
    entry["start_seq"] = score.start_seq;
    entry["score"] = score.statistic;
    doc["scores"].push_back(std::move(entry));
  }
  doc["unusual_protocols"] = report.unusual_protocols;
  doc["verdict"] = report.verdict;
  doc["threshold"] = report.threshold;
  return doc.dump(2) + "\n";
}

}  // namespace protochan
