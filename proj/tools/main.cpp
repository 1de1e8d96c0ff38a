// Command-line front end: encode payloads as protocol sequences, run the
// send -> channel -> receive pipeline from a config file, profile traces
// and score them against a baseline. Reports go to stdout (or a file) as
// JSON; human summaries go to stderr so stdout stays machine-readable.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "protochan/channel.hpp"
#include "protochan/codec.hpp"
#include "protochan/detector.hpp"
#include "protochan/textcodec.hpp"
#include "protochan/trace.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace protochan;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Empty path means stdout.
void write_text_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<PacketRecord> load_trace(const std::string& path, bool lax) {
  TraceReadOptions options;
  options.strict = !lax;
  options.on_warning = [](std::size_t line_number, const std::string& message) {
    std::cerr << "warning: line " << line_number << ": " << message << "\n";
  };
  return read_trace(std::filesystem::path(path), options);
}

BitString parse_bits(std::string_view text) {
  BitString bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0')
      bits.push_back(0);
    else if (c == '1')
      bits.push_back(1);
    else
      throw std::runtime_error("bit strings may only contain '0' and '1'");
  }
  return bits;
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string joined;
  for (const std::string& label : labels) {
    if (!joined.empty()) joined += ", ";
    joined += label;
  }
  return joined;
}

// --- encode ---------------------------------------------------------------

int run_encode(bool have_message, const std::string& message, bool have_bits,
               const std::string& bits_text, const std::vector<std::string>& labels,
               const std::string& order_text) {
  if (!have_message && !have_bits)
    throw std::runtime_error("encode needs --message or --bits");
  const auto order = parse_bit_order(order_text);
  if (!order) throw std::runtime_error("--order must be msb_first or lsb_first");

  const ProtocolAlphabet alphabet{labels};
  const BitString bits =
      have_message ? encode_text(message, alphabet.bits_per_symbol()) : parse_bits(bits_text);
  const std::vector<std::string> sequence = encode_bits(bits, alphabet, *order);

  for (const std::string& label : sequence) std::cout << label << "\n";
  std::cerr << "packets: " << sequence.size() << "\n"
            << "bits per symbol: " << alphabet.bits_per_symbol() << "\n";
  return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulatePlan {
  std::string message;
  std::vector<std::string> labels;
  BitOrder order = BitOrder::MsbFirst;
  std::string src = "sender";
  std::string dst = "receiver";
  ChannelConfig channel;  // defaults are the identity channel
  bool drop_more_fragments = false;
  std::optional<std::string> dst_filter;
  std::string trace_path;
  std::string report_path;  // empty = stdout
};

[[noreturn]] void config_error(const std::string& field, const std::string& reason) {
  throw std::runtime_error("config field \"" + field + "\": " + reason);
}

const json* find_field(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void reject_unknown_keys(const json& obj, const std::string& prefix,
                         std::initializer_list<std::string_view> known) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw std::runtime_error("config: unknown key \"" + prefix + item.key() + "\"");
  }
}

std::string require_string(const json& obj, const std::string& key, const std::string& field) {
  const json* value = find_field(obj, key);
  if (!value || !value->is_string()) config_error(field, "must be a string");
  return value->get<std::string>();
}

double number_or(const json& obj, const std::string& key, const std::string& field,
                 double fallback) {
  const json* value = find_field(obj, key);
  if (!value) return fallback;
  if (!value->is_number()) config_error(field, "must be a number");
  return value->get<double>();
}

SimulatePlan parse_simulate_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("config: ") + err.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config: top level must be an object");
  reject_unknown_keys(doc, "",
                      {"message", "alphabet", "bit_order", "src", "dst", "channel", "receiver",
                       "output"});

  SimulatePlan plan;
  plan.message = require_string(doc, "message", "message");

  const json* alphabet = find_field(doc, "alphabet");
  if (!alphabet || !alphabet->is_array())
    config_error("alphabet", "must be an array of protocol labels");
  for (const auto& entry : *alphabet) {
    if (!entry.is_string()) config_error("alphabet", "must contain only strings");
    plan.labels.push_back(entry.get<std::string>());
  }

  if (const json* order = find_field(doc, "bit_order")) {
    if (!order->is_string()) config_error("bit_order", "must be a string");
    const auto parsed = parse_bit_order(order->get<std::string>());
    if (!parsed) config_error("bit_order", "must be \"msb_first\" or \"lsb_first\"");
    plan.order = *parsed;
  }
  if (find_field(doc, "src")) plan.src = require_string(doc, "src", "src");
  if (find_field(doc, "dst")) plan.dst = require_string(doc, "dst", "dst");

  if (const json* channel = find_field(doc, "channel")) {
    if (!channel->is_object()) config_error("channel", "must be an object");
    reject_unknown_keys(*channel, "channel.",
                        {"loss_prob", "frag_prob", "benign_rate", "benign_distribution",
                         "interval", "seed"});
    plan.channel.loss_prob = number_or(*channel, "loss_prob", "channel.loss_prob", 0.0);
    plan.channel.frag_prob = number_or(*channel, "frag_prob", "channel.frag_prob", 0.0);
    plan.channel.benign_rate = number_or(*channel, "benign_rate", "channel.benign_rate", 0.0);
    plan.channel.interval = number_or(*channel, "interval", "channel.interval", 1.0);
    if (const json* seed = find_field(*channel, "seed")) {
      if (!seed->is_number_integer() && !seed->is_number_unsigned())
        config_error("channel.seed", "must be a non-negative integer");
      if (seed->is_number_integer() && seed->get<std::int64_t>() < 0)
        config_error("channel.seed", "must be a non-negative integer");
      plan.channel.seed = seed->get<std::uint64_t>();
    }
    if (const json* dist = find_field(*channel, "benign_distribution")) {
      if (!dist->is_object())
        config_error("channel.benign_distribution", "must map labels to weights");
      for (const auto& item : dist->items()) {
        if (!item.value().is_number())
          config_error("channel.benign_distribution", "weights must be numbers");
        plan.channel.benign_distribution[item.key()] = item.value().get<double>();
      }
    }
  }

  if (const json* receiver = find_field(doc, "receiver")) {
    if (!receiver->is_object()) config_error("receiver", "must be an object");
    reject_unknown_keys(*receiver, "receiver.", {"drop_more_fragments", "dst_filter"});
    if (const json* drop = find_field(*receiver, "drop_more_fragments")) {
      if (!drop->is_boolean()) config_error("receiver.drop_more_fragments", "must be a boolean");
      plan.drop_more_fragments = drop->get<bool>();
    }
    if (find_field(*receiver, "dst_filter"))
      plan.dst_filter = require_string(*receiver, "dst_filter", "receiver.dst_filter");
  }

  const json* output = find_field(doc, "output");
  if (!output || !output->is_object())
    config_error("output", "must be an object with a \"trace\" path");
  reject_unknown_keys(*output, "output.", {"trace", "report"});
  plan.trace_path = require_string(*output, "trace", "output.trace");
  if (find_field(*output, "report"))
    plan.report_path = require_string(*output, "report", "output.report");

  return plan;
}

int run_simulate(const std::string& config_path) {
  const SimulatePlan plan = parse_simulate_config(slurp(config_path));
  const ProtocolAlphabet alphabet{plan.labels};
  plan.channel.validate();

  const auto sent =
      send_message(plan.message, alphabet, plan.order, plan.channel.interval, plan.src, plan.dst);
  const auto observed = channel_transmit(sent, plan.channel);
  const ReceiverConfig rcfg{alphabet, plan.order, plan.drop_more_fragments, plan.dst_filter};
  const ReceiveReport report = receive(observed, rcfg);

  write_trace(observed, std::filesystem::path(plan.trace_path));

  ordered_json doc;
  doc["seed"] = plan.channel.seed;
  doc["text"] = report.text;
  doc["parity_failures"] = report.parity_failures;
  doc["missing_eot"] = report.missing_eot;
  doc["consumed_packets"] = report.consumed_packets;
  doc["desync_suspected"] = report.desync_suspected;
  write_text_output(plan.report_path, doc.dump(2) + "\n");

  std::cerr << "sent " << sent.size() << " covert packets, observed " << observed.size()
            << "; decoded \"" << report.text << "\"; desync suspected: "
            << (report.desync_suspected ? "yes" : "no") << "\n";
  return 0;
}

// --- profile ----------------------------------------------------------------

int run_profile(const std::string& trace_path, double alpha, const std::string& output,
                bool lax) {
  const auto trace = load_trace(trace_path, lax);
  const ProtocolProfile profile = baseline_profile(trace, alpha);
  write_text_output(output, profile_to_json_text(profile));
  std::cerr << "profiled " << profile.total << " packets across " << profile.counts.size()
            << " protocols\n";
  return 0;
}

// --- detect -----------------------------------------------------------------

int run_detect(const std::string& trace_path, const std::string& baseline_path,
               std::size_t window, std::size_t stride, bool have_threshold, double threshold,
               const std::string& output, bool lax) {
  const auto trace = load_trace(trace_path, lax);
  const ProtocolProfile profile = profile_from_json_text(slurp(baseline_path));

  bool calibrated = false;
  if (!have_threshold) {
    // Nearest-rank 99th percentile of this trace's own window scores,
    // clamped away from zero because a threshold must be positive.
    const auto scores = windowed_scores(trace, profile, window, stride);
    std::vector<double> values;
    values.reserve(scores.size());
    for (const WindowScore& score : scores) values.push_back(score.statistic);
    threshold = std::max(score_percentile(values, 99.0), 1e-9);
    calibrated = true;
  }

  const DetectionReport report = detect(trace, profile, window, stride, threshold);
  write_text_output(output, detection_report_to_json_text(report));

  double max_score = 0.0;
  for (const WindowScore& score : report.scores)
    max_score = std::max(max_score, score.statistic);
  std::cerr << "windows: " << report.scores.size() << ", max score: " << max_score
            << ", threshold: " << threshold
            << (calibrated ? " (99th percentile of this trace)" : "") << ", unusual protocols: "
            << (report.unusual_protocols.empty() ? "none" : join_labels(report.unusual_protocols))
            << ", verdict: " << (report.verdict ? "channel suspected" : "no channel suspected")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Protocol channel toolkit: encode payloads as protocol sequences, simulate a "
      "lossy channel end to end, profile traces and score them for anomalies."};
  app.require_subcommand(1);

  auto* encode =
      app.add_subcommand("encode", "Encode a message or raw bit string as a protocol sequence");
  std::string message;
  std::string bits_text;
  std::vector<std::string> labels;
  std::string order_text = "msb_first";
  auto* message_opt = encode->add_option("--message,-m", message, "Text message to encode");
  auto* bits_opt = encode->add_option("--bits,-b", bits_text, "Raw bit string, e.g. 0011");
  encode
      ->add_option("--alphabet,-a", labels,
                   "Comma-separated protocol labels; order defines the bit patterns")
      ->required()
      ->delimiter(',');
  encode->add_option("--order,-o", order_text, "Bit order: msb_first or lsb_first")
      ->capture_default_str();
  message_opt->excludes(bits_opt);

  auto* simulate = app.add_subcommand(
      "simulate", "Run send -> channel -> receive from a JSON config; writes trace and report");
  std::string config_path;
  simulate->add_option("config", config_path, "Experiment config file (JSON)")->required();

  auto* profile_cmd =
      app.add_subcommand("profile", "Build a per-protocol frequency profile from a trace");
  std::string profile_trace;
  double alpha = 1.0;
  std::string profile_output;
  bool profile_lax = false;
  profile_cmd->add_option("--trace,-t", profile_trace, "Trace file (JSON Lines)")->required();
  profile_cmd->add_option("--alpha", alpha, "Smoothing pseudocount (> 0)")->capture_default_str();
  profile_cmd->add_option("--output,-o", profile_output, "Profile file (default: stdout)");
  profile_cmd->add_flag("--lax", profile_lax, "Warn on unknown trace fields instead of failing");

  auto* detect_cmd = app.add_subcommand(
      "detect", "Score a trace against a baseline profile and report a verdict");
  std::string detect_trace;
  std::string baseline_path;
  std::size_t window = 64;
  std::size_t stride = 16;
  double threshold = 0.0;
  std::string detect_output;
  bool detect_lax = false;
  detect_cmd->add_option("--trace,-t", detect_trace, "Trace file (JSON Lines)")->required();
  detect_cmd->add_option("--baseline,-b", baseline_path, "Baseline profile file (from `profile`)")
      ->required();
  detect_cmd->add_option("--window,-w", window, "Window size in packets")->capture_default_str();
  detect_cmd->add_option("--stride,-s", stride, "Window stride in packets")
      ->capture_default_str();
  auto* threshold_opt = detect_cmd->add_option(
      "--threshold", threshold,
      "Score threshold (default: 99th percentile of this trace's own window scores)");
  detect_cmd->add_option("--output,-o", detect_output, "Report file (default: stdout)");
  detect_cmd->add_flag("--lax", detect_lax, "Warn on unknown trace fields instead of failing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*encode)
      return run_encode(message_opt->count() > 0, message, bits_opt->count() > 0, bits_text,
                        labels, order_text);
    if (*simulate) return run_simulate(config_path);
    if (*profile_cmd) return run_profile(profile_trace, alpha, profile_output, profile_lax);
    if (*detect_cmd)
      return run_detect(detect_trace, baseline_path, window, stride, threshold_opt->count() > 0,
                        threshold, detect_output, detect_lax);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
