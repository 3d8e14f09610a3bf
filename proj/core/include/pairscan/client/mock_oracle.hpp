#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pairscan/client/model_client.hpp"
#include "pairscan/random.hpp"
#include "pairscan/records.hpp"
#include "pairscan/vocabulary.hpp"

namespace pairscan::client {

struct OracleNoise {
  double p_drop = 0.0;
  double jitter_sigma = 0.0;  // px, per corner coordinate
  double p_label_flip = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Answers prompts from a sample's ground truth. Pure: every response is a
/// function of (samples, vocabulary, noise, prompt).
class MockOracle {
 public:
  MockOracle(std::vector<SampleRecord> samples, AnomalyVocabulary vocab, OracleNoise noise);

  /// Throws UnknownSample when the trailer is missing or names no sample.
  std::string respond(std::string_view prompt) const;

  /// Pass-1 answer: ground truth after drop, jitter and flip, in that order.
  std::vector<LabeledBox> detections_for(const SampleRecord& sample) const;
  /// Pass-2 answer: label of the GT box of maximal IoU with `crop` (ties to
  /// the earlier box), flipped with p_label_flip. Empty when there is no GT.
  std::string classify(const SampleRecord& sample, const BBox& crop) const;

  const SampleRecord& sample(std::string_view sample_id) const;
  const OracleNoise& noise() const noexcept { return noise_; }

 private:
  std::string other_label(const std::string& label, Rng& rng) const;

  std::vector<SampleRecord> samples_;
  std::map<std::string, std::size_t, std::less<>> index_;
  AnomalyVocabulary vocab_;
  OracleNoise noise_;
};

/// Serves a MockOracle over the native wire protocol: POST /v1/generate,
/// plus GET /v1/stats -> {"requests", "in_flight", "max_in_flight"}.
class MockServer {
 public:
  /// port 0 binds an ephemeral port. Throws InvalidArgument for ports outside
  /// [0, 65535] and Io when binding fails.
  MockServer(std::shared_ptr<const MockOracle> oracle, std::string host = "127.0.0.1", int port = 0,
             std::chrono::milliseconds response_delay = std::chrono::milliseconds(0));
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  int port() const noexcept { return port_; }
  std::string url() const;
  void stop();

  std::size_t requests() const noexcept { return requests_.load(); }
  std::size_t max_in_flight() const noexcept { return max_in_flight_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
  std::chrono::milliseconds delay_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_in_flight_{0};
  std::thread thread_;
};

}  // namespace pairscan::client
