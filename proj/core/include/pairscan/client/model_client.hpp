#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include "pairscan/client/protocol.hpp"

namespace pairscan::client {

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  /// Must be safe to call from several threads at once.
  virtual ModelResponse send(const ModelRequest& request) = 0;
};

struct ClientConfig {
  std::string endpoint;  // scheme://host[:port][/path]; a path overrides wire.path
  std::optional<std::string> bearer_token;
  std::chrono::milliseconds timeout{120000};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{500};
  std::size_t max_in_flight = 4;
  WireMapping wire;

  void validate() const;
};

/// JSON-over-HTTP client. Transport errors, 429 and 5xx are retried with
/// exponential backoff; other statuses and undecodable bodies raise
/// ProtocolError at once. Timeout is raised when the last attempt timed out,
/// ExhaustedRetries for any other transient failure.
class HttpModelClient final : public ModelClient {
 public:
  explicit HttpModelClient(ClientConfig config);
  ~HttpModelClient() override;

  ModelResponse send(const ModelRequest& request) override;

  const ClientConfig& config() const noexcept { return config_; }

 private:
  struct State;
  ClientConfig config_;
  std::string origin_;
  std::string path_;
  std::unique_ptr<State> state_;
};

}  // namespace pairscan::client
