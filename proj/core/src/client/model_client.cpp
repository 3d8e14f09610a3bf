#include "pairscan/client/model_client.hpp"

#include <httplib.h>

#include <semaphore>
#include <thread>

#include "pairscan/error.hpp"

namespace pairscan::client {

namespace {

constexpr std::ptrdiff_t kMaxInFlight = 1024;

struct Endpoint {
  std::string origin;
  std::string path;
};

Endpoint split_endpoint(const std::string& url, const std::string& default_path) {
  const auto scheme = url.find("://");
  require(scheme != std::string::npos, ErrorKind::InvalidArgument,
          "endpoint must be an http(s) URL: " + url);
  const std::string proto = url.substr(0, scheme);
  require(proto == "http" || proto == "https", ErrorKind::InvalidArgument,
          "unsupported endpoint scheme: " + proto);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos || slash + 1 == url.size()) {
    return {url.substr(0, slash), default_path};
  }
  return {url.substr(0, slash), url.substr(slash)};
}

bool transient_status(int status) { return status == 429 || (status >= 500 && status <= 599); }

}  // namespace

void ClientConfig::validate() const {
  require(!endpoint.empty(), ErrorKind::InvalidArgument, "endpoint is not configured");
  require(timeout.count() > 0, ErrorKind::InvalidArgument, "timeout must be positive");
  require(max_retries >= 0, ErrorKind::InvalidArgument, "max_retries must be >= 0");
  require(backoff_base.count() >= 0, ErrorKind::InvalidArgument, "backoff must be >= 0");
  require(max_in_flight >= 1 && max_in_flight <= static_cast<std::size_t>(kMaxInFlight),
          ErrorKind::InvalidArgument, "max_in_flight must be in [1, 1024]");
}

struct HttpModelClient::State {
  explicit State(std::ptrdiff_t n) : slots(n) {}
  std::counting_semaphore<kMaxInFlight> slots;
};

HttpModelClient::HttpModelClient(ClientConfig config) : config_(std::move(config)) {
  config_.validate();
  auto ep = split_endpoint(config_.endpoint, config_.wire.path);
  origin_ = std::move(ep.origin);
  path_ = std::move(ep.path);
  state_ = std::make_unique<State>(static_cast<std::ptrdiff_t>(config_.max_in_flight));
}

HttpModelClient::~HttpModelClient() = default;

ModelResponse HttpModelClient::send(const ModelRequest& request) {
  require(!trim(request.prompt).empty(), ErrorKind::InvalidArgument, "prompt must be non-empty");
  const std::string body = encode_request(request, config_.wire).dump();

  httplib::Headers headers;
  if (config_.bearer_token) headers.emplace("Authorization", "Bearer " + *config_.bearer_token);

  std::string last_failure = "no attempt made";
  bool last_timed_out = false;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 1)));

    const auto start = std::chrono::steady_clock::now();
    httplib::Result res;
    {
      state_->slots.acquire();
      httplib::Client http(origin_);
      http.set_connection_timeout(config_.timeout);
      http.set_read_timeout(config_.timeout);
      http.set_write_timeout(config_.timeout);
      res = http.Post(path_, headers, body, "application/json");
      state_->slots.release();
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

    if (!res) {
      const auto err = res.error();
      last_timed_out = err == httplib::Error::ConnectionTimeout ||
                       (err == httplib::Error::Read && elapsed >= config_.timeout * 0.9);
      last_failure = httplib::to_string(err);
      continue;
    }
    if (transient_status(res->status)) {
      last_timed_out = false;
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      fail(ErrorKind::ProtocolError, "HTTP " + std::to_string(res->status) + " from " + origin_ + path_);
    }
    const Json reply = Json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) fail(ErrorKind::ProtocolError, "response body is not JSON");
    return ModelResponse{decode_response_text(reply, config_.wire), elapsed.count()};
  }
  const std::string where = origin_ + path_ + " after " + std::to_string(config_.max_retries + 1) +
                            " attempts: " + last_failure;
  if (last_timed_out) fail(ErrorKind::Timeout, where);
  fail(ErrorKind::ExhaustedRetries, where);
}

}  // namespace pairscan::client
