#include "pairscan/client/mock_oracle.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>

#include "pairscan/error.hpp"

namespace pairscan::client {

void OracleNoise::validate() const {
  const auto prob = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  require(prob(p_drop), ErrorKind::InvalidArgument, "p_drop must be in [0, 1]");
  require(prob(p_label_flip), ErrorKind::InvalidArgument, "p_label_flip must be in [0, 1]");
  require(std::isfinite(jitter_sigma) && jitter_sigma >= 0.0, ErrorKind::InvalidArgument,
          "jitter_sigma must be >= 0");
}

MockOracle::MockOracle(std::vector<SampleRecord> samples, AnomalyVocabulary vocab, OracleNoise noise)
    : samples_(std::move(samples)), vocab_(std::move(vocab)), noise_(noise) {
  noise_.validate();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto [it, inserted] = index_.emplace(samples_[i].sample_id, i);
    require(inserted, ErrorKind::InvalidArgument, "duplicate sample_id " + samples_[i].sample_id);
  }
}

const SampleRecord& MockOracle::sample(std::string_view sample_id) const {
  const auto it = index_.find(sample_id);
  if (it == index_.end()) fail(ErrorKind::UnknownSample, std::string(sample_id));
  return samples_[it->second];
}

std::string MockOracle::other_label(const std::string& label, Rng& rng) const {
  std::vector<std::string> others;
  for (const auto& l : vocab_.labels()) {
    if (l != label) others.push_back(l);
  }
  if (others.empty()) return label;
  return others[rng.index(others.size())];
}

std::vector<LabeledBox> MockOracle::detections_for(const SampleRecord& s) const {
  Rng rng(derive_seed(noise_.seed, s.sample_id));
  std::vector<LabeledBox> kept;
  for (const auto& gt : s.ground_truth) {
    if (!rng.bernoulli(noise_.p_drop)) kept.push_back(gt);
  }
  if (noise_.jitter_sigma > 0.0) {
    for (auto& d : kept) {
      const BBox& b = d.bbox();
      const double ax = b.x1() + rng.normal(0.0, noise_.jitter_sigma);
      const double ay = b.y1() + rng.normal(0.0, noise_.jitter_sigma);
      const double bx = b.x2() + rng.normal(0.0, noise_.jitter_sigma);
      const double by = b.y2() + rng.normal(0.0, noise_.jitter_sigma);
      const double x1 = std::min(ax, bx), x2 = std::max(ax, bx);
      const double y1 = std::min(ay, by), y2 = std::max(ay, by);
      if (BBox::is_valid(x1, y1, x2, y2)) d = LabeledBox(BBox(x1, y1, x2, y2), d.label());
    }
  }
  if (noise_.p_label_flip > 0.0) {
    for (auto& d : kept) {
      if (rng.bernoulli(noise_.p_label_flip)) d = LabeledBox(d.bbox(), other_label(d.label(), rng));
    }
  }
  return kept;
}

std::string MockOracle::classify(const SampleRecord& s, const BBox& crop) const {
  if (s.ground_truth.empty()) return {};
  std::size_t best = 0;
  double best_iou = -1.0;
  for (std::size_t i = 0; i < s.ground_truth.size(); ++i) {
    const double v = iou(s.ground_truth[i].bbox(), crop);
    if (v > best_iou) {
      best_iou = v;
      best = i;
    }
  }
  const std::string& label = s.ground_truth[best].label();
  if (noise_.p_label_flip <= 0.0) return label;
  const std::string key = s.sample_id + "/" + to_json(crop).dump();
  Rng rng(derive_seed(noise_.seed, key));
  return rng.bernoulli(noise_.p_label_flip) ? other_label(label, rng) : label;
}

std::string MockOracle::respond(std::string_view prompt) const {
  const auto trailer = parse_trailer(prompt);
  if (!trailer) fail(ErrorKind::UnknownSample, "prompt carries no sample_id trailer");
  const SampleRecord& s = sample(trailer->sample_id);
  if (trailer->body.starts_with(kClassificationPrefix)) {
    if (!trailer->crop) fail(ErrorKind::ProtocolError, "classification prompt without crop for " + s.sample_id);
    return classify(s, *trailer->crop);
  }
  return detections_to_text(detections_for(s));
}

struct MockServer::Impl {
  httplib::Server server;
};

MockServer::MockServer(std::shared_ptr<const MockOracle> oracle, std::string host, int port,
                       std::chrono::milliseconds response_delay)
    : impl_(std::make_unique<Impl>()), host_(std::move(host)), delay_(response_delay) {
  require(oracle != nullptr, ErrorKind::InvalidArgument, "mock server needs an oracle");
  require(port >= 0 && port <= 65535, ErrorKind::InvalidArgument,
          "port must be in [0, 65535], got " + std::to_string(port));

  auto& srv = impl_->server;
  srv.Post(std::string(kNativePath), [this, oracle](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    const std::size_t now = ++in_flight_;
    for (std::size_t seen = max_in_flight_.load(); now > seen && !max_in_flight_.compare_exchange_weak(seen, now);) {
    }
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
    try {
      const Json body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded()) fail(ErrorKind::ProtocolError, "request body is not JSON");
      const ModelRequest mr = decode_request(body);
      res.set_content(Json{{"text", oracle->respond(mr.prompt)}}.dump(), "application/json");
    } catch (const Error& e) {
      res.status = e.kind() == ErrorKind::UnknownSample ? 404 : 400;
      res.set_content(Json{{"error", e.what()}}.dump(), "application/json");
    }
    --in_flight_;
  });
  srv.Get("/v1/stats", [this](const httplib::Request&, httplib::Response& res) {
    const Json stats{{"requests", requests_.load()},
                     {"in_flight", in_flight_.load()},
                     {"max_in_flight", max_in_flight_.load()}};
    res.set_content(stats.dump(), "application/json");
  });

  if (port == 0) {
    port_ = srv.bind_to_any_port(host_);
    if (port_ < 0) fail(ErrorKind::Io, "cannot bind " + host_);
  } else {
    if (!srv.bind_to_port(host_, port)) fail(ErrorKind::Io, "cannot bind " + host_ + ":" + std::to_string(port));
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  srv.wait_until_ready();
}

MockServer::~MockServer() { stop(); }

std::string MockServer::url() const { return "http://" + host_ + ":" + std::to_string(port_); }

void MockServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace pairscan::client
