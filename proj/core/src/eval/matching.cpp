#include "pairscan/eval/matching.hpp"

#include <cmath>
#include <limits>

#include "pairscan/error.hpp"

namespace pairscan::eval {

std::string_view to_string(ConditionVariant v) noexcept {
  return v == ConditionVariant::BboxOnly ? "bbox_only" : "bbox_label";
}

void EvalCondition::validate() const {
  require(std::isfinite(iou_threshold) && iou_threshold > 0.0 && iou_threshold <= 1.0,
          ErrorKind::InvalidArgument, "IoU threshold must be in (0, 1]");
}

bool admissible(const LabeledBox& pred, const LabeledBox& gt, const EvalCondition& cond) noexcept {
  if (cond.variant == ConditionVariant::BboxLabel && pred.label() != gt.label()) return false;
  return iou(pred.bbox(), gt.bbox()) >= cond.iou_threshold;
}

namespace {

constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

struct Kuhn {
  const std::vector<std::vector<std::size_t>>& adj;
  std::vector<std::size_t>& gt_owner;
  std::vector<char> visited;

  bool augment(std::size_t p) {
    for (const std::size_t g : adj[p]) {
      if (visited[g]) continue;
      visited[g] = 1;
      if (gt_owner[g] == kUnmatched || augment(gt_owner[g])) {
        gt_owner[g] = p;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

SampleMatch match_sample(std::span<const LabeledBox> preds, std::span<const LabeledBox> gts,
                         const EvalCondition& cond) {
  cond.validate();
  std::vector<std::vector<std::size_t>> adj(preds.size());
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (admissible(preds[p], gts[g], cond)) adj[p].push_back(g);
    }
  }
  std::vector<std::size_t> gt_owner(gts.size(), kUnmatched);
  Kuhn k{adj, gt_owner, {}};
  for (std::size_t p = 0; p < preds.size(); ++p) {
    k.visited.assign(gts.size(), 0);
    k.augment(p);
  }

  SampleMatch out;
  std::vector<std::size_t> pred_to_gt(preds.size(), kUnmatched);
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (gt_owner[g] != kUnmatched) pred_to_gt[gt_owner[g]] = g;
  }
  for (std::size_t p = 0; p < preds.size(); ++p) {
    if (pred_to_gt[p] == kUnmatched) continue;
    out.pairs.push_back({p, pred_to_gt[p], iou(preds[p].bbox(), gts[pred_to_gt[p]].bbox())});
  }
  out.counts.tp = out.pairs.size();
  out.counts.fp = preds.size() - out.counts.tp;
  out.counts.fn = gts.size() - out.counts.tp;
  return out;
}

}  // namespace pairscan::eval
