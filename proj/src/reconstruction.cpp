#include "jisa/reconstruction.hpp"

#include <algorithm>
#include <unordered_set>

#include "jisa/errors.hpp"

namespace jisa {

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::edge_popped: return "edge-popped";
    case StepKind::edge_discarded: return "edge-discarded";
    case StepKind::merge_tentative: return "merge-tentative";
    case StepKind::merge_committed: return "merge-committed";
    case StepKind::merge_declined: return "merge-declined";
    case StepKind::pieces_removed: return "pieces-removed";
    case StepKind::queue_recycled: return "queue-recycled";
    case StepKind::trim_proposed: return "trim-proposed";
    case StepKind::trim_final: return "trim-final";
    case StepKind::fill_placed: return "fill-placed";
  }
  return "unknown";
}

const char* to_string(DiscardReason reason) {
  return reason == DiscardReason::same_root ? "same-root" : "collision";
}

Reconstruction::Reconstruction(const CompatibilityTable& table, StepObserver observer)
    : table_(&table), observer_(std::move(observer)), forest_(table.piece_count()), queue_(table) {}

void Reconstruction::emit(StepEvent event) const {
  if (!observer_) return;
  event.step = step_;
  observer_(event);
}

std::optional<MergeCandidate> Reconstruction::next_edge() {
  while (auto edge = queue_.pop()) {
    emit({.kind = StepKind::edge_popped, .edge = *edge});
    MergeCandidate candidate{*edge, {}};
    const MergeCheck check = forest_.plan_merge(*edge, &candidate.merge);
    if (check == MergeCheck::ok) return candidate;
    const auto reason = check == MergeCheck::same_root ? DiscardReason::same_root : DiscardReason::collision;
    queue_.discard(*edge, reason);
    emit({.kind = StepKind::edge_discarded, .edge = *edge, .reason = reason});
  }
  return std::nullopt;
}

std::optional<TentativeMerge> Reconstruction::try_merge(const MergeCandidate& candidate) {
  TentativeMerge merge;
  const MergeCheck check = forest_.plan_merge(candidate.edge, &merge);
  if (check != MergeCheck::ok) {
    const auto reason = check == MergeCheck::same_root ? DiscardReason::same_root : DiscardReason::collision;
    queue_.discard(candidate.edge, reason);
    emit({.kind = StepKind::edge_discarded, .edge = candidate.edge, .reason = reason});
    return std::nullopt;
  }
  emit({.kind = StepKind::merge_tentative, .edge = candidate.edge});
  return merge;
}

void Reconstruction::commit(const TentativeMerge& merge) {
  forest_.commit(merge);
  ++commits_;
  tree_edges_.push_back(merge.edge);
  emit({.kind = StepKind::merge_committed, .edge = merge.edge});
}

void Reconstruction::decline(const EdgeConfig& edge) {
  declined_.push_back(edge);
  emit({.kind = StepKind::merge_declined, .edge = edge});
}

void Reconstruction::remove_pieces(std::span<const PieceId> ids) {
  for (PieceId id : ids) {
    if (id < 0 || id >= forest_.size()) throw InputError("unknown piece id " + std::to_string(id));
  }
  const std::unordered_set<PieceId> removing(ids.begin(), ids.end());
  auto touches = [&](const EdgeConfig& e) { return removing.contains(e.i) || removing.contains(e.j); };

  std::erase_if(tree_edges_, [&](const EdgeConfig& e) {
    if (!touches(e)) return false;
    if (removing.contains(e.i) != removing.contains(e.j)) vetoed_.insert(EdgeQueue::canonical(e));
    return true;
  });
  std::erase_if(declined_, touches);

  forest_.remove(ids);
  const auto restored = queue_.restore_incident(ids, [&](const EdgeConfig& e) { return vetoed_.contains(e); });

  std::vector<PieceId> sorted(removing.begin(), removing.end());
  std::sort(sorted.begin(), sorted.end());
  emit({.kind = StepKind::pieces_removed, .pieces = std::move(sorted), .count = static_cast<std::int64_t>(restored)});
}

std::size_t Reconstruction::recycle() {
  const auto n = queue_.requeue([&](const EdgeConfig& e) {
    return !vetoed_.contains(e) && forest_.find(e.i) != forest_.find(e.j);
  });
  declined_.clear();
  emit({.kind = StepKind::queue_recycled, .count = static_cast<std::int64_t>(n)});
  return n;
}

}  // namespace jisa
