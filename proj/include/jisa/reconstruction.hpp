#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "jisa/compatibility.hpp"
#include "jisa/edge_queue.hpp"
#include "jisa/forest.hpp"
#include "jisa/trim_fill.hpp"

namespace jisa {

enum class StepKind {
  edge_popped,
  edge_discarded,
  merge_tentative,
  merge_committed,
  merge_declined,
  pieces_removed,
  queue_recycled,
  trim_proposed,
  trim_final,
  fill_placed,
};

const char* to_string(StepKind kind);
const char* to_string(DiscardReason reason);

struct StepEvent {
  StepKind kind = StepKind::edge_popped;
  std::int64_t step = 0;
  std::optional<EdgeConfig> edge;
  std::optional<DiscardReason> reason;
  std::vector<PieceId> pieces;
  std::optional<OccupiedCell> placed;
  std::optional<TrimFrame> frame;
  std::int64_t count = 0;  // restored / recycled edge count, or frame piece count
};

using StepObserver = std::function<void(const StepEvent&)>;

struct MergeCandidate {
  EdgeConfig edge;
  TentativeMerge merge;
};

// Greedy tree-based reconstruction: owns the forest and the edge queue and
// reports every state change to an observer.
class Reconstruction {
 public:
  explicit Reconstruction(const CompatibilityTable& table, StepObserver observer = {});

  const Forest& forest() const { return forest_; }
  const EdgeQueue& queue() const { return queue_; }
  const CompatibilityTable& table() const { return *table_; }

  void set_step(std::int64_t step) { step_ = step; }
  std::int64_t step() const { return step_; }
  bool complete() const { return forest_.root_count() == 1; }

  // Pops edges until one joins two clusters without collision. Rejected
  // edges go to the unused list. nullopt when the queue runs dry.
  std::optional<MergeCandidate> next_edge();

  // Re-plans the candidate against the current forest; nullopt (and the
  // edge discarded) if it no longer fits.
  std::optional<TentativeMerge> try_merge(const MergeCandidate& candidate);

  void commit(const TentativeMerge& merge);
  // Supervisor rejected the merge; the edge is consumed.
  void decline(const EdgeConfig& edge);

  // Splits the ids out as singletons and puts their edges back in the queue.
  // Committed edges that tied a removed piece to a kept one are vetoed and
  // never return. Throws InputError on unknown ids.
  void remove_pieces(std::span<const PieceId> ids);

  // Called when the queue is dry but clusters remain: pushes back every
  // popped, non-vetoed edge between different clusters (declined ones too).
  // Returns the number of edges requeued.
  std::size_t recycle();

  int commit_count() const { return commits_; }
  const std::vector<EdgeConfig>& tree_edges() const { return tree_edges_; }
  const std::vector<EdgeConfig>& declined_edges() const { return declined_; }
  bool vetoed(const EdgeConfig& edge) const { return vetoed_.contains(EdgeQueue::canonical(edge)); }

 private:
  void emit(StepEvent event) const;

  const CompatibilityTable* table_;
  StepObserver observer_;
  Forest forest_;
  EdgeQueue queue_;
  std::int64_t step_ = 0;
  int commits_ = 0;
  std::vector<EdgeConfig> tree_edges_;
  std::vector<EdgeConfig> declined_;
  std::set<EdgeConfig> vetoed_;
};

}  // namespace jisa
