#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "jisa/compatibility.hpp"

namespace jisa {

enum class DiscardReason { same_root, collision };

struct UnusedEdge {
  EdgeConfig edge;
  DiscardReason reason;
};

// Edges in ascending CompatibilityTable::key_less order. Each physical
// adjacency is queued once, as its config with i < j.
//
// Popped edges can be pushed back (restore_incident / requeue); they then
// come out again ahead of every edge never popped, in key order.
class EdgeQueue {
 public:
  explicit EdgeQueue(const CompatibilityTable& table);

  std::optional<EdgeConfig> pop();
  bool empty() const { return restored_.empty() && cursor_ >= order_.size(); }
  std::size_t size() const { return restored_.size() + (order_.size() - cursor_); }

  void discard(const EdgeConfig& edge, DiscardReason reason) { unused_.push_back({edge, reason}); }
  const std::vector<UnusedEdge>& unused() const { return unused_; }

  // Pushes back every already-popped edge touching one of `pieces` unless
  // `skip` rejects it, and drops those pieces' entries from the unused list.
  std::size_t restore_incident(std::span<const PieceId> pieces,
                               const std::function<bool(const EdgeConfig&)>& skip);

  // Pushes back every already-popped edge accepted by `take` and drops the
  // accepted ones from the unused list.
  std::size_t requeue(const std::function<bool(const EdgeConfig&)>& take);

  static EdgeConfig canonical(const EdgeConfig& e) { return e.i < e.j ? e : mirrored(e); }

 private:
  void push_back_rank(std::uint32_t rank);

  const CompatibilityTable* table_;
  std::vector<std::uint32_t> order_;  // canonical table slots, ascending key
  std::vector<std::int32_t> rank_of_;  // table slot -> index into order_
  std::size_t cursor_ = 0;
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> restored_;
  std::vector<char> in_restored_;
  std::vector<UnusedEdge> unused_;
};

}  // namespace jisa
