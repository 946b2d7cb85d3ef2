#include "jisa/edge_queue.hpp"

#include <algorithm>
#include <unordered_set>

namespace jisa {

EdgeQueue::EdgeQueue(const CompatibilityTable& table) : table_(&table) {
  const int n = table.piece_count();
  struct Keyed {
    double normalized;
    double raw;
    std::uint32_t slot;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(table.config_count() / 2);
  for (PieceId i = 0; i < n; ++i) {
    for (PieceId j = i + 1; j < n; ++j) {
      for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
          const EdgeConfig e{i, j, Rotation(r), Rotation(s)};
          keyed.push_back({table.normalized(e), table.raw(e), static_cast<std::uint32_t>(table.slot(e))});
        }
      }
    }
  }
  // Slot order is lexicographic (i, j, rot_i, rot_j) order.
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.normalized != b.normalized) return a.normalized < b.normalized;
    if (a.raw != b.raw) return a.raw < b.raw;
    return a.slot < b.slot;
  });
  order_.reserve(keyed.size());
  rank_of_.assign(static_cast<std::size_t>(n) * n * 16, -1);
  for (const auto& k : keyed) {
    rank_of_[k.slot] = static_cast<std::int32_t>(order_.size());
    order_.push_back(k.slot);
  }
  in_restored_.assign(order_.size(), 0);
}

std::optional<EdgeConfig> EdgeQueue::pop() {
  // Restored ranks all precede the cursor, so they always come first.
  if (!restored_.empty()) {
    const auto rank = restored_.top();
    restored_.pop();
    in_restored_[rank] = 0;
    return table_->config_at(order_[rank]);
  }
  if (cursor_ < order_.size()) return table_->config_at(order_[cursor_++]);
  return std::nullopt;
}

void EdgeQueue::push_back_rank(std::uint32_t rank) {
  in_restored_[rank] = 1;
  restored_.push(rank);
}

std::size_t EdgeQueue::restore_incident(std::span<const PieceId> pieces,
                                        const std::function<bool(const EdgeConfig&)>& skip) {
  const int n = table_->piece_count();
  std::size_t restored = 0;
  std::unordered_set<PieceId> set(pieces.begin(), pieces.end());
  for (PieceId k : set) {
    for (PieceId y = 0; y < n; ++y) {
      if (y == k) continue;
      // Pairs inside the set are visited from both ends; in_restored_ dedups.
      for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
          const EdgeConfig e = canonical({k, y, Rotation(r), Rotation(s)});
          const auto rank = rank_of_[table_->slot(e)];
          if (static_cast<std::size_t>(rank) >= cursor_ || in_restored_[rank]) continue;
          if (skip && skip(e)) continue;
          push_back_rank(static_cast<std::uint32_t>(rank));
          ++restored;
        }
      }
    }
  }
  std::erase_if(unused_, [&](const UnusedEdge& u) { return set.contains(u.edge.i) || set.contains(u.edge.j); });
  return restored;
}

std::size_t EdgeQueue::requeue(const std::function<bool(const EdgeConfig&)>& take) {
  std::size_t restored = 0;
  for (std::size_t rank = 0; rank < cursor_; ++rank) {
    if (in_restored_[rank]) continue;
    if (!take(table_->config_at(order_[rank]))) continue;
    push_back_rank(static_cast<std::uint32_t>(rank));
    ++restored;
  }
  std::erase_if(unused_, [&](const UnusedEdge& u) { return take(u.edge); });
  return restored;
}

}  // namespace jisa
