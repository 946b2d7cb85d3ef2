#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "jisa/compatibility.hpp"
#include "jisa/puzzle.hpp"

namespace jisa {

struct PiecePose {
  Cell cell;
  Rotation rot;

  friend bool operator==(const PiecePose&, const PiecePose&) = default;
};

// Would-be union of two clusters. Holds the new poses of the moved cluster in
// the kept cluster's frame; the forest itself is untouched until commit.
struct TentativeMerge {
  EdgeConfig edge;
  PieceId keep_root = 0;
  PieceId moved_root = 0;
  Rotation delta;  // applied to every moved member
  std::vector<std::pair<PieceId, PiecePose>> moved;
  std::uint64_t forest_version = 0;
};

enum class MergeCheck { ok, same_root, collision };

// Disjoint-set forest over pieces. Each root owns an occupancy map from local
// cells to pieces; every piece stores its pose in its root's frame.
class Forest {
 public:
  Forest() = default;
  explicit Forest(int piece_count);

  int size() const { return static_cast<int>(parent_.size()); }
  int root_count() const { return root_count_; }
  PieceId find(PieceId id) const;
  const PiecePose& pose(PieceId id) const { return pose_[id]; }
  // Members of the cluster rooted at `root`, in insertion order.
  const std::vector<PieceId>& members(PieceId root) const { return members_[root]; }
  int cluster_size(PieceId id) const { return static_cast<int>(members_[find(id)].size()); }
  std::vector<PieceId> roots() const;
  // Occupied cells of a cluster sorted by cell.
  std::vector<OccupiedCell> occupancy(PieceId root) const;
  std::optional<PieceId> piece_at(PieceId root, Cell cell) const;
  std::uint64_t version() const { return version_; }

  // Rigid alignment for `edge`: the smaller cluster moves into the larger
  // one's frame (ties keep the lower root id).
  MergeCheck plan_merge(const EdgeConfig& edge, TentativeMerge* out) const;

  // Union of the two clusters' occupancies as the tentative merge would leave it.
  std::vector<OccupiedCell> union_occupancy(const TentativeMerge& merge) const;

  // Throws InvariantError if the forest changed since the merge was planned.
  void commit(const TentativeMerge& merge);

  // Each id becomes a singleton at (0,0) with rotation 0. The rest of its
  // cluster keeps its geometry, holes included. Throws InputError on unknown ids.
  void remove(std::span<const PieceId> ids);

  // Throws InvariantError if parent/occupancy/pose bookkeeping disagree.
  void check_invariants() const;

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  std::vector<PieceId> parent_;
  std::vector<PiecePose> pose_;
  std::vector<std::vector<PieceId>> members_;
  std::vector<std::unordered_map<Cell, PieceId, CellHash>> occupancy_;
  int root_count_ = 0;
  std::uint64_t version_ = 0;
};

}  // namespace jisa
