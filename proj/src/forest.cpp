#include "jisa/forest.hpp"

#include <algorithm>
#include <string>

#include "jisa/errors.hpp"

namespace jisa {

Forest::Forest(int piece_count)
    : parent_(piece_count),
      pose_(piece_count),
      members_(piece_count),
      occupancy_(piece_count),
      root_count_(piece_count) {
  for (PieceId id = 0; id < piece_count; ++id) {
    parent_[id] = id;
    members_[id] = {id};
    occupancy_[id].emplace(Cell{0, 0}, id);
  }
}

PieceId Forest::find(PieceId id) const {
  while (parent_[id] != id) id = parent_[id];
  return id;
}

std::vector<PieceId> Forest::roots() const {
  std::vector<PieceId> out;
  out.reserve(root_count_);
  for (PieceId id = 0; id < size(); ++id) {
    if (parent_[id] == id) out.push_back(id);
  }
  return out;
}

std::vector<OccupiedCell> Forest::occupancy(PieceId root) const {
  std::vector<OccupiedCell> out;
  out.reserve(members_[root].size());
  for (PieceId m : members_[root]) out.push_back({pose_[m].cell, m, pose_[m].rot});
  std::sort(out.begin(), out.end(), [](const OccupiedCell& a, const OccupiedCell& b) { return a.cell < b.cell; });
  return out;
}

std::optional<PieceId> Forest::piece_at(PieceId root, Cell cell) const {
  const auto& occ = occupancy_[root];
  if (auto it = occ.find(cell); it != occ.end()) return it->second;
  return std::nullopt;
}

MergeCheck Forest::plan_merge(const EdgeConfig& edge, TentativeMerge* out) const {
  const PieceId root_i = find(edge.i);
  const PieceId root_j = find(edge.j);
  if (root_i == root_j) return MergeCheck::same_root;

  const auto size_i = members_[root_i].size();
  const auto size_j = members_[root_j].size();
  const bool keep_i = size_i > size_j || (size_i == size_j && root_i < root_j);

  // In the edge frame the left piece sits at (0,0) and the right one at (0,1).
  const PieceId anchor = keep_i ? edge.i : edge.j;
  const PieceId mover = keep_i ? edge.j : edge.i;
  const Rotation anchor_frame_rot = keep_i ? edge.rot_i : edge.rot_j;
  const Rotation mover_frame_rot = keep_i ? edge.rot_j : edge.rot_i;
  const Cell anchor_to_mover = keep_i ? Cell{0, 1} : Cell{0, -1};

  const Rotation frame_to_kept = pose_[anchor].rot - anchor_frame_rot;
  const Cell mover_target = pose_[anchor].cell + rotate_offset(anchor_to_mover, frame_to_kept);
  const Rotation delta = (mover_frame_rot + frame_to_kept) - pose_[mover].rot;

  const PieceId keep_root = keep_i ? root_i : root_j;
  const PieceId moved_root = keep_i ? root_j : root_i;
  const auto& kept_occ = occupancy_[keep_root];

  TentativeMerge merge;
  merge.edge = edge;
  merge.keep_root = keep_root;
  merge.moved_root = moved_root;
  merge.delta = delta;
  merge.forest_version = version_;
  merge.moved.reserve(members_[moved_root].size());
  for (PieceId m : members_[moved_root]) {
    const Cell target = mover_target + rotate_offset(pose_[m].cell - pose_[mover].cell, delta);
    if (kept_occ.contains(target)) return MergeCheck::collision;
    merge.moved.push_back({m, PiecePose{target, pose_[m].rot + delta}});
  }
  if (out != nullptr) *out = std::move(merge);
  return MergeCheck::ok;
}

std::vector<OccupiedCell> Forest::union_occupancy(const TentativeMerge& merge) const {
  std::vector<OccupiedCell> out = occupancy(merge.keep_root);
  for (const auto& [id, p] : merge.moved) out.push_back({p.cell, id, p.rot});
  std::sort(out.begin(), out.end(), [](const OccupiedCell& a, const OccupiedCell& b) { return a.cell < b.cell; });
  return out;
}

void Forest::commit(const TentativeMerge& merge) {
  if (merge.forest_version != version_) throw InvariantError("stale tentative merge");
  if (parent_[merge.keep_root] != merge.keep_root || parent_[merge.moved_root] != merge.moved_root ||
      merge.keep_root == merge.moved_root) {
    throw InvariantError("tentative merge references non-root clusters");
  }
  auto& occ = occupancy_[merge.keep_root];
  auto& mem = members_[merge.keep_root];
  for (const auto& [id, p] : merge.moved) {
    if (!occ.emplace(p.cell, id).second) throw InvariantError("merge collides with kept cluster");
    pose_[id] = p;
    parent_[id] = merge.keep_root;
    mem.push_back(id);
  }
  members_[merge.moved_root].clear();
  occupancy_[merge.moved_root].clear();
  --root_count_;
  ++version_;
}

void Forest::remove(std::span<const PieceId> ids) {
  for (PieceId id : ids) {
    if (id < 0 || id >= size()) throw InputError("unknown piece id " + std::to_string(id));
  }
  std::vector<char> removing(parent_.size(), 0);
  std::vector<PieceId> touched_roots;
  for (PieceId id : ids) {
    removing[id] = 1;
    touched_roots.push_back(find(id));
  }
  std::sort(touched_roots.begin(), touched_roots.end());
  touched_roots.erase(std::unique(touched_roots.begin(), touched_roots.end()), touched_roots.end());

  for (PieceId root : touched_roots) {
    std::vector<PieceId> kept;
    for (PieceId m : members_[root]) {
      if (!removing[m]) kept.push_back(m);
    }
    std::vector<PieceId> old_members = std::move(members_[root]);
    members_[root].clear();
    occupancy_[root].clear();
    for (PieceId m : old_members) {
      if (!removing[m]) continue;
      parent_[m] = m;
      pose_[m] = PiecePose{};
      members_[m] = {m};
      occupancy_[m] = {{Cell{0, 0}, m}};
    }
    if (kept.empty()) continue;
    const PieceId new_root = removing[root] ? *std::min_element(kept.begin(), kept.end()) : root;
    auto& occ = occupancy_[new_root];
    occ.clear();
    for (PieceId m : kept) {
      parent_[m] = new_root;
      occ.emplace(pose_[m].cell, m);
    }
    members_[new_root] = std::move(kept);
  }
  root_count_ = 0;
  for (PieceId id = 0; id < size(); ++id) root_count_ += parent_[id] == id;
  ++version_;
}

void Forest::check_invariants() const {
  int roots = 0;
  std::size_t occupied = 0;
  std::vector<int> seen(parent_.size(), 0);
  for (PieceId r = 0; r < size(); ++r) {
    if (parent_[r] != r) {
      if (!members_[r].empty() || !occupancy_[r].empty()) throw InvariantError("non-root owns cluster data");
      continue;
    }
    ++roots;
    if (members_[r].size() != occupancy_[r].size()) throw InvariantError("occupancy/member count mismatch");
    for (PieceId m : members_[r]) {
      if (find(m) != r) throw InvariantError("member not under its root");
      if (++seen[m] > 1) throw InvariantError("piece in two clusters");
      auto it = occupancy_[r].find(pose_[m].cell);
      if (it == occupancy_[r].end() || it->second != m) throw InvariantError("pose disagrees with occupancy");
    }
    occupied += occupancy_[r].size();
  }
  if (roots != root_count_) throw InvariantError("root count out of date");
  if (occupied != parent_.size()) throw InvariantError("pieces not conserved");
}

}  // namespace jisa
