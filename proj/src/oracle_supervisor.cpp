#include "jisa/oracle_supervisor.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "jisa/errors.hpp"
#include "jisa/metrics.hpp"

namespace jisa {

OracleSupervisor::OracleSupervisor(Placement truth, OracleOptions options)
    : truth_(std::move(truth)), options_(options) {
  truth_.validate();
}

bool OracleSupervisor::truth_consistent(const EdgeConfig& edge) const {
  const auto& ti = truth_.pieces.at(edge.i);
  const auto& tj = truth_.pieces.at(edge.j);
  const Rotation g = edge.rot_i - ti.rot;
  return edge.rot_j - tj.rot == g && rotate_offset(tj.cell() - ti.cell(), g) == Cell{0, 1};
}

std::vector<PieceId> OracleSupervisor::misplaced(std::span<const OccupiedCell> cluster) const {
  // Alignment: cluster pose = R_g(truth pose) + offset.
  using Alignment = std::tuple<int, int, int>;
  auto alignment_of = [&](const OccupiedCell& oc) {
    const auto& t = truth_.pieces.at(oc.id);
    const Rotation g = oc.rot - t.rot;
    const Cell offset = oc.cell - rotate_offset(t.cell(), g);
    return Alignment{g.quarter_turns(), offset.row, offset.col};
  };
  std::map<Alignment, int> votes;
  for (const auto& oc : cluster) ++votes[alignment_of(oc)];
  if (votes.size() <= 1) return {};
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  std::vector<PieceId> out;
  for (const auto& oc : cluster) {
    if (alignment_of(oc) != best->first) out.push_back(oc.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int OracleSupervisor::frame_score(std::span<const OccupiedCell> cluster, const TrimFrame& frame) const {
  int best = 0;
  for (Rotation g : grid_symmetries(truth_.spec)) {
    const Placement target = rotate_placement(truth_, g);
    int n = 0;
    for (const auto& oc : cluster) {
      if (!frame.contains(oc.cell)) continue;
      const auto& t = target.pieces.at(oc.id);
      n += frame.to_grid(oc.cell) == t.cell() && oc.rot + frame.grid_rotation() == t.rot;
    }
    best = std::max(best, n);
  }
  return best;
}

std::optional<MergeDecision> OracleSupervisor::review_merge(const MergeRequest& request,
                                                            std::chrono::milliseconds) {
  ++merges_reviewed_;
  return truth_consistent(request.edge) ? MergeDecision::approve : MergeDecision::decline;
}

std::optional<TrimResponse> OracleSupervisor::review_trim(const TrimProposal& proposal, std::chrono::milliseconds) {
  TrimResponse response{proposal.request_id, true, std::nullopt};
  if (!options_.situation_awareness) return response;
  const int proposed = frame_score(proposal.cluster, proposal.frame);
  std::optional<TrimFrame> best;
  int best_score = -1;
  for (const auto& f : candidate_frames(proposal.cluster, truth_.spec)) {
    const int s = frame_score(proposal.cluster, f);
    if (s > best_score) {
      best_score = s;
      best = f;
    }
  }
  if (best && best_score > proposed) {
    response.approve = false;
    response.frame = best;
  }
  return response;
}

void OracleSupervisor::on_progress(const Progress& update) {
  if (!options_.situation_awareness || update.cluster.size() < 2) return;
  auto ids = misplaced(update.cluster);
  if (ids.empty()) return;
  ++deletions_issued_;
  pending_.push_back({std::move(ids)});
}

std::vector<DeletePieces> OracleSupervisor::poll_interventions(std::int64_t) {
  std::vector<DeletePieces> out(pending_.begin(), pending_.end());
  pending_.clear();
  return out;
}

}  // namespace jisa
