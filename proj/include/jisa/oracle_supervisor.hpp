#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "jisa/supervisor.hpp"

namespace jisa {

struct OracleOptions {
  // Off: answers merge requests only (no deletions, trim proposals approved).
  bool situation_awareness = true;
};

// Ground-truth stand-in for the human supervisor. Answers immediately,
// whatever the timeout.
class OracleSupervisor : public Supervisor {
 public:
  OracleSupervisor(Placement truth, OracleOptions options = {});

  // The pieces sit side by side in the edge's direction with the relative
  // rotation they have in truth.
  bool truth_consistent(const EdgeConfig& edge) const;

  // Pieces whose pose disagrees with the cluster's majority alignment to truth.
  std::vector<PieceId> misplaced(std::span<const OccupiedCell> cluster) const;

  // Pieces a frame would put at their true grid cell and rotation (best over
  // grid symmetries).
  int frame_score(std::span<const OccupiedCell> cluster, const TrimFrame& frame) const;

  std::optional<MergeDecision> review_merge(const MergeRequest& request, std::chrono::milliseconds timeout) override;
  std::optional<TrimResponse> review_trim(const TrimProposal& proposal, std::chrono::milliseconds timeout) override;
  void on_progress(const Progress& update) override;
  std::vector<DeletePieces> poll_interventions(std::int64_t step) override;

  int merges_reviewed() const { return merges_reviewed_; }
  int deletions_issued() const { return deletions_issued_; }

 private:
  Placement truth_;
  OracleOptions options_;
  std::deque<DeletePieces> pending_;
  int merges_reviewed_ = 0;
  int deletions_issued_ = 0;
};

}  // namespace jisa
