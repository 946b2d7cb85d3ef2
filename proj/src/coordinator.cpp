#include "jisa/coordinator.hpp"

#include <algorithm>
#include <unordered_set>

#include "jisa/entropy.hpp"
#include "jisa/errors.hpp"

namespace jisa {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

int count_inside(std::span<const OccupiedCell> occupancy, const TrimFrame& frame) {
  return static_cast<int>(
      std::count_if(occupancy.begin(), occupancy.end(), [&](const OccupiedCell& oc) { return frame.contains(oc.cell); }));
}

}  // namespace

const char* to_string(GateOutcome outcome) {
  switch (outcome) {
    case GateOutcome::approve: return "approve";
    case GateOutcome::decline: return "decline";
    case GateOutcome::timeout: return "timeout";
    case GateOutcome::unavailable: return "unavailable";
  }
  return "unknown";
}

const char* to_string(TrimOutcome outcome) {
  switch (outcome) {
    case TrimOutcome::approve: return "approve";
    case TrimOutcome::edit: return "edit";
    case TrimOutcome::rejected: return "rejected";
    case TrimOutcome::timeout: return "timeout";
    case TrimOutcome::unavailable: return "unavailable";
  }
  return "unknown";
}

bool gate_fires(double entropy_i, double entropy_j, double threshold) {
  return std::min(entropy_i, entropy_j) < threshold;
}

Cell normalize_cells(std::vector<OccupiedCell>& cells) {
  if (cells.empty()) return {};
  Cell lo = cells.front().cell;
  for (const auto& oc : cells) lo = {std::min(lo.row, oc.cell.row), std::min(lo.col, oc.cell.col)};
  for (auto& oc : cells) oc.cell = oc.cell - lo;
  return lo;
}

Coordinator::Coordinator(const CompatibilityTable& table, std::span<const Piece> pieces, const PuzzleSpec& spec,
                         CoordinatorOptions options, Supervisor* supervisor, RecordSink sink)
    : table_(&table), spec_(spec), options_(options), supervisor_(supervisor), sink_(std::move(sink)) {
  if (static_cast<int>(pieces.size()) != table.piece_count() || spec.piece_count() != table.piece_count()) {
    throw InputError("piece count does not match the compatibility table");
  }
  entropy_.resize(pieces.size());
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    for (int q = 0; q < 4; ++q) entropy_[k][q] = glcm_entropy(pieces[k], Rotation(q)).value;
  }
}

void Coordinator::record(const CoordinatorRecord& r) const {
  if (sink_) sink_(r);
}

void Coordinator::apply_interventions(Reconstruction& rec, RunStats& stats) {
  if (!supervisor_) return;
  const Forest& forest = rec.forest();
  for (auto& request : supervisor_->poll_interventions(rec.step())) {
    InterventionRecord r{rec.step(), request.ids, false, {}};
    std::unordered_set<PieceId> seen;
    for (PieceId id : request.ids) {
      if (id < 0 || id >= forest.size()) {
        r.reason = "unknown piece id " + std::to_string(id);
      } else if (!seen.insert(id).second) {
        r.reason = "duplicate piece id " + std::to_string(id);
      } else if (forest.cluster_size(id) < 2) {
        r.reason = "piece " + std::to_string(id) + " is already on its own";
      } else if (forest.find(id) != forest.find(request.ids.front())) {
        r.reason = "pieces belong to different clusters";
      }
      if (!r.reason.empty()) break;
    }
    if (request.ids.empty()) r.reason = "no piece ids";
    r.applied = r.reason.empty();
    record(r);
    if (r.applied) {
      rec.remove_pieces(request.ids);
      ++stats.deletions_applied;
      stats.pieces_deleted += static_cast<int>(request.ids.size());
    } else {
      ++stats.deletions_rejected;
      supervisor_->on_rejected("delete rejected: " + r.reason);
    }
  }
}

bool Coordinator::gate(const Reconstruction& rec, const TentativeMerge& merge, RunStats& stats) {
  if (!options_.gate_enabled || supervisor_ == nullptr || forced_) return true;
  const EdgeConfig& e = merge.edge;
  GateRecord r{rec.step(), 0, e, entropy(e.i, e.rot_i), entropy(e.j, e.rot_j), options_.policy.threshold};
  if (!gate_fires(r.entropy_i, r.entropy_j, r.threshold)) return true;
  ++stats.gate_fires;
  r.request_id = next_request_++;
  if (supervisor_->closed()) {
    r.outcome = GateOutcome::unavailable;
    ++stats.timeouts;
    record(r);
    return true;
  }

  MergeRequest req;
  req.request_id = r.request_id;
  req.edge = e;
  req.entropy_i = r.entropy_i;
  req.entropy_j = r.entropy_j;
  req.threshold = r.threshold;
  req.timeout_ms = options_.policy.response_timeout.count();
  req.cluster = rec.forest().union_occupancy(merge);
  normalize_cells(req.cluster);
  for (const auto& oc : req.cluster) {
    if (oc.id == e.i) req.location_i = oc.cell;
    if (oc.id == e.j) req.location_j = oc.cell;
  }

  const auto start = Clock::now();
  const auto decision = supervisor_->review_merge(req, options_.policy.response_timeout);
  r.latency_ms = elapsed_ms(start);
  bool commit = true;
  if (!decision) {
    r.outcome = supervisor_->closed() ? GateOutcome::unavailable : GateOutcome::timeout;
    ++stats.timeouts;
  } else if (*decision == MergeDecision::approve) {
    r.outcome = GateOutcome::approve;
    ++stats.approvals;
  } else {
    r.outcome = GateOutcome::decline;
    ++stats.declines;
    commit = false;
  }
  record(r);
  return commit;
}

void Coordinator::report_progress(const Reconstruction& rec, PieceId root) {
  if (supervisor_ == nullptr) return;
  const int n = spec_.piece_count();
  Progress update;
  update.fraction = n > 1 ? static_cast<double>(n - rec.forest().root_count()) / (n - 1) : 1.0;
  const auto& e = rec.tree_edges().back();
  update.log = "merged " + std::to_string(e.i) + " and " + std::to_string(e.j);
  update.cluster = rec.forest().occupancy(root);
  normalize_cells(update.cluster);
  supervisor_->on_progress(update);
}

TrimFrame Coordinator::review_trim(std::span<const OccupiedCell> occupancy, const FrameChoice& choice,
                                   std::int64_t step, RunStats& stats) {
  TrimFrame current = choice.frame;
  if (supervisor_ == nullptr || !options_.gate_enabled) return current;
  std::vector<OccupiedCell> cluster(occupancy.begin(), occupancy.end());
  const Cell shift = normalize_cells(cluster);

  for (int round = 0; round < options_.max_trim_rounds; ++round) {
    TrimReviewRecord r{step, next_request_++, current};
    if (supervisor_->closed()) {
      r.outcome = TrimOutcome::unavailable;
      record(r);
      break;
    }
    TrimProposal proposal;
    proposal.request_id = r.request_id;
    proposal.frame = current;
    proposal.frame.origin = current.origin - shift;
    proposal.pieces_inside = count_inside(occupancy, current);
    proposal.timeout_ms = options_.policy.response_timeout.count();
    proposal.cluster = cluster;

    const auto start = Clock::now();
    const auto response = supervisor_->review_trim(proposal, options_.policy.response_timeout);
    r.latency_ms = elapsed_ms(start);
    if (!response) {
      r.outcome = supervisor_->closed() ? TrimOutcome::unavailable : TrimOutcome::timeout;
      record(r);
      break;
    }
    if (response->approve || !response->frame) {
      r.outcome = TrimOutcome::approve;
      record(r);
      break;
    }
    TrimFrame edited = *response->frame;
    edited.origin = edited.origin + shift;
    r.edited = edited;
    if (frame_in_bounds(edited, occupancy, spec_)) {
      r.outcome = TrimOutcome::edit;
      record(r);
      current = edited;
      ++stats.trim_edits;
      break;
    }
    r.outcome = TrimOutcome::rejected;
    record(r);
    supervisor_->on_rejected("trim frame out of bounds");
  }
  return current;
}

RunResult Coordinator::run() {
  RunResult result;
  RunStats& stats = result.stats;
  forced_ = false;
  Reconstruction rec(*table_, [this](const StepEvent& e) { record(e); });

  std::int64_t step = 0;
  int commits_at_recycle = -1;
  for (;; ++step) {
    rec.set_step(step);
    apply_interventions(rec, stats);
    if (rec.complete()) break;
    const auto candidate = rec.next_edge();
    if (!candidate) {
      // Queue dry with several clusters left: give popped edges another pass
      // without asking the supervisor again, as long as passes make progress.
      if (rec.commit_count() == commits_at_recycle) break;
      commits_at_recycle = rec.commit_count();
      if (rec.recycle() == 0) break;
      ++stats.recycles;
      forced_ = true;
      continue;
    }
    const auto merge = rec.try_merge(*candidate);
    if (!merge) continue;
    if (gate(rec, *merge, stats)) {
      rec.commit(*merge);
      ++stats.commits;
      report_progress(rec, rec.forest().find(merge->edge.i));
    } else {
      rec.decline(merge->edge);
    }
  }
  stats.steps = step;

  // Trim the largest cluster; anything outside it goes to the filler.
  const Forest& forest = rec.forest();
  const auto roots = forest.roots();
  stats.clusters_at_trim = static_cast<int>(roots.size());
  PieceId main = roots.front();
  for (PieceId r : roots) {
    if (forest.members(r).size() > forest.members(main).size()) main = r;
  }
  const auto occupancy = forest.occupancy(main);

  ++step;
  const FrameChoice choice = find_trim_frame(occupancy, spec_);
  record(StepEvent{.kind = StepKind::trim_proposed, .step = step, .frame = choice.frame,
                   .count = choice.pieces_inside});
  const TrimFrame frame = review_trim(occupancy, choice, step, stats);
  TrimResult cut = trim(occupancy, frame);
  result.frame = frame;
  result.pieces_inside = static_cast<int>(cut.in_frame.size());
  record(StepEvent{.kind = StepKind::trim_final, .step = step, .frame = frame, .count = result.pieces_inside});

  for (PieceId r : roots) {
    if (r == main) continue;
    cut.trimmed.insert(cut.trimmed.end(), forest.members(r).begin(), forest.members(r).end());
  }
  std::sort(cut.trimmed.begin(), cut.trimmed.end());
  result.trimmed = cut.trimmed;

  result.placement = fill_gaps(cut, *table_, spec_, [&](const OccupiedCell& placed) {
    record(StepEvent{.kind = StepKind::fill_placed, .step = ++step, .placed = placed});
  });
  return result;
}

}  // namespace jisa
