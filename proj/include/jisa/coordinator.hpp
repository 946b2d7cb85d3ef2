#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jisa/compatibility.hpp"
#include "jisa/reconstruction.hpp"
#include "jisa/supervisor.hpp"
#include "jisa/trim_fill.hpp"

namespace jisa {

struct ScPolicy {
  double threshold = 0.0;  // bits
  std::chrono::milliseconds response_timeout{0};
  // No response within the timeout: the merge goes ahead.
};

enum class GateOutcome { approve, decline, timeout, unavailable };
const char* to_string(GateOutcome outcome);

// Whether the SC gate asks the supervisor about a merge.
bool gate_fires(double entropy_i, double entropy_j, double threshold);

struct GateRecord {
  std::int64_t step = 0;
  std::uint64_t request_id = 0;
  EdgeConfig edge;
  double entropy_i = 0.0;
  double entropy_j = 0.0;
  double threshold = 0.0;
  GateOutcome outcome = GateOutcome::timeout;
  std::int64_t latency_ms = 0;
};

struct InterventionRecord {
  std::int64_t step = 0;
  std::vector<PieceId> ids;
  bool applied = false;
  std::string reason;  // why it was rejected
};

enum class TrimOutcome { approve, edit, rejected, timeout, unavailable };
const char* to_string(TrimOutcome outcome);

struct TrimReviewRecord {
  std::int64_t step = 0;
  std::uint64_t request_id = 0;
  TrimFrame proposed;  // cluster coordinates
  std::optional<TrimFrame> edited;
  TrimOutcome outcome = TrimOutcome::timeout;
  std::int64_t latency_ms = 0;
};

using CoordinatorRecord = std::variant<StepEvent, GateRecord, InterventionRecord, TrimReviewRecord>;
using RecordSink = std::function<void(const CoordinatorRecord&)>;

struct CoordinatorOptions {
  ScPolicy policy;
  bool gate_enabled = true;
  int max_trim_rounds = 3;
};

struct RunStats {
  int commits = 0;
  int gate_fires = 0;
  int approvals = 0;
  int declines = 0;
  int timeouts = 0;
  int deletions_applied = 0;
  int deletions_rejected = 0;
  int pieces_deleted = 0;
  int recycles = 0;
  int trim_edits = 0;
  int clusters_at_trim = 0;
  std::int64_t steps = 0;
};

struct RunResult {
  Placement placement;
  TrimFrame frame;
  int pieces_inside = 0;
  std::vector<PieceId> trimmed;
  RunStats stats;
};

// The JISA coordinator: drives a reconstruction, gates low-confidence merges
// through the supervisor, applies its interventions at step boundaries, then
// trims and fills. `supervisor` may be null (fully autonomous).
class Coordinator {
 public:
  Coordinator(const CompatibilityTable& table, std::span<const Piece> pieces, const PuzzleSpec& spec,
              CoordinatorOptions options, Supervisor* supervisor, RecordSink sink = {});

  RunResult run();

  double entropy(PieceId id, Rotation rot) const { return entropy_[id][rot.quarter_turns()]; }

 private:
  void record(const CoordinatorRecord& r) const;
  void apply_interventions(Reconstruction& rec, RunStats& stats);
  bool gate(const Reconstruction& rec, const TentativeMerge& merge, RunStats& stats);
  void report_progress(const Reconstruction& rec, PieceId root);
  TrimFrame review_trim(std::span<const OccupiedCell> occupancy, const FrameChoice& choice, std::int64_t step,
                        RunStats& stats);

  const CompatibilityTable* table_;
  PuzzleSpec spec_;
  CoordinatorOptions options_;
  Supervisor* supervisor_;
  RecordSink sink_;
  std::vector<std::array<double, 4>> entropy_;
  std::uint64_t next_request_ = 1;
  bool forced_ = false;
  bool closed_noted_ = false;
};

// Shifts cells so the bounding box starts at (0,0); returns the shift applied.
Cell normalize_cells(std::vector<OccupiedCell>& cells);

}  // namespace jisa
