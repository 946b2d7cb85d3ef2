#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jisa/compatibility.hpp"
#include "jisa/puzzle.hpp"
#include "jisa/trim_fill.hpp"

namespace jisa {

enum class MergeDecision { approve, decline };

// Low-confidence merge awaiting a supervisor verdict. Cells are relative to
// the preview's top-left cell.
struct MergeRequest {
  std::uint64_t request_id = 0;
  EdgeConfig edge;
  Cell location_i;
  Cell location_j;
  double entropy_i = 0.0;
  double entropy_j = 0.0;
  double threshold = 0.0;
  std::int64_t timeout_ms = 0;
  std::vector<OccupiedCell> cluster;
  std::vector<std::uint8_t> preview_png;

  friend bool operator==(const MergeRequest&, const MergeRequest&) = default;
};

struct MergeResponse {
  std::uint64_t request_id = 0;
  MergeDecision decision = MergeDecision::approve;

  friend bool operator==(const MergeResponse&, const MergeResponse&) = default;
};

struct DeletePieces {
  std::vector<PieceId> ids;

  friend bool operator==(const DeletePieces&, const DeletePieces&) = default;
};

struct TrimProposal {
  std::uint64_t request_id = 0;
  TrimFrame frame;
  int pieces_inside = 0;
  std::int64_t timeout_ms = 0;
  std::vector<OccupiedCell> cluster;
  std::vector<std::uint8_t> preview_png;

  friend bool operator==(const TrimProposal&, const TrimProposal&) = default;
};

struct TrimResponse {
  std::uint64_t request_id = 0;
  bool approve = true;
  std::optional<TrimFrame> frame;  // replacement when not approved

  friend bool operator==(const TrimResponse&, const TrimResponse&) = default;
};

struct Progress {
  double fraction = 0.0;
  std::string log;
  std::vector<OccupiedCell> cluster;
  std::vector<std::uint8_t> preview_png;

  friend bool operator==(const Progress&, const Progress&) = default;
};

using SupervisorEvent = std::variant<MergeRequest, MergeResponse, DeletePieces, TrimProposal, TrimResponse, Progress>;

// Whoever oversees a reconstruction run: a person behind a UI, a scripted
// oracle, or a recorded log.
class Supervisor {
 public:
  virtual ~Supervisor() = default;

  // Whether requests should carry rendered PNG previews.
  virtual bool wants_previews() const { return false; }

  // Blocks until a verdict or the timeout. nullopt means no response.
  virtual std::optional<MergeDecision> review_merge(const MergeRequest& request,
                                                    std::chrono::milliseconds timeout) = 0;

  // nullopt means no response (the proposal stands).
  virtual std::optional<TrimResponse> review_trim(const TrimProposal& proposal,
                                                  std::chrono::milliseconds timeout) = 0;

  // A cluster changed. `update.cluster` holds the cluster that grew.
  virtual void on_progress(const Progress& update) { (void)update; }

  // Deletions queued since the last call, applied at step boundary `step`.
  virtual std::vector<DeletePieces> poll_interventions(std::int64_t step) {
    (void)step;
    return {};
  }

  // An intervention was refused (stale ids, out-of-bounds frame, ...).
  virtual void on_rejected(const std::string& reason) { (void)reason; }

  // The channel is gone for good; the run continues autonomously.
  virtual bool closed() const { return false; }
};

// Supervisor reached over a message channel. Inbound events may be delivered
// from any thread; outbound events go through the sender, which must itself be
// thread-safe. Without a sender, requests simply wait out their timeout.
class ChannelSupervisor : public Supervisor {
 public:
  using Sender = std::function<void(const SupervisorEvent&)>;

  explicit ChannelSupervisor(std::string session_id = {});

  const std::string& session_id() const { return session_id_; }
  void set_pieces(std::vector<Piece> pieces);
  // Installs (or clears) the outbound path. A newly connected client is sent
  // the outstanding request, if any.
  void set_sender(Sender sender);
  // Inbound event from the supervisor side.
  void deliver(const SupervisorEvent& event);
  // Permanently closes the channel; pending and future requests lapse at once.
  void close();

  bool wants_previews() const override { return true; }
  std::optional<MergeDecision> review_merge(const MergeRequest& request, std::chrono::milliseconds timeout) override;
  std::optional<TrimResponse> review_trim(const TrimProposal& proposal, std::chrono::milliseconds timeout) override;
  void on_progress(const Progress& update) override;
  std::vector<DeletePieces> poll_interventions(std::int64_t step) override;
  void on_rejected(const std::string& reason) override;
  bool closed() const override;

  // Minimum spacing between preview images attached to progress events.
  void set_preview_interval(std::chrono::milliseconds interval) { preview_interval_ = interval; }

 private:
  void send(const SupervisorEvent& event);
  std::vector<std::uint8_t> render_preview(std::span<const OccupiedCell> cluster) const;

  std::string session_id_;
  std::vector<Piece> pieces_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  Sender sender_;
  bool closed_ = false;
  std::optional<SupervisorEvent> outstanding_;  // request awaiting an answer
  std::optional<MergeResponse> merge_answer_;
  std::optional<TrimResponse> trim_answer_;
  std::deque<DeletePieces> interventions_;
  std::chrono::milliseconds preview_interval_{200};
  std::optional<std::chrono::steady_clock::time_point> last_preview_;
};

std::uint64_t request_id_of(const SupervisorEvent& event);
const char* type_name(const SupervisorEvent& event);

}  // namespace jisa
