#include "jisa/supervisor.hpp"

#include <type_traits>

namespace jisa {

std::uint64_t request_id_of(const SupervisorEvent& event) {
  return std::visit(
      [](const auto& e) -> std::uint64_t {
        if constexpr (requires { e.request_id; }) {
          return e.request_id;
        } else {
          return 0;
        }
      },
      event);
}

const char* type_name(const SupervisorEvent& event) {
  static constexpr const char* kNames[] = {"MergeRequest", "MergeResponse", "DeletePieces",
                                           "TrimProposal", "TrimResponse",  "Progress"};
  return kNames[event.index()];
}

ChannelSupervisor::ChannelSupervisor(std::string session_id) : session_id_(std::move(session_id)) {}

void ChannelSupervisor::set_pieces(std::vector<Piece> pieces) {
  std::lock_guard lock(mu_);
  pieces_ = std::move(pieces);
}

void ChannelSupervisor::set_sender(Sender sender) {
  std::optional<SupervisorEvent> pending;
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    sender_ = std::move(sender);
    if (sender_) pending = outstanding_;
  }
  if (pending) send(*pending);
}

void ChannelSupervisor::send(const SupervisorEvent& event) {
  Sender sender;
  {
    std::lock_guard lock(mu_);
    sender = sender_;
  }
  if (sender) sender(event);
}

std::vector<std::uint8_t> ChannelSupervisor::render_preview(std::span<const OccupiedCell> cluster) const {
  if (cluster.empty() || pieces_.empty()) return {};
  return encode_png(render_cluster(cluster, pieces_).image);
}

void ChannelSupervisor::deliver(const SupervisorEvent& event) {
  std::string rejection;
  {
    std::lock_guard lock(mu_);
    if (const auto* r = std::get_if<MergeResponse>(&event)) {
      const auto* req = outstanding_ ? std::get_if<MergeRequest>(&*outstanding_) : nullptr;
      if (req != nullptr && req->request_id == r->request_id && !merge_answer_) {
        merge_answer_ = *r;
      } else {
        rejection = "merge request " + std::to_string(r->request_id) + " is not outstanding";
      }
    } else if (const auto* t = std::get_if<TrimResponse>(&event)) {
      const auto* req = outstanding_ ? std::get_if<TrimProposal>(&*outstanding_) : nullptr;
      if (req != nullptr && req->request_id == t->request_id && !trim_answer_) {
        trim_answer_ = *t;
      } else {
        rejection = "trim proposal " + std::to_string(t->request_id) + " is not outstanding";
      }
    } else if (const auto* d = std::get_if<DeletePieces>(&event)) {
      interventions_.push_back(*d);
    } else {
      rejection = std::string("unexpected event from supervisor: ") + type_name(event);
    }
  }
  if (rejection.empty()) {
    cv_.notify_all();
  } else {
    on_rejected(rejection);
  }
}

void ChannelSupervisor::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
    sender_ = nullptr;
  }
  cv_.notify_all();
}

bool ChannelSupervisor::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::optional<MergeDecision> ChannelSupervisor::review_merge(const MergeRequest& request,
                                                             std::chrono::milliseconds timeout) {
  MergeRequest out = request;
  out.timeout_ms = timeout.count();
  {
    std::lock_guard lock(mu_);
    if (closed_) return std::nullopt;
    if (out.preview_png.empty()) out.preview_png = render_preview(out.cluster);
    outstanding_ = out;
    merge_answer_.reset();
  }
  send(out);
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return merge_answer_.has_value() || closed_; });
  outstanding_.reset();
  if (!merge_answer_) return std::nullopt;
  const auto decision = merge_answer_->decision;
  merge_answer_.reset();
  return decision;
}

std::optional<TrimResponse> ChannelSupervisor::review_trim(const TrimProposal& proposal,
                                                           std::chrono::milliseconds timeout) {
  TrimProposal out = proposal;
  out.timeout_ms = timeout.count();
  {
    std::lock_guard lock(mu_);
    if (closed_) return std::nullopt;
    if (out.preview_png.empty()) out.preview_png = render_preview(out.cluster);
    outstanding_ = out;
    trim_answer_.reset();
  }
  send(out);
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return trim_answer_.has_value() || closed_; });
  outstanding_.reset();
  auto answer = std::move(trim_answer_);
  trim_answer_.reset();
  return answer;
}

void ChannelSupervisor::on_progress(const Progress& update) {
  Progress out = update;
  {
    std::lock_guard lock(mu_);
    if (closed_ || !sender_) return;
    const auto now = std::chrono::steady_clock::now();
    if (out.preview_png.empty() && (!last_preview_ || now - *last_preview_ >= preview_interval_)) {
      out.preview_png = render_preview(out.cluster);
      last_preview_ = now;
    }
  }
  send(out);
}

std::vector<DeletePieces> ChannelSupervisor::poll_interventions(std::int64_t) {
  std::lock_guard lock(mu_);
  std::vector<DeletePieces> out(interventions_.begin(), interventions_.end());
  interventions_.clear();
  return out;
}

void ChannelSupervisor::on_rejected(const std::string& reason) {
  Progress notice;
  notice.fraction = -1.0;
  notice.log = "error: " + reason;
  send(notice);
}

}  // namespace jisa
