#include "jisa/session.hpp"

#include <cstdlib>
#include <ctime>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jisa/entropy.hpp"
#include "jisa/errors.hpp"
#include "jisa/hash.hpp"
#include "jisa/image.hpp"
#include "jisa/live_server.hpp"
#include "jisa/metrics.hpp"
#include "jisa/oracle_supervisor.hpp"
#include "jisa/serialization.hpp"

namespace jisa {

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_json(const SessionConfig& c) {
  json j{{"image", c.image.string()},
         {"piece_px", c.piece_px},
         {"seed", c.seed},
         {"mode", to_string(c.mode)},
         {"calibrate_frac", c.calibrate_frac},
         {"timeout_ms", c.response_timeout().count()},
         {"threads", c.threads},
         {"log_pops", c.log_pops}};
  j["threshold"] = c.threshold ? json(*c.threshold) : json(nullptr);
  if (c.mode == SupervisorMode::live) j["listen"] = c.listen;
  return j;
}

// Writes solver-side artefacts of one gate firing to disk, then defers to the
// real supervisor.
class PreviewRecorder : public Supervisor {
 public:
  PreviewRecorder(Supervisor& inner, std::span<const Piece> pieces, std::filesystem::path dir)
      : inner_(inner), pieces_(pieces), dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }
  bool wants_previews() const override { return inner_.wants_previews(); }
  std::optional<MergeDecision> review_merge(const MergeRequest& r, std::chrono::milliseconds t) override {
    save("merge_" + std::to_string(r.request_id) + ".png", r.cluster);
    return inner_.review_merge(r, t);
  }
  std::optional<TrimResponse> review_trim(const TrimProposal& p, std::chrono::milliseconds t) override {
    save("trim_" + std::to_string(p.request_id) + ".png", p.cluster);
    return inner_.review_trim(p, t);
  }
  void on_progress(const Progress& u) override { inner_.on_progress(u); }
  std::vector<DeletePieces> poll_interventions(std::int64_t s) override { return inner_.poll_interventions(s); }
  void on_rejected(const std::string& r) override { inner_.on_rejected(r); }
  bool closed() const override { return inner_.closed(); }

 private:
  void save(const std::string& name, std::span<const OccupiedCell> cluster) {
    if (!cluster.empty()) write_png(dir_ / name, render_cluster(cluster, pieces_).image);
  }
  Supervisor& inner_;
  std::span<const Piece> pieces_;
  std::filesystem::path dir_;
};

// Answers every supervisor call from a recorded log, in order.
class ReplaySupervisor : public Supervisor {
 public:
  ReplaySupervisor(std::deque<json> gates, std::deque<json> deletes, std::deque<json> trims,
                   std::optional<std::int64_t> last_step)
      : gates_(std::move(gates)), deletes_(std::move(deletes)), trims_(std::move(trims)), last_step_(last_step) {}

  std::optional<MergeDecision> review_merge(const MergeRequest& request, std::chrono::milliseconds) override {
    check_recorded("merge decision");
    if (gates_.empty()) throw ReplayError("diverged at step " + std::to_string(step_) + ": no recorded gate left");
    const json g = gates_.front();
    gates_.pop_front();
    if (g.at("step").get<std::int64_t>() != step_ || g.at("edge").get<EdgeConfig>() != request.edge) {
      throw ReplayError("diverged at step " + std::to_string(step_) + ": gate fired on a different edge");
    }
    switch (gate_outcome_from(g.at("outcome").get<std::string>())) {
      case GateOutcome::approve: return MergeDecision::approve;
      case GateOutcome::decline: return MergeDecision::decline;
      default: return std::nullopt;
    }
  }

  std::optional<TrimResponse> review_trim(const TrimProposal& proposal, std::chrono::milliseconds) override {
    check_recorded("trim decision");
    if (trims_.empty()) throw ReplayError("diverged: no recorded trim review left");
    const json t = trims_.front();
    trims_.pop_front();
    TrimResponse r{proposal.request_id, true, std::nullopt};
    switch (trim_outcome_from(t.at("outcome").get<std::string>())) {
      case TrimOutcome::approve: return r;
      case TrimOutcome::edit:
      case TrimOutcome::rejected: {
        // Recorded frames are in cluster coordinates; the proposal is shifted.
        TrimFrame edited = t.at("edited").get<TrimFrame>();
        const TrimFrame recorded = t.at("proposed").get<TrimFrame>();
        edited.origin = edited.origin - (recorded.origin - proposal.frame.origin);
        r.approve = false;
        r.frame = edited;
        return r;
      }
      default: return std::nullopt;
    }
  }

  std::vector<DeletePieces> poll_interventions(std::int64_t step) override {
    step_ = step;
    check_recorded("step");
    std::vector<DeletePieces> out;
    while (!deletes_.empty() && deletes_.front().at("step").get<std::int64_t>() <= step) {
      if (deletes_.front().at("step").get<std::int64_t>() < step) {
        throw ReplayError("diverged: deletion recorded at step " + deletes_.front().at("step").dump() +
                          " was never reached");
      }
      out.push_back({deletes_.front().at("ids").get<std::vector<PieceId>>()});
      deletes_.pop_front();
    }
    return out;
  }

  bool exhausted() const { return gates_.empty() && deletes_.empty() && trims_.empty(); }

 private:
  void check_recorded(const char* what) const {
    if (last_step_ && step_ > *last_step_) {
      throw ReplayError("log ends at step " + std::to_string(*last_step_) + "; no " + what + " recorded for step " +
                        std::to_string(step_));
    }
  }

  std::deque<json> gates_;
  std::deque<json> deletes_;
  std::deque<json> trims_;
  std::optional<std::int64_t> last_step_;  // set when the log has no footer
  std::int64_t step_ = 0;
};

}  // namespace

const char* to_string(SupervisorMode mode) {
  switch (mode) {
    case SupervisorMode::autonomous: return "autonomous";
    case SupervisorMode::gate_only: return "gate-only";
    case SupervisorMode::oracle: return "oracle";
    case SupervisorMode::live: return "live";
  }
  return "unknown";
}

SupervisorMode supervisor_mode_from(const std::string& name) {
  for (auto m : {SupervisorMode::autonomous, SupervisorMode::gate_only, SupervisorMode::oracle, SupervisorMode::live}) {
    if (name == to_string(m)) return m;
  }
  throw InputError("unknown supervisor mode '" + name + "'");
}

void SessionConfig::validate() const {
  if (piece_px < 2) throw InputError("piece size must be at least 2 px");
  if (calibrate_frac < 0.0 || calibrate_frac > 1.0) throw InputError("calibration fraction must be in [0, 1]");
  if (timeout_ms && *timeout_ms < 0) throw InputError("timeout must be non-negative");
  if (threads < 0) throw InputError("thread count must be non-negative");
}

std::chrono::milliseconds SessionConfig::response_timeout() const {
  if (timeout_ms) return std::chrono::milliseconds(*timeout_ms);
  return std::chrono::milliseconds(mode == SupervisorMode::live ? 30000 : 0);
}

PreparedPuzzle prepare_puzzle(const SessionConfig& config) {
  config.validate();
  PreparedPuzzle out;
  out.image_sha256 = sha256_file(config.image);
  const Image image = read_png(config.image);
  out.puzzle = scramble(slice_image(image, config.piece_px), config.seed);
  out.pieces_sha256 = pieces_hash(out.puzzle.pieces);

  const auto start = Clock::now();
  const auto cache = config.table_cache.empty() ? std::filesystem::path{}
                                                : config.table_cache / (out.pieces_sha256 + ".table");
  std::optional<CompatibilityTable> cached;
  if (!cache.empty()) cached = load_table(cache, out.pieces_sha256);
  if (cached) {
    out.table = std::move(*cached);
  } else {
    out.table = build_table(out.puzzle.pieces, config.threads);
    if (!cache.empty()) {
      std::filesystem::create_directories(config.table_cache);
      save_table(cache, out.table, out.pieces_sha256);
    }
  }
  out.table_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  if (config.threshold) {
    out.threshold = *config.threshold;
  } else {
    std::vector<double> entropies;
    for (const auto& p : out.puzzle.pieces) entropies.push_back(glcm_entropy(p, Rotation(0)).value);
    out.threshold = calibrate_threshold(entropies, config.calibrate_frac);
  }
  return out;
}

SessionOutcome run_prepared(const PreparedPuzzle& prepared, const SessionConfig& config, Supervisor* supervisor,
                            std::ostream* log) {
  const auto start = Clock::now();
  const Puzzle& puzzle = prepared.puzzle;
  SessionOutcome out;
  out.header = json{{"type", "header"},
                    {"config", config_json(config)},
                    {"image_sha256", prepared.image_sha256},
                    {"pieces_sha256", prepared.pieces_sha256},
                    {"threshold", prepared.threshold},
                    {"rows", puzzle.spec.rows},
                    {"cols", puzzle.spec.cols},
                    {"entropy_rotation", "proposed"},
                    {"timestamp", utc_timestamp()}};
  auto emit = [&](const json& line) {
    if (log) *log << line.dump() << '\n';
  };
  emit(out.header);

  std::optional<PreviewRecorder> recorder;
  if (supervisor && config.save_previews && !config.out.empty()) {
    recorder.emplace(*supervisor, puzzle.pieces, config.out / "previews");
    supervisor = &*recorder;
  }

  CoordinatorOptions options;
  options.policy = {prepared.threshold, config.response_timeout()};
  options.gate_enabled = config.mode != SupervisorMode::autonomous;
  Coordinator coordinator(prepared.table, puzzle.pieces, puzzle.spec, options, supervisor,
                          [&](const CoordinatorRecord& r) {
                            if (!log) return;
                            if (const auto* e = std::get_if<StepEvent>(&r);
                                e && e->kind == StepKind::edge_popped && !config.log_pops) {
                              return;
                            }
                            json j;
                            to_json(j, r);
                            emit(j);
                          });
  out.run = coordinator.run();
  out.direct = direct_metric(out.run.placement, puzzle.truth);
  out.neighbor = neighbor_metric(out.run.placement, puzzle.truth);
  out.footer = json{{"type", "footer"},
                    {"placement", out.run.placement},
                    {"frame", out.run.frame},
                    {"direct", out.direct},
                    {"neighbor", out.neighbor}};
  emit(out.footer);
  out.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  const auto& s = out.run.stats;
  emit(json{{"type", "summary"},
            {"steps", s.steps},
            {"commits", s.commits},
            {"gate_fires", s.gate_fires},
            {"approvals", s.approvals},
            {"declines", s.declines},
            {"timeouts", s.timeouts},
            {"deletions_applied", s.deletions_applied},
            {"deletions_rejected", s.deletions_rejected},
            {"pieces_deleted", s.pieces_deleted},
            {"recycles", s.recycles},
            {"trim_edits", s.trim_edits},
            {"clusters_at_trim", s.clusters_at_trim},
            {"table_seconds", prepared.table_seconds},
            {"wall_ms", out.wall_ms}});
  return out;
}

SessionOutcome run_session(const SessionConfig& config_in) {
  SessionConfig config = config_in;
  if (config.mode == SupervisorMode::live) {
    if (const char* env = std::getenv("JISA_LISTEN"); env && *env) config.listen = env;
  }
  const ListenAddress address = config.mode == SupervisorMode::live ? parse_listen(config.listen) : ListenAddress{};
  const PreparedPuzzle prepared = prepare_puzzle(config);

  std::ofstream log_file;
  if (!config.out.empty()) {
    std::filesystem::create_directories(config.out);
    log_file.open(config.out / "session.jsonl");
    if (!log_file) throw InputError("cannot write " + (config.out / "session.jsonl").string());
  }
  std::ostream* log = log_file.is_open() ? &log_file : nullptr;

  SessionOutcome out;
  switch (config.mode) {
    case SupervisorMode::autonomous: out = run_prepared(prepared, config, nullptr, log); break;
    case SupervisorMode::gate_only:
    case SupervisorMode::oracle: {
      OracleSupervisor oracle(prepared.puzzle.truth, {config.mode == SupervisorMode::oracle});
      out = run_prepared(prepared, config, &oracle, log);
      break;
    }
    case SupervisorMode::live: {
      ChannelSupervisor channel(config.session_id);
      channel.set_pieces(prepared.puzzle.pieces);
      LiveServer server(channel, address);
      std::cerr << "listening on ws://" << address.host << ':' << server.port() << '\n';
      out = run_prepared(prepared, config, &channel, log);
      std::ostringstream done;
      done << "done: direct " << out.direct << ", neighbor " << out.neighbor;
      channel.on_progress({1.0, done.str(), {}, {}});
      server.stop();
      break;
    }
  }

  if (!config.out.empty()) {
    write_png(config.out / "solution.png", render_placement(out.run.placement, prepared.puzzle.pieces));
    write_json_file(config.out / "placement.json", out.run.placement);
  }
  return out;
}

Placement replay_session(std::istream& log, const std::optional<std::filesystem::path>& image) {
  std::string line;
  std::optional<json> header, footer;
  std::deque<json> gates, deletes, trims;
  std::int64_t last_step = -1;
  while (std::getline(log, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ReplayError(std::string("unreadable log line: ") + e.what());
    }
    const auto type = j.value("type", std::string{});
    if (!header) {
      if (type != "header") throw ReplayError("log does not start with a header");
      header = j;
      continue;
    }
    if (j.contains("step")) last_step = std::max(last_step, j.at("step").get<std::int64_t>());
    if (type == "gate") gates.push_back(j);
    if (type == "delete") deletes.push_back(j);
    if (type == "trim-review") trims.push_back(j);
    if (type == "footer") footer = j;
  }
  if (!header) throw ReplayError("empty log");

  try {
    const json& c = header->at("config");
    SessionConfig config;
    config.image = image ? *image : std::filesystem::path(c.at("image").get<std::string>());
    config.piece_px = c.at("piece_px").get<int>();
    config.seed = c.at("seed").get<std::uint64_t>();
    config.mode = supervisor_mode_from(c.at("mode").get<std::string>());
    config.timeout_ms = 0;
    config.threshold = header->at("threshold").get<double>();
    config.threads = c.value("threads", 1);

    if (sha256_file(config.image) != header->at("image_sha256").get<std::string>()) {
      throw ReplayError("image hash does not match the log; refusing to replay");
    }
    const PreparedPuzzle prepared = prepare_puzzle(config);
    if (prepared.pieces_sha256 != header->at("pieces_sha256").get<std::string>()) {
      throw ReplayError("scrambled pieces do not match the log");
    }

    ReplaySupervisor replay(std::move(gates), std::move(deletes), std::move(trims),
                            footer ? std::nullopt : std::optional<std::int64_t>(last_step));
    const auto outcome = run_prepared(prepared, config, &replay, nullptr);
    if (!footer) throw ReplayError("log has no footer");
    if (!replay.exhausted()) throw ReplayError("diverged: recorded decisions left unused");
    const auto recorded = footer->at("placement").get<Placement>();
    if (outcome.run.placement != recorded) throw ReplayError("replayed placement differs from the footer");
    return outcome.run.placement;
  } catch (const json::exception& e) {
    throw ReplayError(std::string("malformed log: ") + e.what());
  }
}

Placement replay_session(const std::filesystem::path& log_path, const std::optional<std::filesystem::path>& image) {
  std::ifstream in(log_path);
  if (!in) throw InputError("cannot open " + log_path.string());
  return replay_session(in, image);
}

}  // namespace jisa
