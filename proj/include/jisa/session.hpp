#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "jisa/compatibility.hpp"
#include "jisa/coordinator.hpp"
#include "jisa/puzzle.hpp"
#include "jisa/supervisor.hpp"

namespace jisa {

enum class SupervisorMode { autonomous, gate_only, oracle, live };
const char* to_string(SupervisorMode mode);
// Throws InputError on an unknown name.
SupervisorMode supervisor_mode_from(const std::string& name);

struct SessionConfig {
  std::filesystem::path image;
  int piece_px = 28;
  std::uint64_t seed = 1;
  std::optional<double> threshold;  // bits; overrides calibration
  double calibrate_frac = 0.1;
  std::optional<std::int64_t> timeout_ms;  // default: 30 s live, 0 otherwise
  SupervisorMode mode = SupervisorMode::autonomous;
  std::string listen = "127.0.0.1:8765";
  std::filesystem::path out;  // empty: write nothing
  int threads = 1;
  bool log_pops = false;
  bool save_previews = false;
  std::string session_id = "jisa";
  std::filesystem::path table_cache;  // directory; empty disables

  // Throws InputError on inconsistent settings.
  void validate() const;
  std::chrono::milliseconds response_timeout() const;
};

struct PreparedPuzzle {
  Puzzle puzzle;  // scrambled pieces; truth is for the oracle and metrics only
  CompatibilityTable table;
  std::string image_sha256;
  std::string pieces_sha256;
  double threshold = 0.0;
  double table_seconds = 0.0;
};

// Reads, slices and scrambles the image, builds the table and resolves the
// SC threshold. Throws InputError / DimensionError on bad input.
PreparedPuzzle prepare_puzzle(const SessionConfig& config);

struct SessionOutcome {
  RunResult run;
  double direct = 0.0;
  double neighbor = 0.0;
  nlohmann::json header;
  nlohmann::json footer;
  std::int64_t wall_ms = 0;
};

// Runs the coordinator with `supervisor` (null: autonomous) and streams the
// JSON-lines session log to `log` if given.
SessionOutcome run_prepared(const PreparedPuzzle& prepared, const SessionConfig& config, Supervisor* supervisor,
                            std::ostream* log);

// Full session: prepares the puzzle, builds the supervisor for the mode
// (serving the wire protocol in live mode) and writes session.jsonl,
// solution.png and placement.json under config.out.
SessionOutcome run_session(const SessionConfig& config);

// Re-executes a recorded session with every supervisor decision read from
// the log. Throws ReplayError on hash mismatch, divergence or a log that ends
// before the run does; the result equals the footer placement.
Placement replay_session(std::istream& log, const std::optional<std::filesystem::path>& image = std::nullopt);
Placement replay_session(const std::filesystem::path& log_path,
                         const std::optional<std::filesystem::path>& image = std::nullopt);

}  // namespace jisa
