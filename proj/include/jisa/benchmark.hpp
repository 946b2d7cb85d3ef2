#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jisa/session.hpp"

namespace jisa {

struct ManifestImage {
  std::string file;
  int rows = 0;
  int cols = 0;
};

struct Manifest {
  std::filesystem::path dir;
  int piece_px = 28;
  std::vector<ManifestImage> images;
};

// {"piece_px": 28, "images": [{"file": "a.png", "rows": 18, "cols": 24}, ...]}
Manifest load_manifest(const std::filesystem::path& path);

struct BenchmarkRow {
  std::string image;
  SupervisorMode mode = SupervisorMode::autonomous;
  std::uint64_t seed = 0;
  double direct = 0.0;
  double neighbor = 0.0;
  int gate_fires = 0;
  int declines = 0;
  int interventions = 0;  // applied deletions plus trim edits
  double runtime_s = 0.0;
  std::string error;      // non-empty: the run failed
  Placement placement;
  Placement truth;
};

struct ModeAggregate {
  SupervisorMode mode = SupervisorMode::autonomous;
  int runs = 0;
  int failures = 0;
  double direct = 0.0;  // means over successful runs
  double neighbor = 0.0;
  int gate_fires = 0;
  int interventions = 0;
  double runtime_s = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::vector<ModeAggregate> aggregates;
};

struct BenchmarkOptions {
  std::filesystem::path manifest;
  std::vector<SupervisorMode> modes{SupervisorMode::autonomous, SupervisorMode::gate_only, SupervisorMode::oracle};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  SessionConfig base;     // threshold, calibration, threads, table cache
  std::filesystem::path out;  // per-run logs and report.json; empty writes nothing
  std::function<void(const BenchmarkRow&)> on_row;
};

// Images x seeds x modes; each image/seed table is built once and shared by
// the modes. A failing image is recorded and the benchmark moves on.
BenchmarkReport run_benchmark(const BenchmarkOptions& options);

std::vector<ModeAggregate> aggregate(const std::vector<BenchmarkRow>& rows, const std::vector<SupervisorMode>& modes);

nlohmann::json report_json(const BenchmarkReport& report);

}  // namespace jisa
