#include "jisa/benchmark.hpp"

#include <fstream>

#include "jisa/errors.hpp"
#include "jisa/oracle_supervisor.hpp"
#include "jisa/serialization.hpp"

namespace jisa {

Manifest load_manifest(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  Manifest m;
  m.dir = path.parent_path();
  try {
    m.piece_px = j.value("piece_px", 28);
    for (const auto& e : j.at("images")) {
      m.images.push_back({e.at("file").get<std::string>(), e.at("rows").get<int>(), e.at("cols").get<int>()});
    }
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  if (m.images.empty()) throw InputError(path.string() + ": no images listed");
  return m;
}

std::vector<ModeAggregate> aggregate(const std::vector<BenchmarkRow>& rows, const std::vector<SupervisorMode>& modes) {
  std::vector<ModeAggregate> out;
  for (auto mode : modes) {
    ModeAggregate a{mode};
    for (const auto& r : rows) {
      if (r.mode != mode) continue;
      ++a.runs;
      if (!r.error.empty()) {
        ++a.failures;
        continue;
      }
      a.direct += r.direct;
      a.neighbor += r.neighbor;
      a.gate_fires += r.gate_fires;
      a.interventions += r.interventions;
      a.runtime_s += r.runtime_s;
    }
    if (const int ok = a.runs - a.failures; ok > 0) {
      a.direct /= ok;
      a.neighbor /= ok;
      a.runtime_s /= ok;
    }
    out.push_back(a);
  }
  return out;
}

BenchmarkReport run_benchmark(const BenchmarkOptions& options) {
  const Manifest manifest = load_manifest(options.manifest);
  for (auto mode : options.modes) {
    if (mode == SupervisorMode::live) throw InputError("live mode cannot be benchmarked");
  }
  if (!options.out.empty()) std::filesystem::create_directories(options.out / "logs");

  BenchmarkReport report;
  for (const auto& img : manifest.images) {
    const std::string stem = std::filesystem::path(img.file).stem().string();
    for (auto seed : options.seeds) {
      SessionConfig config = options.base;
      config.image = manifest.dir / img.file;
      config.piece_px = manifest.piece_px;
      config.seed = seed;

      std::optional<PreparedPuzzle> prepared;
      std::string failure;
      try {
        prepared = prepare_puzzle(config);
        if (prepared->puzzle.spec.rows != img.rows || prepared->puzzle.spec.cols != img.cols) {
          failure = "grid is " + std::to_string(prepared->puzzle.spec.rows) + "x" +
                    std::to_string(prepared->puzzle.spec.cols) + ", manifest says " + std::to_string(img.rows) +
                    "x" + std::to_string(img.cols);
        }
      } catch (const std::exception& e) {
        failure = e.what();
      }

      for (auto mode : options.modes) {
        BenchmarkRow row{img.file, mode, seed};
        if (!failure.empty()) {
          row.error = failure;
        } else {
          config.mode = mode;
          try {
            std::ofstream log;
            if (!options.out.empty()) {
              log.open(options.out / "logs" / (stem + "_" + to_string(mode) + "_s" + std::to_string(seed) + ".jsonl"));
            }
            std::optional<OracleSupervisor> oracle;
            if (mode != SupervisorMode::autonomous) {
              oracle.emplace(prepared->puzzle.truth, OracleOptions{mode == SupervisorMode::oracle});
            }
            const auto outcome = run_prepared(*prepared, config, oracle ? &*oracle : nullptr, log.is_open() ? &log : nullptr);
            const auto& s = outcome.run.stats;
            row.direct = outcome.direct;
            row.neighbor = outcome.neighbor;
            row.gate_fires = s.gate_fires;
            row.declines = s.declines;
            row.interventions = s.deletions_applied + s.trim_edits;
            row.runtime_s = prepared->table_seconds + outcome.wall_ms / 1000.0;
            row.placement = outcome.run.placement;
            row.truth = prepared->puzzle.truth;
          } catch (const std::exception& e) {
            row.error = e.what();
          }
        }
        if (options.on_row) options.on_row(row);
        report.rows.push_back(std::move(row));
      }
    }
  }
  report.aggregates = aggregate(report.rows, options.modes);
  if (!options.out.empty()) write_json_file(options.out / "report.json", report_json(report));
  return report;
}

json report_json(const BenchmarkReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json j{{"image", r.image}, {"mode", to_string(r.mode)}, {"seed", r.seed}};
    if (!r.error.empty()) {
      j["error"] = r.error;
    } else {
      j.update({{"direct", r.direct},
                {"neighbor", r.neighbor},
                {"gate_fires", r.gate_fires},
                {"declines", r.declines},
                {"interventions", r.interventions},
                {"runtime_s", r.runtime_s},
                {"placement", r.placement},
                {"truth", r.truth}});
    }
    rows.push_back(std::move(j));
  }
  json aggregates = json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({{"mode", to_string(a.mode)},
                          {"runs", a.runs},
                          {"failures", a.failures},
                          {"direct", a.direct},
                          {"neighbor", a.neighbor},
                          {"gate_fires", a.gate_fires},
                          {"interventions", a.interventions},
                          {"runtime_s", a.runtime_s}});
  }
  return json{{"rows", std::move(rows)}, {"aggregates", std::move(aggregates)}};
}

}  // namespace jisa
