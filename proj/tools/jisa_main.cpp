#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "jisa/benchmark.hpp"
#include "jisa/entropy.hpp"
#include "jisa/errors.hpp"
#include "jisa/image.hpp"
#include "jisa/serialization.hpp"
#include "jisa/session.hpp"

namespace {

void add_puzzle_flags(CLI::App* cmd, jisa::SessionConfig& c) {
  cmd->add_option("--pieces-px", c.piece_px, "Piece side in pixels")->check(CLI::Range(2, 4096));
  cmd->add_option("--seed", c.seed, "Scramble seed");
  cmd->add_option("--threads", c.threads, "Table worker threads (0 = all cores)");
  cmd->add_option("--table-cache", c.table_cache, "Directory for cached compatibility tables");
}

void add_threshold_flags(CLI::App* cmd, jisa::SessionConfig& c) {
  auto* thr = cmd->add_option_function<double>("--threshold", [&c](double v) { c.threshold = v; },
                                               "Entropy threshold in bits");
  auto* frac = cmd->add_option("--calibrate-frac", c.calibrate_frac, "Quantile of piece entropies used as threshold");
  thr->excludes(frac);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jisa: supervised jigsaw reconstruction"};
  app.require_subcommand(1);

  jisa::SessionConfig solve;
  std::string solve_mode = "autonomous";
  auto* solve_cmd = app.add_subcommand("solve", "Solve one image");
  solve_cmd->add_option("image", solve.image, "PNG image")->required()->check(CLI::ExistingFile);
  add_puzzle_flags(solve_cmd, solve);
  add_threshold_flags(solve_cmd, solve);
  solve_cmd->add_option("--mode", solve_mode, "autonomous | gate-only | oracle | live");
  solve_cmd->add_option_function<std::int64_t>("--timeout-ms", [&](std::int64_t v) { solve.timeout_ms = v; },
                                               "Supervisor response timeout");
  solve_cmd->add_option("--listen", solve.listen, "host:port for live mode (env JISA_LISTEN overrides)");
  solve_cmd->add_option("--out", solve.out, "Output directory");
  solve_cmd->add_flag("--log-pops", solve.log_pops, "Log every popped edge");
  solve_cmd->add_flag("--previews", solve.save_previews, "Save a PNG for every supervisor request");

  jisa::SessionConfig bench;
  std::filesystem::path manifest;
  std::vector<std::string> bench_modes{"autonomous", "gate-only", "oracle"};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  auto* bench_cmd = app.add_subcommand("bench", "Run a dataset manifest across modes and seeds");
  bench_cmd->add_option("manifest", manifest, "manifest.json")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--modes", bench_modes, "Modes to run")->delimiter(',');
  bench_cmd->add_option("--seeds", seeds, "Scramble seeds")->delimiter(',');
  bench_cmd->add_option("--out", bench.out, "Directory for report.json and per-run logs");
  bench_cmd->add_option("--threads", bench.threads, "Table worker threads (0 = all cores)");
  bench_cmd->add_option("--table-cache", bench.table_cache, "Directory for cached compatibility tables");
  add_threshold_flags(bench_cmd, bench);

  std::filesystem::path log_path;
  std::optional<std::filesystem::path> replay_image;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a session log and check its footer");
  replay_cmd->add_option("log", log_path, "session.jsonl")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option_function<std::string>("--image", [&](const std::string& p) { replay_image = p; },
                                               "Image path if it moved since recording");

  jisa::SessionConfig calib;
  auto* calib_cmd = app.add_subcommand("calibrate", "Print the entropy threshold for an image");
  calib_cmd->add_option("image", calib.image, "PNG image")->required()->check(CLI::ExistingFile);
  calib_cmd->add_option("--pieces-px", calib.piece_px, "Piece side in pixels")->check(CLI::Range(2, 4096));
  calib_cmd->add_option("--seed", calib.seed, "Scramble seed");
  calib_cmd->add_option("--calibrate-frac", calib.calibrate_frac, "Target low-texture fraction");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      solve.mode = jisa::supervisor_mode_from(solve_mode);
      const auto out = jisa::run_session(solve);
      std::printf("direct %.4f  neighbor %.4f  gates %d  deletions %d  %lld ms\n", out.direct, out.neighbor,
                  out.run.stats.gate_fires, out.run.stats.deletions_applied, static_cast<long long>(out.wall_ms));
    } else if (*bench_cmd) {
      jisa::BenchmarkOptions opts;
      opts.manifest = manifest;
      opts.modes.clear();
      for (const auto& m : bench_modes) opts.modes.push_back(jisa::supervisor_mode_from(m));
      opts.seeds = seeds;
      opts.base = bench;
      opts.out = bench.out;
      opts.on_row = [](const jisa::BenchmarkRow& r) {
        if (r.error.empty()) {
          std::printf("%-20s %-10s seed %-4llu direct %.4f  neighbor %.4f  gates %d\n", r.image.c_str(),
                      jisa::to_string(r.mode), static_cast<unsigned long long>(r.seed), r.direct, r.neighbor,
                      r.gate_fires);
        } else {
          std::printf("%-20s %-10s seed %-4llu FAILED: %s\n", r.image.c_str(), jisa::to_string(r.mode),
                      static_cast<unsigned long long>(r.seed), r.error.c_str());
        }
        std::fflush(stdout);
      };
      const auto report = jisa::run_benchmark(opts);
      for (const auto& a : report.aggregates) {
        std::printf("%-10s runs %d  failures %d  direct %.4f  neighbor %.4f\n", jisa::to_string(a.mode), a.runs,
                    a.failures, a.direct, a.neighbor);
      }
    } else if (*replay_cmd) {
      const auto placement = jisa::replay_session(log_path, replay_image);
      std::printf("replay matches footer (%zu pieces)\n", placement.pieces.size());
    } else if (*calib_cmd) {
      // Same corpus a session calibrates on: the scrambled pieces as dealt.
      const auto puzzle = jisa::scramble(jisa::slice_image(jisa::read_png(calib.image), calib.piece_px), calib.seed);
      std::vector<double> entropies;
      for (const auto& p : puzzle.pieces) entropies.push_back(jisa::glcm_entropy(p, jisa::Rotation(0)).value);
      const double thr = jisa::calibrate_threshold(entropies, calib.calibrate_frac);
      std::size_t below = 0;
      for (double e : entropies) below += e < thr;
      std::printf("threshold %.6f bits  (%zu of %zu pieces below)\n", thr, below, entropies.size());
    }
  } catch (const jisa::ReplayError& e) {
    std::fprintf(stderr, "replay failed: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
