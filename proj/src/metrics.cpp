#include "jisa/metrics.hpp"

#include <algorithm>
#include <array>

#include "jisa/errors.hpp"

namespace jisa {

namespace {

void check_comparable(const Placement& solution, const Placement& truth) {
  if (solution.pieces.size() != truth.pieces.size()) {
    throw InputError("solution and truth cover different piece sets");
  }
  for (std::size_t k = 0; k < truth.pieces.size(); ++k) {
    if (solution.pieces[k].id != truth.pieces[k].id) throw InputError("solution and truth ids differ");
  }
  if (truth.pieces.empty()) throw InputError("empty placement");
}

int count_direct(const Placement& solution, const Placement& truth) {
  int hits = 0;
  for (std::size_t k = 0; k < truth.pieces.size(); ++k) hits += solution.pieces[k] == truth.pieces[k];
  return hits;
}

// Ordered truth-adjacent pairs (both directions of every 4-neighbour pair).
int count_neighbors(const Placement& solution, const Placement& truth, int* total) {
  const auto& spec = truth.spec;
  std::vector<PieceId> at(static_cast<std::size_t>(spec.rows) * spec.cols, -1);
  for (const auto& p : truth.pieces) at[static_cast<std::size_t>(p.row) * spec.cols + p.col] = p.id;
  constexpr std::array<Cell, 4> kDirs{{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};
  int hits = 0;
  int pairs = 0;
  for (const auto& a : truth.pieces) {
    for (Cell d : kDirs) {
      const Cell nb = a.cell() + d;
      if (nb.row < 0 || nb.row >= spec.rows || nb.col < 0 || nb.col >= spec.cols) continue;
      const PieceId b = at[static_cast<std::size_t>(nb.row) * spec.cols + nb.col];
      if (b < 0) continue;
      ++pairs;
      const auto& sa = solution.pieces[a.id];
      const auto& sb = solution.pieces[b];
      if (sa.rot == a.rot && sb.rot == truth.pieces[b].rot && sb.cell() - sa.cell() == d) ++hits;
    }
  }
  *total = pairs;
  return hits;
}

}  // namespace

std::vector<Rotation> grid_symmetries(const PuzzleSpec& spec) {
  if (spec.rows == spec.cols) return {Rotation(0), Rotation(1), Rotation(2), Rotation(3)};
  return {Rotation(0), Rotation(2)};
}

Placement rotate_placement(const Placement& placement, Rotation global) {
  const auto& spec = placement.spec;
  if (global.quarter_turns() % 2 == 1 && spec.rows != spec.cols) {
    throw InputError("odd quarter turns do not preserve a non-square grid");
  }
  Placement out = placement;
  for (auto& p : out.pieces) {
    Cell c = rotate_offset(p.cell(), global);
    // Shift back into the grid: each CCW turn moves column 0 to the bottom row.
    switch (global.quarter_turns()) {
      case 1: c = c + Cell{spec.cols - 1, 0}; break;
      case 2: c = c + Cell{spec.rows - 1, spec.cols - 1}; break;
      case 3: c = c + Cell{0, spec.rows - 1}; break;
      default: break;
    }
    p.row = c.row;
    p.col = c.col;
    p.rot += global;
  }
  return out;
}

double direct_metric(const Placement& solution, const Placement& truth) {
  check_comparable(solution, truth);
  int best = 0;
  for (Rotation g : grid_symmetries(truth.spec)) {
    best = std::max(best, count_direct(rotate_placement(solution, g), truth));
  }
  return static_cast<double>(best) / static_cast<double>(truth.pieces.size());
}

double neighbor_metric(const Placement& solution, const Placement& truth) {
  check_comparable(solution, truth);
  int best = 0;
  int total = 0;
  for (Rotation g : grid_symmetries(truth.spec)) {
    best = std::max(best, count_neighbors(rotate_placement(solution, g), truth, &total));
  }
  if (total == 0) return 1.0;  // single-piece puzzle has no pairs
  return static_cast<double>(best) / static_cast<double>(total);
}

}  // namespace jisa
