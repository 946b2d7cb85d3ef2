#include "jisa/trim_fill.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "jisa/errors.hpp"
#include "jisa/forest.hpp"

namespace jisa {

namespace {

struct Box {
  Cell lo;
  Cell hi;  // inclusive
};

Box bounding_box(std::span<const OccupiedCell> occupancy) {
  if (occupancy.empty()) throw InputError("empty occupancy");
  Box b{occupancy.front().cell, occupancy.front().cell};
  for (const auto& oc : occupancy) {
    b.lo = {std::min(b.lo.row, oc.cell.row), std::min(b.lo.col, oc.cell.col)};
    b.hi = {std::max(b.hi.row, oc.cell.row), std::max(b.hi.col, oc.cell.col)};
  }
  return b;
}

// Origins along one axis: windows inside the box, or covering it when the
// box is narrower than the window.
std::pair<int, int> origin_span(int lo, int hi, int extent) {
  const int a = lo;
  const int b = hi - extent + 1;
  return {std::min(a, b), std::max(a, b)};
}

TrimFrame make_frame(Cell origin, FrameOrientation o, const PuzzleSpec& spec) {
  return TrimFrame{origin, o, spec.rows, spec.cols};
}

// Directions from a gap to its neighbour, indexed by the quarter turns that
// bring the direction to "right".
constexpr std::array<Cell, 4> kToNeighbour{{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};

}  // namespace

int TrimFrame::height() const {
  const int lo = std::min(rows, cols), hi = std::max(rows, cols);
  return orientation == FrameOrientation::landscape ? lo : hi;
}

int TrimFrame::width() const {
  const int lo = std::min(rows, cols), hi = std::max(rows, cols);
  return orientation == FrameOrientation::landscape ? hi : lo;
}

Cell TrimFrame::to_grid(Cell cluster_cell) const {
  const Cell local = cluster_cell - origin;
  if (!turned()) return local;
  // Turn the frame a quarter counter-clockwise so it becomes rows x cols.
  return {width() - 1 - local.col, local.row};
}

bool TrimFrame::contains(Cell c) const {
  return c.row >= origin.row && c.row < origin.row + height() && c.col >= origin.col &&
         c.col < origin.col + width();
}

std::vector<FrameOrientation> frame_orientations(const PuzzleSpec& spec) {
  if (spec.rows == spec.cols) return {FrameOrientation::landscape};
  return {FrameOrientation::landscape, FrameOrientation::portrait};
}

std::vector<TrimFrame> candidate_frames(std::span<const OccupiedCell> occupancy, const PuzzleSpec& spec) {
  const Box box = bounding_box(occupancy);
  std::vector<TrimFrame> out;
  for (auto o : frame_orientations(spec)) {
    const TrimFrame shape = make_frame({}, o, spec);
    const auto [r0, r1] = origin_span(box.lo.row, box.hi.row, shape.height());
    const auto [c0, c1] = origin_span(box.lo.col, box.hi.col, shape.width());
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) out.push_back(make_frame({r, c}, o, spec));
    }
  }
  return out;
}

bool frame_in_bounds(const TrimFrame& frame, std::span<const OccupiedCell> occupancy, const PuzzleSpec& spec) {
  if (frame.rows != spec.rows || frame.cols != spec.cols) return false;
  const auto orientations = frame_orientations(spec);
  if (std::find(orientations.begin(), orientations.end(), frame.orientation) == orientations.end()) return false;
  const Box box = bounding_box(occupancy);
  const auto [r0, r1] = origin_span(box.lo.row, box.hi.row, frame.height());
  const auto [c0, c1] = origin_span(box.lo.col, box.hi.col, frame.width());
  return frame.origin.row >= r0 && frame.origin.row <= r1 && frame.origin.col >= c0 && frame.origin.col <= c1;
}

FrameChoice find_trim_frame(std::span<const OccupiedCell> occupancy, const PuzzleSpec& spec) {
  const Box box = bounding_box(occupancy);
  const int h = box.hi.row - box.lo.row + 1;
  const int w = box.hi.col - box.lo.col + 1;
  // Summed-area table over the bounding box.
  std::vector<int> sat(static_cast<std::size_t>(h + 1) * (w + 1), 0);
  auto at = [&](int r, int c) -> int& { return sat[static_cast<std::size_t>(r) * (w + 1) + c]; };
  for (const auto& oc : occupancy) at(oc.cell.row - box.lo.row + 1, oc.cell.col - box.lo.col + 1) += 1;
  for (int r = 1; r <= h; ++r) {
    for (int c = 1; c <= w; ++c) at(r, c) += at(r - 1, c) + at(r, c - 1) - at(r - 1, c - 1);
  }
  auto count = [&](const TrimFrame& f) {
    const int r0 = std::clamp(f.origin.row - box.lo.row, 0, h), r1 = std::clamp(f.origin.row - box.lo.row + f.height(), 0, h);
    const int c0 = std::clamp(f.origin.col - box.lo.col, 0, w), c1 = std::clamp(f.origin.col - box.lo.col + f.width(), 0, w);
    return at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0);
  };

  FrameChoice best{{}, -1};
  // Candidates arrive landscape first, origins ascending; only a strict
  // improvement replaces the incumbent.
  for (const auto& f : candidate_frames(occupancy, spec)) {
    const int n = count(f);
    if (n > best.pieces_inside) best = {f, n};
  }
  return best;
}

FrameChoice find_trim_frame(const Forest& forest, const PuzzleSpec& spec) {
  if (forest.root_count() != 1) throw InputError("trim frame needs a single cluster");
  return find_trim_frame(forest.occupancy(forest.roots().front()), spec);
}

TrimResult trim(std::span<const OccupiedCell> occupancy, const TrimFrame& frame) {
  TrimResult out;
  for (const auto& oc : occupancy) {
    if (frame.contains(oc.cell)) {
      out.in_frame.push_back({frame.to_grid(oc.cell), oc.id, oc.rot + frame.grid_rotation()});
    } else {
      out.trimmed.push_back(oc.id);
    }
  }
  std::sort(out.trimmed.begin(), out.trimmed.end());
  std::sort(out.in_frame.begin(), out.in_frame.end(),
            [](const OccupiedCell& a, const OccupiedCell& b) { return a.cell < b.cell; });
  return out;
}

Placement fill_gaps(const TrimResult& trimmed, const CompatibilityTable& table, const PuzzleSpec& spec,
                    const FillObserver& on_place) {
  const int rows = spec.rows, cols = spec.cols;
  const int n = spec.piece_count();
  std::vector<PieceId> grid(static_cast<std::size_t>(n), -1);
  std::vector<Rotation> grid_rot(static_cast<std::size_t>(n));
  for (const auto& oc : trimmed.in_frame) {
    if (oc.cell.row < 0 || oc.cell.row >= rows || oc.cell.col < 0 || oc.cell.col >= cols) {
      throw InvariantError("in-frame piece outside the grid");
    }
    auto idx = static_cast<std::size_t>(oc.cell.row) * cols + oc.cell.col;
    if (grid[idx] >= 0) throw InvariantError("two in-frame pieces share a cell");
    grid[idx] = oc.id;
    grid_rot[idx] = oc.rot;
  }
  const auto gaps = static_cast<std::size_t>(std::count(grid.begin(), grid.end(), -1));
  if (gaps != trimmed.trimmed.size()) throw InvariantError("gap count differs from trimmed piece count");

  auto occupied = [&](Cell c) {
    return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols &&
           grid[static_cast<std::size_t>(c.row) * cols + c.col] >= 0;
  };

  std::vector<PieceId> remaining = trimmed.trimmed;
  for (std::size_t placed = 0; placed < gaps; ++placed) {
    Cell gap{-1, -1};
    int best_neighbours = -1;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (occupied({r, c})) continue;
        int k = 0;
        for (Cell d : kToNeighbour) k += occupied(Cell{r, c} + d);
        if (k > best_neighbours) {
          best_neighbours = k;
          gap = {r, c};
        }
      }
    }

    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_slot = 0;
    Rotation best_rot;
    for (std::size_t slot = 0; slot < remaining.size(); ++slot) {
      const PieceId p = remaining[slot];
      for (int q = 0; q < 4; ++q) {
        const Rotation rot(q);
        double sum = 0.0;
        for (int d = 0; d < 4; ++d) {
          const Cell nb = gap + kToNeighbour[d];
          if (!occupied(nb)) continue;
          const auto idx = static_cast<std::size_t>(nb.row) * cols + nb.col;
          const Rotation turn(d);
          sum += table.normalized({p, grid[idx], rot + turn, grid_rot[idx] + turn});
        }
        // `remaining` is ascending, so the first minimum has the smallest (id, rot).
        if (sum < best_score) {
          best_score = sum;
          best_slot = slot;
          best_rot = rot;
        }
      }
    }
    const PieceId chosen = remaining[best_slot];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_slot));
    const auto idx = static_cast<std::size_t>(gap.row) * cols + gap.col;
    grid[idx] = chosen;
    grid_rot[idx] = best_rot;
    if (on_place) on_place({gap, chosen, best_rot});
  }

  Placement out;
  out.spec = spec;
  out.pieces.resize(static_cast<std::size_t>(n));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto idx = static_cast<std::size_t>(r) * cols + c;
      out.pieces[grid[idx]] = {grid[idx], r, c, grid_rot[idx]};
    }
  }
  out.validate();
  return out;
}

}  // namespace jisa
