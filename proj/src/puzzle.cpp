#include "jisa/puzzle.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "jisa/errors.hpp"

namespace jisa {

void Placement::validate() const {
  const int n = spec.piece_count();
  if (static_cast<int>(pieces.size()) != n) {
    throw InputError("placement has " + std::to_string(pieces.size()) + " pieces, grid has " +
                     std::to_string(n));
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k) {
    const auto& p = pieces[k];
    if (p.id != k) throw InputError("placement ids must be dense and ordered");
    if (p.row < 0 || p.row >= spec.rows || p.col < 0 || p.col >= spec.cols) {
      throw InputError("piece " + std::to_string(k) + " placed outside the grid");
    }
    auto& s = seen[static_cast<std::size_t>(p.row) * spec.cols + p.col];
    if (s) throw InputError("two pieces share cell (" + std::to_string(p.row) + "," + std::to_string(p.col) + ")");
    s = 1;
  }
}

Puzzle slice_image(const Image& image, int piece_px) {
  if (piece_px < 2) throw InputError("piece size must be at least 2 px");
  if (image.width <= 0 || image.height <= 0 || image.width % piece_px != 0 || image.height % piece_px != 0) {
    throw DimensionError("image " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                         " is not a multiple of piece size " + std::to_string(piece_px));
  }
  Puzzle out;
  out.spec = {image.height / piece_px, image.width / piece_px, piece_px};
  out.truth.spec = out.spec;
  const int n = out.spec.piece_count();
  out.pieces.reserve(n);
  out.truth.pieces.reserve(n);
  for (int r = 0; r < out.spec.rows; ++r) {
    for (int c = 0; c < out.spec.cols; ++c) {
      Piece p;
      p.id = r * out.spec.cols + c;
      p.size = piece_px;
      p.pixels.resize(static_cast<std::size_t>(piece_px) * piece_px * 3);
      for (int y = 0; y < piece_px; ++y) {
        const auto* src = &image.data[(static_cast<std::size_t>(r * piece_px + y) * image.width + c * piece_px) * 3];
        std::copy_n(src, piece_px * 3, &p.pixels[static_cast<std::size_t>(y) * piece_px * 3]);
      }
      out.truth.pieces.push_back({p.id, r, c, Rotation(0)});
      out.pieces.push_back(std::move(p));
    }
  }
  return out;
}

Puzzle scramble(const Puzzle& source, std::uint64_t seed) {
  if (source.pieces.empty()) throw InputError("cannot scramble an empty puzzle");
  std::mt19937_64 rng(seed);
  const int n = static_cast<int>(source.pieces.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<int> turn(0, 3);

  Puzzle out;
  out.spec = source.spec;
  out.truth.spec = source.spec;
  out.pieces.reserve(n);
  out.truth.pieces.resize(n);
  for (int k = 0; k < n; ++k) {
    const Piece& orig = source.pieces[order[k]];
    const Rotation applied(turn(rng));
    Piece p = rotate_piece(orig, applied);
    p.id = k;
    out.pieces.push_back(std::move(p));
    const PlacedPiece& t = source.truth.pieces[orig.id];
    out.truth.pieces[k] = {k, t.row, t.col, t.rot - applied};
  }
  return out;
}

Piece rotate_piece(const Piece& piece, Rotation r) {
  Piece cur = piece;
  const int n = piece.size;
  for (int k = 0; k < r.quarter_turns(); ++k) {
    Piece next = cur;
    for (int row = 0; row < n; ++row) {
      for (int col = 0; col < n; ++col) {
        for (int ch = 0; ch < 3; ++ch) next.at(row, col, ch) = cur.at(col, n - 1 - row, ch);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

RenderedCluster render_cluster(std::span<const OccupiedCell> occupancy, std::span<const Piece> pieces) {
  if (occupancy.empty()) throw InputError("cannot render an empty cluster");
  Cell lo = occupancy.front().cell;
  Cell hi = lo;
  std::unordered_set<Cell, CellHash> seen;
  for (const auto& oc : occupancy) {
    if (!seen.insert(oc.cell).second) throw InvariantError("duplicate cell in cluster occupancy");
    lo = {std::min(lo.row, oc.cell.row), std::min(lo.col, oc.cell.col)};
    hi = {std::max(hi.row, oc.cell.row), std::max(hi.col, oc.cell.col)};
  }
  const int px = pieces.front().size;
  RenderedCluster out{Image((hi.col - lo.col + 1) * px, (hi.row - lo.row + 1) * px, kBackground), lo, hi};
  for (const auto& oc : occupancy) {
    const Piece turned = rotate_piece(pieces[oc.id], oc.rot);
    const int y0 = (oc.cell.row - lo.row) * px;
    const int x0 = (oc.cell.col - lo.col) * px;
    for (int y = 0; y < px; ++y) {
      std::copy_n(&turned.pixels[static_cast<std::size_t>(y) * px * 3], px * 3,
                  &out.image.data[(static_cast<std::size_t>(y0 + y) * out.image.width + x0) * 3]);
    }
  }
  return out;
}

std::vector<OccupiedCell> occupancy_of(const Placement& placement) {
  std::vector<OccupiedCell> out;
  out.reserve(placement.pieces.size());
  for (const auto& p : placement.pieces) out.push_back({p.cell(), p.id, p.rot});
  return out;
}

Image render_placement(const Placement& placement, std::span<const Piece> pieces) {
  auto occ = occupancy_of(placement);
  auto rendered = render_cluster(occ, pieces);
  if (rendered.min_cell == Cell{0, 0} &&
      rendered.max_cell == Cell{placement.spec.rows - 1, placement.spec.cols - 1}) {
    return std::move(rendered.image);
  }
  // Partially filled border rows or columns: copy into the full grid.
  const int px = placement.spec.piece_px;
  Image full(placement.spec.cols * px, placement.spec.rows * px, kBackground);
  for (int y = 0; y < rendered.image.height; ++y) {
    for (int x = 0; x < rendered.image.width; ++x) {
      full.set_pixel(rendered.min_cell.row * px + y, rendered.min_cell.col * px + x, rendered.image.pixel(y, x));
    }
  }
  return full;
}

}  // namespace jisa
