#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "jisa/image.hpp"

namespace jisa {

using PieceId = int;

// Counter-clockwise quarter turns; arithmetic is mod 4.
class Rotation {
 public:
  constexpr Rotation() = default;
  constexpr explicit Rotation(int quarter_turns) : q_(((quarter_turns % 4) + 4) % 4) {}

  constexpr int quarter_turns() const { return q_; }
  constexpr int degrees() const { return q_ * 90; }

  constexpr Rotation operator+(Rotation o) const { return Rotation(q_ + o.q_); }
  constexpr Rotation operator-(Rotation o) const { return Rotation(q_ - o.q_); }
  constexpr Rotation operator-() const { return Rotation(-q_); }
  constexpr Rotation& operator+=(Rotation o) { return *this = *this + o; }

  friend constexpr auto operator<=>(Rotation, Rotation) = default;

 private:
  int q_ = 0;
};

// Grid cell or grid offset. Rows grow downward, columns to the right.
struct Cell {
  int row = 0;
  int col = 0;

  friend constexpr Cell operator+(Cell a, Cell b) { return {a.row + b.row, a.col + b.col}; }
  friend constexpr Cell operator-(Cell a, Cell b) { return {a.row - b.row, a.col - b.col}; }
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.row)) << 32) |
                                      static_cast<std::uint32_t>(c.col));
  }
};

// Rotates a grid offset counter-clockwise by r, matching rotate_piece on pixels.
constexpr Cell rotate_offset(Cell v, Rotation r) {
  for (int k = 0; k < r.quarter_turns(); ++k) v = Cell{-v.col, v.row};
  return v;
}

struct Piece {
  PieceId id = 0;
  int size = 0;  // P
  std::vector<std::uint8_t> pixels;  // size*size*3, row-major RGB

  std::uint8_t at(int row, int col, int channel) const {
    return pixels[(static_cast<std::size_t>(row) * size + col) * 3 + channel];
  }
  std::uint8_t& at(int row, int col, int channel) {
    return pixels[(static_cast<std::size_t>(row) * size + col) * 3 + channel];
  }

  friend bool operator==(const Piece&, const Piece&) = default;
};

struct PuzzleSpec {
  int rows = 0;
  int cols = 0;
  int piece_px = 0;

  int piece_count() const { return rows * cols; }
  friend bool operator==(const PuzzleSpec&, const PuzzleSpec&) = default;
};

struct PlacedPiece {
  PieceId id = 0;
  int row = 0;
  int col = 0;
  Rotation rot;

  Cell cell() const { return {row, col}; }
  friend bool operator==(const PlacedPiece&, const PlacedPiece&) = default;
};

// Total assignment of every piece to a grid cell of the solved frame.
// pieces[k].id == k.
struct Placement {
  PuzzleSpec spec;
  std::vector<PlacedPiece> pieces;

  // Throws InputError unless the placement is total and bijective onto the grid.
  void validate() const;
  friend bool operator==(const Placement&, const Placement&) = default;
};

struct Puzzle {
  PuzzleSpec spec;
  std::vector<Piece> pieces;
  Placement truth;
};

// One occupied cell of a cluster: which piece sits there and how it is turned.
struct OccupiedCell {
  Cell cell;
  PieceId id = 0;
  Rotation rot;

  friend bool operator==(const OccupiedCell&, const OccupiedCell&) = default;
};

inline constexpr Rgb kBackground{128, 128, 128};

Puzzle slice_image(const Image& image, int piece_px);

// Rotates and shuffles pieces; ids are reassigned densely in the new order and
// the returned truth maps each new id to its solved cell and rotation.
Puzzle scramble(const Puzzle& source, std::uint64_t seed);

Piece rotate_piece(const Piece& piece, Rotation r);

struct RenderedCluster {
  Image image;
  Cell min_cell;  // bounding box top-left in cluster coordinates
  Cell max_cell;  // inclusive
};

// Renders occupied cells over a background-filled bounding box.
// Throws InvariantError on a duplicate cell.
RenderedCluster render_cluster(std::span<const OccupiedCell> occupancy, std::span<const Piece> pieces);

// Renders a placement onto its full rows x cols grid.
Image render_placement(const Placement& placement, std::span<const Piece> pieces);

std::vector<OccupiedCell> occupancy_of(const Placement& placement);

}  // namespace jisa
