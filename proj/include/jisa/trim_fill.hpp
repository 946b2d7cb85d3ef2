#pragma once

#include <functional>
#include <span>
#include <vector>

#include "jisa/compatibility.hpp"
#include "jisa/puzzle.hpp"

namespace jisa {

class Forest;

enum class FrameOrientation { landscape, portrait };

// A window of the puzzle's grid size laid over a cluster's local frame.
struct TrimFrame {
  Cell origin;  // top-left, cluster coordinates
  FrameOrientation orientation = FrameOrientation::landscape;
  int rows = 0;  // puzzle grid size
  int cols = 0;

  // Extent in cluster coordinates.
  int height() const;
  int width() const;
  // True when the frame lies across the cluster frame (rows and cols swapped).
  bool turned() const { return height() != rows; }
  // Maps a cluster cell inside the frame to its solved-grid cell, and the
  // rotation every piece picks up on the way.
  Cell to_grid(Cell cluster_cell) const;
  Rotation grid_rotation() const { return turned() ? Rotation(1) : Rotation(0); }
  bool contains(Cell cluster_cell) const;

  friend bool operator==(const TrimFrame&, const TrimFrame&) = default;
};

struct FrameChoice {
  TrimFrame frame;
  int pieces_inside = 0;
};

// Orientations worth testing: one for square grids, both otherwise.
std::vector<FrameOrientation> frame_orientations(const PuzzleSpec& spec);

// Every frame the slide visits over the occupancy's bounding box.
std::vector<TrimFrame> candidate_frames(std::span<const OccupiedCell> occupancy, const PuzzleSpec& spec);
bool frame_in_bounds(const TrimFrame& frame, std::span<const OccupiedCell> occupancy, const PuzzleSpec& spec);

// Frame holding the most pieces; ties prefer landscape, then the smallest origin.
FrameChoice find_trim_frame(std::span<const OccupiedCell> occupancy, const PuzzleSpec& spec);
// Throws InputError unless the forest is a single cluster.
FrameChoice find_trim_frame(const Forest& forest, const PuzzleSpec& spec);

struct TrimResult {
  std::vector<OccupiedCell> in_frame;  // solved-grid coordinates
  std::vector<PieceId> trimmed;        // ascending
};

TrimResult trim(std::span<const OccupiedCell> occupancy, const TrimFrame& frame);

using FillObserver = std::function<void(const OccupiedCell&)>;

// Fills every empty grid cell with a trimmed piece, most-constrained gap
// first; each gap takes the piece and rotation with the lowest summed
// normalized score against its occupied neighbours. Throws InvariantError if
// the gap count differs from the trimmed count.
Placement fill_gaps(const TrimResult& trimmed, const CompatibilityTable& table, const PuzzleSpec& spec,
                    const FillObserver& on_place = {});

}  // namespace jisa
