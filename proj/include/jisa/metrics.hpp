#pragma once

#include <vector>

#include "jisa/puzzle.hpp"

namespace jisa {

// Global quarter turns that map a rows x cols grid onto itself: {0, 2}, or all
// four for a square grid.
std::vector<Rotation> grid_symmetries(const PuzzleSpec& spec);

// Applies a grid symmetry to every piece (cells and rotations).
Placement rotate_placement(const Placement& placement, Rotation global);

// Both metrics compare against truth after normalizing away a rigid rotation
// of the whole solution: the best score over grid_symmetries() is reported.
// Throws InputError if the placements do not cover the same piece ids.
double direct_metric(const Placement& solution, const Placement& truth);
double neighbor_metric(const Placement& solution, const Placement& truth);

}  // namespace jisa
