#pragma once

#include <span>
#include <vector>

#include "jisa/puzzle.hpp"

namespace jisa {

inline constexpr int kGrayLevels = 32;

struct GlcmEntropy {
  int levels = kGrayLevels;
  int d_pixel = 1;
  int theta_degrees = 0;
  double value = 0.0;  // bits
};

// Luma (0.299, 0.587, 0.114) quantized to `levels` equal-width bins, row-major.
std::vector<int> quantize_gray(const Piece& piece, int levels = kGrayLevels);

// Symmetric co-occurrence probabilities at distance 1 along theta
// (0 = right, 90 = up, 180 = left, 270 = down), levels x levels row-major.
std::vector<double> glcm(const Piece& piece, int theta_degrees, int levels = kGrayLevels);

// Entropy of the co-occurrence matrix taken along the direction the piece's
// rotation points its own horizontal axis: theta = rotation * 90 degrees.
GlcmEntropy glcm_entropy(const Piece& piece, Rotation rotation, int levels = kGrayLevels);

// Entropy value below which `fraction` of the corpus falls. Fraction 0 gives
// a value strictly below the corpus minimum. Throws InputError on an empty corpus.
double calibrate_threshold(std::span<const double> entropies, double fraction);

}  // namespace jisa
