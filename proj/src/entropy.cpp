#include "jisa/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jisa/errors.hpp"

namespace jisa {

std::vector<int> quantize_gray(const Piece& piece, int levels) {
  const int n = piece.size;
  std::vector<int> out(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double luma = 0.299 * piece.at(r, c, 0) + 0.587 * piece.at(r, c, 1) + 0.114 * piece.at(r, c, 2);
      const int level = static_cast<int>(std::floor(luma * levels / 256.0));
      out[static_cast<std::size_t>(r) * n + c] = std::clamp(level, 0, levels - 1);
    }
  }
  return out;
}

std::vector<double> glcm(const Piece& piece, int theta_degrees, int levels) {
  Cell step;
  switch (((theta_degrees % 360) + 360) % 360) {
    case 0: step = {0, 1}; break;
    case 90: step = {-1, 0}; break;
    case 180: step = {0, -1}; break;
    case 270: step = {1, 0}; break;
    default: throw InputError("glcm direction must be a multiple of 90 degrees");
  }
  const int n = piece.size;
  const auto gray = quantize_gray(piece, levels);
  std::vector<double> m(static_cast<std::size_t>(levels) * levels, 0.0);
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int r2 = r + step.row, c2 = c + step.col;
      if (r2 < 0 || r2 >= n || c2 < 0 || c2 >= n) continue;
      const int a = gray[static_cast<std::size_t>(r) * n + c];
      const int b = gray[static_cast<std::size_t>(r2) * n + c2];
      m[static_cast<std::size_t>(a) * levels + b] += 1.0;
      m[static_cast<std::size_t>(b) * levels + a] += 1.0;
      total += 2.0;
    }
  }
  for (auto& v : m) v /= total;
  return m;
}

GlcmEntropy glcm_entropy(const Piece& piece, Rotation rotation, int levels) {
  GlcmEntropy out;
  out.levels = levels;
  out.theta_degrees = rotation.degrees();
  for (double p : glcm(piece, out.theta_degrees, levels)) {
    if (p > 0.0) out.value -= p * std::log2(p);
  }
  out.value = std::max(out.value, 0.0);  // -0.0 from a single cell of probability 1
  return out;
}

double calibrate_threshold(std::span<const double> entropies, double fraction) {
  if (entropies.empty()) throw InputError("cannot calibrate on an empty corpus");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InputError("calibration fraction must lie in [0, 1]");
  std::vector<double> sorted(entropies.begin(), entropies.end());
  std::sort(sorted.begin(), sorted.end());
  if (fraction == 0.0) return std::nextafter(sorted.front(), -std::numeric_limits<double>::infinity());
  const auto k = std::min(sorted.size() - 1, static_cast<std::size_t>(std::floor(fraction * sorted.size())));
  return sorted[k];
}

}  // namespace jisa
