#pragma once

// Independent re-derivations used to check the library. Deliberately naive:
// plain loops, closed-form 3x3 algebra, no shared code with src/.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "jisa/compatibility.hpp"
#include "jisa/puzzle.hpp"

namespace oracle {

using jisa::Placement;
using jisa::PlacedPiece;
using jisa::Rotation;

// ---- metrics ---------------------------------------------------------------

// Whole-grid counter-clockwise turn by q, written out per case.
inline PlacedPiece turn(const PlacedPiece& p, int q, int rows, int cols) {
  switch (((q % 4) + 4) % 4) {
    case 0: return p;
    case 1: return {p.id, cols - 1 - p.col, p.row, p.rot + Rotation(1)};
    case 2: return {p.id, rows - 1 - p.row, cols - 1 - p.col, p.rot + Rotation(2)};
    default: return {p.id, p.col, rows - 1 - p.row, p.rot + Rotation(3)};
  }
}

inline std::vector<int> turns_for(int rows, int cols) {
  return rows == cols ? std::vector<int>{0, 1, 2, 3} : std::vector<int>{0, 2};
}

inline double direct(const Placement& sol, const Placement& truth) {
  const int R = truth.spec.rows, C = truth.spec.cols;
  int best = 0;
  for (int q : turns_for(R, C)) {
    int hits = 0;
    for (std::size_t k = 0; k < sol.pieces.size(); ++k) {
      const auto s = turn(sol.pieces[k], q, R, C);
      const auto& t = truth.pieces[k];
      hits += s.row == t.row && s.col == t.col && s.rot == t.rot;
    }
    best = std::max(best, hits);
  }
  return static_cast<double>(best) / truth.pieces.size();
}

inline double neighbor(const Placement& sol, const Placement& truth) {
  const int R = truth.spec.rows, C = truth.spec.cols;
  const int dr[4] = {0, 1, 0, -1}, dc[4] = {1, 0, -1, 0};
  int best = 0, total = 0;
  for (int q : turns_for(R, C)) {
    std::vector<PlacedPiece> s;
    for (const auto& p : sol.pieces) s.push_back(turn(p, q, R, C));
    std::vector<int> at_truth(R * C, -1);
    for (const auto& p : truth.pieces) at_truth[p.row * C + p.col] = p.id;
    int hits = 0;
    total = 0;
    for (const auto& a : truth.pieces) {
      for (int d = 0; d < 4; ++d) {
        const int r = a.row + dr[d], c = a.col + dc[d];
        if (r < 0 || r >= R || c < 0 || c >= C) continue;
        ++total;
        const int b = at_truth[r * C + c];
        const auto& sa = s[a.id];
        const auto& sb = s[b];
        hits += sb.row == sa.row + dr[d] && sb.col == sa.col + dc[d] && sa.rot == a.rot &&
                sb.rot == truth.pieces[b].rot;
      }
    }
    best = std::max(best, hits);
  }
  return static_cast<double>(best) / total;
}

// ---- MGC ---------------------------------------------------------------------

using Pixels = std::vector<std::array<int, 3>>;  // P*P, row-major

inline Pixels pixels_of(const jisa::Piece& p) {
  Pixels out(static_cast<std::size_t>(p.size) * p.size);
  for (int r = 0; r < p.size; ++r) {
    for (int c = 0; c < p.size; ++c) {
      for (int ch = 0; ch < 3; ++ch) out[r * p.size + c][ch] = p.at(r, c, ch);
    }
  }
  return out;
}

// Counter-clockwise quarter turns: the pixel at (r, c) travels to (P-1-c, r).
inline Pixels turned(const Pixels& in, int P, int q) {
  Pixels cur = in;
  for (int k = 0; k < ((q % 4) + 4) % 4; ++k) {
    Pixels next(cur.size());
    for (int r = 0; r < P; ++r) {
      for (int c = 0; c < P; ++c) next[(P - 1 - c) * P + r] = cur[r * P + c];
    }
    cur = next;
  }
  return cur;
}

using M3 = std::array<std::array<double, 3>, 3>;
using V3 = std::array<double, 3>;

inline double det3(const M3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Inverse by the adjugate.
inline M3 inverse3(const M3& m) {
  const double d = det3(m);
  M3 out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      out[r][c] = (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) / d;
    }
  }
  return out;
}

// Smallest eigenvalue of a symmetric 3x3 matrix (trigonometric closed form).
inline double min_eigenvalue(const M3& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  if (p1 == 0.0) return std::min({a[0][0], a[1][1], a[2][2]});
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  M3 b{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) b[r][c] = (a[r][c] - (r == c ? q : 0.0)) / p;
  }
  const double half_det = std::clamp(det3(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(half_det) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

struct Stats {
  V3 mu{};
  M3 cov{};
  bool regularized = false;
};

inline Stats stats_of(const std::vector<V3>& rows, double eps) {
  Stats s;
  const double n = static_cast<double>(rows.size());
  for (const auto& g : rows) {
    for (int k = 0; k < 3; ++k) s.mu[k] += g[k] / n;
  }
  for (const auto& g : rows) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) s.cov[a][b] += (g[a] - s.mu[a]) * (g[b] - s.mu[b]) / (n - 1.0);
    }
  }
  if (min_eigenvalue(s.cov) < eps) {
    s.regularized = true;
    for (int k = 0; k < 3; ++k) s.cov[k][k] += eps;
  }
  return s;
}

inline double mahalanobis_sum(const std::vector<V3>& cross, const Stats& s) {
  const M3 inv = inverse3(s.cov);
  double total = 0.0;
  for (const auto& g : cross) {
    V3 d{g[0] - s.mu[0], g[1] - s.mu[1], g[2] - s.mu[2]};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) total += d[a] * inv[a][b] * d[b];
    }
  }
  return total;
}

// D_LR: right edge of L against the left edge of R, using L's statistics.
inline double d_lr(const Pixels& L, const Pixels& R, int P, double eps) {
  std::vector<V3> near, cross;
  for (int p = 0; p < P; ++p) {
    V3 g{}, x{};
    for (int ch = 0; ch < 3; ++ch) {
      g[ch] = L[p * P + P - 1][ch] - L[p * P + P - 2][ch];
      x[ch] = R[p * P][ch] - L[p * P + P - 1][ch];
    }
    near.push_back(g);
    cross.push_back(x);
  }
  return mahalanobis_sum(cross, stats_of(near, eps));
}

// D_RL: left edge of R against the right edge of L, using R's statistics.
inline double d_rl(const Pixels& L, const Pixels& R, int P, double eps) {
  std::vector<V3> near, cross;
  for (int p = 0; p < P; ++p) {
    V3 g{}, x{};
    for (int ch = 0; ch < 3; ++ch) {
      g[ch] = R[p * P][ch] - R[p * P + 1][ch];
      x[ch] = L[p * P + P - 1][ch] - R[p * P][ch];
    }
    near.push_back(g);
    cross.push_back(x);
  }
  return mahalanobis_sum(cross, stats_of(near, eps));
}

inline double symmetric_score(const jisa::Piece& i, const jisa::Piece& j, int rot_i, int rot_j, double eps) {
  const int P = i.size;
  const Pixels L = turned(pixels_of(i), P, rot_i);
  const Pixels R = turned(pixels_of(j), P, rot_j);
  return d_lr(L, R, P, eps) + d_rl(L, R, P, eps);
}

inline bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Raw score of every ordered pair/config, keyed by (i, j, rot_i, rot_j).
using RawTable = std::map<std::array<int, 4>, double>;

inline RawTable raw_table(const std::vector<jisa::Piece>& pieces, double eps) {
  RawTable out;
  const int n = static_cast<int>(pieces.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int ri = 0; ri < 4; ++ri) {
        for (int rj = 0; rj < 4; ++rj) out[{i, j, ri, rj}] = symmetric_score(pieces[i], pieces[j], ri, rj, eps);
      }
    }
  }
  return out;
}

// Piece `a`'s physical side k (0 right, 1 top, 2 left, 3 bottom) against every
// side m of every other piece b: place a turned so side k faces right, b turned
// so side m faces left.
inline std::vector<std::array<int, 4>> edge_group(int a, int k, int n) {
  std::vector<std::array<int, 4>> out;
  for (int b = 0; b < n; ++b) {
    if (b == a) continue;
    for (int m = 0; m < 4; ++m) out.push_back({a, b, (4 - k) % 4, ((2 - m) % 4 + 4) % 4});
  }
  return out;
}

inline double second_smallest(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() >= 2 ? v[1] : v.front();
}

// ---- GLCM --------------------------------------------------------------------

inline double glcm_entropy(const jisa::Piece& piece, int theta_degrees, int levels) {
  const int P = piece.size;
  std::vector<int> gray(static_cast<std::size_t>(P) * P);
  for (int r = 0; r < P; ++r) {
    for (int c = 0; c < P; ++c) {
      const double y = 0.299 * piece.at(r, c, 0) + 0.587 * piece.at(r, c, 1) + 0.114 * piece.at(r, c, 2);
      gray[r * P + c] = std::min(levels - 1, static_cast<int>(std::floor(y * levels / 256.0)));
    }
  }
  int dr = 0, dc = 0;
  switch (theta_degrees) {
    case 0: dc = 1; break;
    case 90: dr = -1; break;
    case 180: dc = -1; break;
    default: dr = 1; break;
  }
  std::map<std::pair<int, int>, double> counts;
  double total = 0;
  for (int r = 0; r < P; ++r) {
    for (int c = 0; c < P; ++c) {
      const int r2 = r + dr, c2 = c + dc;
      if (r2 < 0 || r2 >= P || c2 < 0 || c2 >= P) continue;
      counts[{gray[r * P + c], gray[r2 * P + c2]}] += 1;
      counts[{gray[r2 * P + c2], gray[r * P + c]}] += 1;
      total += 2;
    }
  }
  double h = 0.0;
  for (const auto& [key, n] : counts) {
    const double p = n / total;
    h -= p * std::log2(p);
  }
  return h;
}

// ---- geometry --------------------------------------------------------------

// Where "right of" points after a counter-clockwise turn of the whole layout.
inline std::pair<int, int> right_after_turn(int g) {
  static constexpr std::array<std::pair<int, int>, 4> kRight{{{0, 1}, {-1, 0}, {0, -1}, {1, 0}}};
  return kRight[((g % 4) + 4) % 4];
}

// A config (i, j, ri, rj) holds in a layout when the layout is the config's
// picture turned by some g: both rotations shifted by g, and j sits at i plus
// "right" turned by g.
inline bool config_holds(const jisa::EdgeConfig& e, int row_i, int col_i, int rot_i, int row_j, int col_j,
                         int rot_j) {
  const int g = ((rot_i - e.rot_i.quarter_turns()) % 4 + 4) % 4;
  if (((rot_j - e.rot_j.quarter_turns()) % 4 + 4) % 4 != g) return false;
  const auto [dr, dc] = right_after_turn(g);
  return row_j - row_i == dr && col_j - col_i == dc;
}

}  // namespace oracle
