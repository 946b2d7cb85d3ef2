#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "jisa/puzzle.hpp"

namespace jisa {

// Piece sides in counter-clockwise order, so rotating a piece by r moves side
// k to side k + r.
enum class Side { right = 0, top = 1, left = 2, bottom = 3 };

// Added to the near-edge gradient covariance when its smallest eigenvalue
// falls below this value.
inline constexpr double kCovarianceEpsilon = 1e-6 * 255.0 * 255.0;

using GradientRows = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct EdgeGradientStats {
  Eigen::Vector3d mu = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // after regularization
  Eigen::Matrix3d inverse = Eigen::Matrix3d::Identity();
  bool regularized = false;
};

// Per-channel gradient across the outermost pixel pair of a side, one row per
// pixel along the side (ordered top to bottom once the side is turned to face right).
GradientRows edge_gradients(const Piece& piece, Side side);

// Column mean and sample (1/(P-1)) covariance, regularized when near singular.
EdgeGradientStats gradient_stats(const GradientRows& gradients);

// Mahalanobis dissimilarity of placing `right` immediately right of `left`,
// measured against left's near-edge gradient distribution.
double mgc_dissimilarity(const Piece& left, const Piece& right);

// "Piece j placed immediately right of piece i", with both pieces first
// rotated by their respective quarter turns.
struct EdgeConfig {
  PieceId i = 0;
  PieceId j = 0;
  Rotation rot_i;
  Rotation rot_j;

  friend constexpr auto operator<=>(const EdgeConfig&, const EdgeConfig&) = default;
};

// Same physical adjacency seen with the whole pair turned 180 degrees.
constexpr EdgeConfig mirrored(const EdgeConfig& e) {
  return {e.j, e.i, e.rot_j + Rotation(2), e.rot_i + Rotation(2)};
}

// Symmetric score: D_LR(i, j) + D_RL(j, i) after rotating both pieces.
double symmetric_score(const Piece& i, const Piece& j, Rotation rot_i, Rotation rot_j);

struct PairConfigScore {
  EdgeConfig config;
  double raw = 0.0;
  double normalized = 0.0;
};

// Which of the two piece edges that meet in a config.
enum class GroupMember { left_piece, right_piece };

// Raw symmetric scores for every ordered pair and all 16 rotation configs,
// followed by per-edge second-smallest normalization.
class CompatibilityTable {
 public:
  CompatibilityTable() = default;
  // `raw` is indexed by slot(); self-pair slots are ignored.
  CompatibilityTable(int piece_count, std::vector<double> raw);

  int piece_count() const { return n_; }
  std::size_t config_count() const { return static_cast<std::size_t>(n_) * (n_ - 1) * 16; }

  double raw(const EdgeConfig& e) const { return raw_[slot(e)]; }
  // Score within one edge group: raw / that group's divisor.
  double group_normalized(const EdgeConfig& e, GroupMember member) const;
  // Ordering score: the smaller of the two group-normalized values.
  double normalized(const EdgeConfig& e) const;
  PairConfigScore score(const EdgeConfig& e) const { return {e, raw(e), normalized(e)}; }

  // Divisor of the group holding `side` of `piece` (in the piece's own frame).
  double group_divisor(PieceId piece, Side side) const { return divisor_[piece * 4 + static_cast<int>(side)]; }
  // Configs sharing that physical edge, as (piece on the left, side facing right).
  std::vector<EdgeConfig> group_members(PieceId piece, Side side) const;
  static Side left_side(const EdgeConfig& e) { return static_cast<Side>((-e.rot_i).quarter_turns()); }
  static Side right_side(const EdgeConfig& e) { return static_cast<Side>((Rotation(2) - e.rot_j).quarter_turns()); }

  // Strict weak order used to consume edges: normalized, raw, then config.
  bool key_less(const EdgeConfig& a, const EdgeConfig& b) const;

  std::size_t slot(const EdgeConfig& e) const {
    return (static_cast<std::size_t>(e.i) * n_ + e.j) * 16 + e.rot_i.quarter_turns() * 4 + e.rot_j.quarter_turns();
  }
  EdgeConfig config_at(std::size_t slot) const;
  const std::vector<double>& raw_values() const { return raw_; }
  const std::vector<double>& divisors() const { return divisor_; }

  friend bool operator==(const CompatibilityTable&, const CompatibilityTable&) = default;

 private:
  int n_ = 0;
  std::vector<double> raw_;
  std::vector<double> divisor_;  // 4 per piece
};

// Raw score vector in CompatibilityTable slot layout. `threads` <= 0 means
// hardware concurrency; results are bit-identical for any thread count.
std::vector<double> compute_raw_scores(std::span<const Piece> pieces, int threads = 1);

// Throws InputError on an empty or malformed raw table.
CompatibilityTable normalize_table(int piece_count, std::vector<double> raw);

CompatibilityTable build_table(std::span<const Piece> pieces, int threads = 1);

}  // namespace jisa
