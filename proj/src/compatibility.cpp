#include "jisa/compatibility.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <limits>
#include <thread>

#include "jisa/errors.hpp"

namespace jisa {

namespace {

// Rotation that brings `side` to face right.
Rotation facing_right(Side side) { return -Rotation(static_cast<int>(side)); }

// Column `col` of a piece as a P x 3 matrix of doubles.
GradientRows column_values(const Piece& piece, int col) {
  GradientRows out(piece.size, 3);
  for (int p = 0; p < piece.size; ++p) {
    for (int c = 0; c < 3; ++c) out(p, c) = piece.at(p, col, c);
  }
  return out;
}

// Sum over rows of (g - mu)^T S^-1 (g - mu) with g = right_col - left_col.
double quadratic_sum(const EdgeGradientStats& stats, const GradientRows& left_last_col,
                     const GradientRows& right_first_col) {
  const auto& a = stats.inverse;
  const double a00 = a(0, 0), a11 = a(1, 1), a22 = a(2, 2);
  const double a01 = a(0, 1) + a(1, 0), a02 = a(0, 2) + a(2, 0), a12 = a(1, 2) + a(2, 1);
  double sum = 0.0;
  for (Eigen::Index p = 0; p < left_last_col.rows(); ++p) {
    const double d0 = right_first_col(p, 0) - left_last_col(p, 0) - stats.mu(0);
    const double d1 = right_first_col(p, 1) - left_last_col(p, 1) - stats.mu(1);
    const double d2 = right_first_col(p, 2) - left_last_col(p, 2) - stats.mu(2);
    sum += a00 * d0 * d0 + a11 * d1 * d1 + a22 * d2 * d2 + a01 * d0 * d1 + a02 * d0 * d2 + a12 * d1 * d2;
  }
  return sum;
}

// Everything needed about one rotated piece to score it against others.
struct OrientedEdges {
  EdgeGradientStats right_stats;
  GradientRows last_col;
  GradientRows first_col;
};

OrientedEdges oriented_edges(const Piece& piece, Rotation r) {
  const Piece turned = rotate_piece(piece, r);
  return {gradient_stats(edge_gradients(turned, Side::right)), column_values(turned, turned.size - 1),
          column_values(turned, 0)};
}

}  // namespace

GradientRows edge_gradients(const Piece& piece, Side side) {
  const Piece turned = side == Side::right ? piece : rotate_piece(piece, facing_right(side));
  const int n = turned.size;
  GradientRows out(n, 3);
  for (int p = 0; p < n; ++p) {
    for (int c = 0; c < 3; ++c) {
      const int diff = static_cast<int>(turned.at(p, n - 1, c)) - static_cast<int>(turned.at(p, n - 2, c));
      out(p, c) = static_cast<double>(diff);
    }
  }
  return out;
}

EdgeGradientStats gradient_stats(const GradientRows& gradients) {
  const auto rows = gradients.rows();
  if (rows < 2) throw InputError("gradient statistics need at least two rows");
  EdgeGradientStats s;
  s.mu = gradients.colwise().mean().transpose();
  const GradientRows centered = gradients.rowwise() - s.mu.transpose();
  s.covariance = (centered.transpose() * centered) / static_cast<double>(rows - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(s.covariance, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < kCovarianceEpsilon) {
    s.covariance += kCovarianceEpsilon * Eigen::Matrix3d::Identity();
    s.regularized = true;
  }
  s.inverse = s.covariance.inverse();
  return s;
}

double mgc_dissimilarity(const Piece& left, const Piece& right) {
  if (left.size != right.size) throw InputError("pieces differ in size");
  return quadratic_sum(gradient_stats(edge_gradients(left, Side::right)), column_values(left, left.size - 1),
                       column_values(right, 0));
}

double symmetric_score(const Piece& i, const Piece& j, Rotation rot_i, Rotation rot_j) {
  const Rotation half(2);
  return mgc_dissimilarity(rotate_piece(i, rot_i), rotate_piece(j, rot_j)) +
         mgc_dissimilarity(rotate_piece(j, rot_j + half), rotate_piece(i, rot_i + half));
}

CompatibilityTable::CompatibilityTable(int piece_count, std::vector<double> raw)
    : n_(piece_count), raw_(std::move(raw)), divisor_(static_cast<std::size_t>(piece_count) * 4, 1.0) {
  if (n_ < 2) throw InputError("compatibility table needs at least two pieces");
  if (raw_.size() != static_cast<std::size_t>(n_) * n_ * 16) throw InputError("raw table has the wrong size");

  std::vector<double> group;
  group.reserve(static_cast<std::size_t>(n_ - 1) * 4);
  for (PieceId x = 0; x < n_; ++x) {
    for (int k = 0; k < 4; ++k) {
      group.clear();
      for (const auto& e : group_members(x, static_cast<Side>(k))) {
        const double v = raw_[slot(e)];
        if (!(v >= 0.0)) throw InputError("raw scores must be finite and non-negative");
        group.push_back(v);
      }
      std::sort(group.begin(), group.end());
      double div = group.size() >= 2 ? group[1] : group.front();
      if (div <= 0.0) {
        // Several perfect matches: fall back to the smallest positive score.
        auto pos = std::upper_bound(group.begin(), group.end(), 0.0);
        div = pos != group.end() ? *pos : 1.0;
      }
      divisor_[static_cast<std::size_t>(x) * 4 + k] = div;
    }
  }
}

std::vector<EdgeConfig> CompatibilityTable::group_members(PieceId piece, Side side) const {
  std::vector<EdgeConfig> out;
  out.reserve(static_cast<std::size_t>(n_ - 1) * 4);
  const Rotation r = facing_right(side);
  for (PieceId y = 0; y < n_; ++y) {
    if (y == piece) continue;
    for (int s = 0; s < 4; ++s) out.push_back({piece, y, r, Rotation(s)});
  }
  return out;
}

double CompatibilityTable::group_normalized(const EdgeConfig& e, GroupMember member) const {
  const double div = member == GroupMember::left_piece ? group_divisor(e.i, left_side(e))
                                                       : group_divisor(e.j, right_side(e));
  return raw(e) / div;
}

double CompatibilityTable::normalized(const EdgeConfig& e) const {
  return std::min(group_normalized(e, GroupMember::left_piece), group_normalized(e, GroupMember::right_piece));
}

bool CompatibilityTable::key_less(const EdgeConfig& a, const EdgeConfig& b) const {
  const double na = normalized(a), nb = normalized(b);
  if (na != nb) return na < nb;
  const double ra = raw(a), rb = raw(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

EdgeConfig CompatibilityTable::config_at(std::size_t s) const {
  const int rots = static_cast<int>(s % 16);
  const std::size_t pair = s / 16;
  return {static_cast<PieceId>(pair / n_), static_cast<PieceId>(pair % n_), Rotation(rots / 4), Rotation(rots % 4)};
}

std::vector<double> compute_raw_scores(std::span<const Piece> pieces, int threads) {
  const int n = static_cast<int>(pieces.size());
  if (n < 2) throw InputError("compatibility table needs at least two pieces");
  for (const auto& p : pieces) {
    if (p.size != pieces.front().size) throw InputError("pieces differ in size");
  }
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);

  std::vector<OrientedEdges> edges(static_cast<std::size_t>(n) * 4);
  // D(x at r, y at s): y placed right of x. Laid out like the raw table.
  std::vector<double> dlr(static_cast<std::size_t>(n) * n * 16, 0.0);
  std::vector<double> raw(dlr.size(), 0.0);

  auto run_parallel = [&](auto&& body) {
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int x = t; x < n; x += threads) body(x);
      });
    }
    for (int x = 0; x < n; x += threads) body(x);
    for (auto& th : pool) th.join();
  };

  run_parallel([&](int x) {
    for (int r = 0; r < 4; ++r) edges[static_cast<std::size_t>(x) * 4 + r] = oriented_edges(pieces[x], Rotation(r));
  });
  run_parallel([&](int x) {
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      for (int r = 0; r < 4; ++r) {
        const auto& left = edges[static_cast<std::size_t>(x) * 4 + r];
        for (int s = 0; s < 4; ++s) {
          const auto& right = edges[static_cast<std::size_t>(y) * 4 + s];
          dlr[(static_cast<std::size_t>(x) * n + y) * 16 + r * 4 + s] =
              quadratic_sum(left.right_stats, left.last_col, right.first_col);
        }
      }
    }
  });
  run_parallel([&](int x) {
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
          const int r2 = (r + 2) % 4, s2 = (s + 2) % 4;
          raw[(static_cast<std::size_t>(x) * n + y) * 16 + r * 4 + s] =
              dlr[(static_cast<std::size_t>(x) * n + y) * 16 + r * 4 + s] +
              dlr[(static_cast<std::size_t>(y) * n + x) * 16 + s2 * 4 + r2];
        }
      }
    }
  });
  return raw;
}

CompatibilityTable normalize_table(int piece_count, std::vector<double> raw) {
  if (raw.empty()) throw InputError("empty compatibility table");
  return CompatibilityTable(piece_count, std::move(raw));
}

CompatibilityTable build_table(std::span<const Piece> pieces, int threads) {
  return normalize_table(static_cast<int>(pieces.size()), compute_raw_scores(pieces, threads));
}

}  // namespace jisa
