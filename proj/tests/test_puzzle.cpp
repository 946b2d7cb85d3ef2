#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "jisa/errors.hpp"
#include "jisa/image.hpp"
#include "jisa/puzzle.hpp"
#include "support.hpp"

using namespace jisa;
using testing_support::make_piece;
using testing_support::textured_image;

namespace {

// Pixel bytes of a piece in canonical orientation: the smallest of its four turns.
std::vector<std::uint8_t> canonical_pixels(const Piece& p) {
  std::vector<std::uint8_t> best = p.pixels;
  for (int q = 1; q < 4; ++q) best = std::min(best, rotate_piece(p, Rotation(q)).pixels);
  return best;
}

}  // namespace

TEST_CASE("rotation arithmetic wraps mod 4") {
  CHECK(Rotation(5).quarter_turns() == 1);
  CHECK(Rotation(-1).quarter_turns() == 3);
  CHECK((Rotation(3) + Rotation(2)).quarter_turns() == 1);
  CHECK((Rotation(1) - Rotation(3)).quarter_turns() == 2);
  CHECK(Rotation(3).degrees() == 270);
  CHECK(rotate_offset({0, 1}, Rotation(1)) == Cell{-1, 0});
  CHECK(rotate_offset({2, -3}, Rotation(4)) == Cell{2, -3});
}

TEST_CASE("slice_image grid and ground truth") {
  SUBCASE("672x504 gives 432 pieces") {
    const auto puzzle = slice_image(Image(672, 504), 28);
    CHECK(puzzle.spec == PuzzleSpec{18, 24, 28});
    CHECK(puzzle.pieces.size() == 432);
    CHECK(puzzle.truth.pieces.size() == 432);
  }
  SUBCASE("single cell") {
    const auto puzzle = slice_image(Image(28, 28, {9, 8, 7}), 28);
    REQUIRE(puzzle.pieces.size() == 1);
    CHECK(puzzle.truth.pieces[0] == PlacedPiece{0, 0, 0, Rotation(0)});
  }
  SUBCASE("row-major ids hold their image block") {
    const Image img = textured_image(56, 84, 3);
    const auto puzzle = slice_image(img, 28);
    CHECK(puzzle.spec.rows == 3);
    CHECK(puzzle.spec.cols == 2);
    for (const auto& p : puzzle.pieces) {
      const auto& t = puzzle.truth.pieces[p.id];
      CHECK(t.row == p.id / 2);
      CHECK(t.col == p.id % 2);
      CHECK(t.rot == Rotation(0));
      for (int ch = 0; ch < 3; ++ch) {
        CHECK(p.at(0, 0, ch) == img.at(t.row * 28, t.col * 28, ch));
        CHECK(p.at(27, 13, ch) == img.at(t.row * 28 + 27, t.col * 28 + 13, ch));
      }
    }
  }
  SUBCASE("56x56 reassembles byte-exactly") {
    const Image img = textured_image(56, 56, 4);
    const auto puzzle = slice_image(img, 28);
    CHECK(puzzle.pieces.size() == 4);
    CHECK(render_placement(puzzle.truth, puzzle.pieces) == img);
  }
  SUBCASE("non-multiple dimensions are rejected") {
    CHECK_THROWS_AS(slice_image(Image(57, 56), 28), DimensionError);
    CHECK_THROWS_AS(slice_image(Image(56, 55), 28), DimensionError);
    CHECK_THROWS_AS(slice_image(Image(56, 56), 1), InputError);
  }
}

TEST_CASE("rotate_piece on a hand-labelled 2x2 piece") {
  // a b      b d
  // c d  ->  a c   (one counter-clockwise quarter turn)
  const Rgb a{1, 0, 0}, b{2, 0, 0}, c{3, 0, 0}, d{4, 0, 0};
  const Piece p = make_piece(0, 2, [&](int r, int col) { return r == 0 ? (col == 0 ? a : b) : (col == 0 ? c : d); });
  const Piece q = rotate_piece(p, Rotation(1));
  CHECK(q.at(0, 0, 0) == 2);
  CHECK(q.at(0, 1, 0) == 4);
  CHECK(q.at(1, 0, 0) == 1);
  CHECK(q.at(1, 1, 0) == 3);
  const Piece h = rotate_piece(p, Rotation(2));
  CHECK(h.at(0, 0, 0) == 4);
  CHECK(h.at(0, 1, 0) == 3);
  CHECK(h.at(1, 0, 0) == 2);
  CHECK(h.at(1, 1, 0) == 1);

  CHECK(rotate_piece(p, Rotation(0)) == p);
  Piece turned = p;
  for (int k = 0; k < 4; ++k) turned = rotate_piece(turned, Rotation(1));
  CHECK(turned == p);
  CHECK(rotate_piece(rotate_piece(p, Rotation(1)), Rotation(2)) == rotate_piece(p, Rotation(3)));
}

TEST_CASE("scramble is deterministic and conserves pieces") {
  const auto source = slice_image(textured_image(24 * 28, 18 * 28, 5), 28);
  const auto a = scramble(source, 77);
  const auto b = scramble(source, 77);
  const auto c = scramble(source, 78);
  CHECK(a.pieces == b.pieces);
  CHECK(a.truth == b.truth);
  CHECK(a.pieces != c.pieces);
  REQUIRE(a.pieces.size() == 432);
  a.truth.validate();

  std::multiset<std::vector<std::uint8_t>> before, after;
  for (const auto& p : source.pieces) before.insert(canonical_pixels(p));
  for (const auto& p : a.pieces) after.insert(canonical_pixels(p));
  CHECK(before == after);

  for (std::size_t k = 0; k < a.pieces.size(); ++k) CHECK(a.pieces[k].id == static_cast<int>(k));
  // Truth undoes the scramble.
  CHECK(render_placement(a.truth, a.pieces) == render_placement(source.truth, source.pieces));

  std::map<int, int> rotations;
  for (const auto& t : a.truth.pieces) ++rotations[t.rot.quarter_turns()];
  CHECK(rotations.size() == 4);
}

TEST_CASE("scrambled uniform image renders back to itself") {
  const Image img(84, 56, {200, 10, 30});
  const auto puzzle = scramble(slice_image(img, 28), 1);
  CHECK(render_placement(puzzle.truth, puzzle.pieces) == img);
}

TEST_CASE("render_cluster") {
  const Image img = textured_image(56, 56, 8);
  const auto puzzle = slice_image(img, 28);
  SUBCASE("single piece") {
    const OccupiedCell one{{5, -2}, 3, Rotation(0)};
    const auto out = render_cluster(std::span(&one, 1), puzzle.pieces);
    CHECK(out.image.width == 28);
    CHECK(out.image.height == 28);
    CHECK(out.image.data == puzzle.pieces[3].pixels);
    CHECK(out.min_cell == Cell{5, -2});
  }
  SUBCASE("L-shape leaves one background cell") {
    const std::vector<OccupiedCell> occ{{{0, 0}, 0, Rotation(0)}, {{1, 0}, 2, Rotation(0)}, {{1, 1}, 3, Rotation(1)}};
    const auto out = render_cluster(occ, puzzle.pieces);
    CHECK(out.image.width == 56);
    CHECK(out.image.height == 56);
    for (int r = 0; r < 28; ++r) {
      for (int c = 28; c < 56; ++c) CHECK(out.image.pixel(r, c) == kBackground);
    }
    const Piece turned = rotate_piece(puzzle.pieces[3], Rotation(1));
    CHECK(out.image.pixel(28 + 4, 28 + 9) == Rgb{turned.at(4, 9, 0), turned.at(4, 9, 1), turned.at(4, 9, 2)});
    CHECK(out.image.pixel(0, 0) == img.pixel(0, 0));
  }
  SUBCASE("full occupancy is the source image") {
    const auto out = render_cluster(occupancy_of(puzzle.truth), puzzle.pieces);
    CHECK(out.image == img);
  }
  SUBCASE("duplicate cell is an invariant violation") {
    const std::vector<OccupiedCell> occ{{{0, 0}, 0, Rotation(0)}, {{0, 0}, 1, Rotation(0)}};
    CHECK_THROWS_AS(render_cluster(occ, puzzle.pieces), InvariantError);
  }
}

TEST_CASE("placement validation") {
  Placement p{{1, 2, 28}, {{0, 0, 0, Rotation(0)}, {1, 0, 1, Rotation(2)}}};
  CHECK_NOTHROW(p.validate());
  p.pieces[1].col = 0;
  CHECK_THROWS_AS(p.validate(), InputError);
  p.pieces[1].col = 2;
  CHECK_THROWS_AS(p.validate(), InputError);
}

TEST_CASE("png round trip") {
  const Image img = textured_image(40, 30, 9);
  CHECK(decode_png(encode_png(img)) == img);
  const auto dir = testing_support::scratch_dir("png");
  write_png(dir / "a.png", img);
  CHECK(read_png(dir / "a.png") == img);
  CHECK_THROWS_AS(read_png(dir / "missing.png"), InputError);
  std::filesystem::remove_all(dir);
}
