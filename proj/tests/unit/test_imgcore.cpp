#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "captchalab/error.hpp"
#include "captchalab/imgcore/draw.hpp"
#include "captchalab/imgcore/filter.hpp"
#include "captchalab/imgcore/hough.hpp"
#include "captchalab/imgcore/pgm.hpp"
#include "captchalab/imgcore/rng.hpp"
#include "captchalab/imgcore/segment.hpp"
#include "oracles.hpp"

using namespace captchalab;
using namespace captchalab::imgcore;

TEST_CASE("rng matches reference splitmix64") {
  Rng rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next() == 0x06C45D188009454Full);

  for (std::uint64_t seed : {1ull, 42ull, 0xDEADBEEFull, ~0ull}) {
    const auto ref = oracle::splitmix64(seed, 64);
    Rng r(seed);
    for (auto v : ref) CHECK(r.next() == v);
  }
}

TEST_CASE("rng derived draws stay in range") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double f = rng.next_float();
    CHECK((f >= 0.0 && f < 1.0));
    const int v = rng.uniform_int(-3, 5);
    CHECK((v >= -3 && v <= 5));
  }
  Rng a(9), b(9);
  a.uniform_int(0, 100);
  b.next();
  CHECK(a == b);
}

TEST_CASE("pgm round trip and header handling") {
  Rng rng(3);
  RasterImage img(17, 5);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng.next_below(256));
  const auto bytes = pgm_encode(img);
  const std::string header = "P5\n17 5\n255\n";
  REQUIRE(bytes.size() == header.size() + 85);
  CHECK(std::equal(header.begin(), header.end(), bytes.begin()));
  CHECK(pgm_decode(bytes) == img);

  std::string commented = "P5 # c\n# whole line\n2\t1\n255\n";
  std::vector<std::uint8_t> buf(commented.begin(), commented.end());
  buf.push_back(10);
  buf.push_back(200);
  const auto d = pgm_decode(buf);
  CHECK(d.width() == 2);
  CHECK(d.at(0, 0) == 10);
  CHECK(d.at(1, 0) == 200);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(pgm_decode(truncated), CodecError);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(pgm_decode(trailing), CodecError);
  const std::string p2 = "P2\n1 1\n255\n0";
  CHECK_THROWS_AS(pgm_decode(std::vector<std::uint8_t>(p2.begin(), p2.end())), CodecError);
  const std::string maxval = "P5\n1 1\n65535\n\x01\x02";
  CHECK_THROWS_AS(pgm_decode(std::vector<std::uint8_t>(maxval.begin(), maxval.end())),
                  CodecError);

  const auto path = std::filesystem::temp_directory_path() / "captchalab_rt.pgm";
  write_pgm(path, img);
  CHECK(read_pgm(path) == img);
  std::filesystem::remove(path);
}

TEST_CASE("bresenham matches hand trace") {
  RasterImage img(8, 5);
  draw_line(img, {0, 0}, {7, 3}, 0);
  // dx=7, dy=3 traced by hand.
  const std::set<std::pair<int, int>> expect = {{0, 0}, {1, 0}, {2, 1}, {3, 1},
                                                {4, 2}, {5, 2}, {6, 3}, {7, 3}};
  std::set<std::pair<int, int>> got;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 8; ++x)
      if (img.at(x, y) == 0) got.insert({x, y});
  CHECK(got == expect);

  RasterImage v(3, 4);
  draw_line(v, {1, 3}, {1, 0}, 9);
  CHECK(oracle::count_equal(v, 9) == 4);
  CHECK_THROWS_AS(draw_line(v, {0, 0}, {3, 0}, 0), std::out_of_range);
}

TEST_CASE("blit bitmap scales and rejects overflow") {
  BinaryImage bm(2, 1);
  bm.set(0, 0, true);
  RasterImage img(6, 6);
  blit_bitmap(img, bm, {1, 1}, 50, 2);
  CHECK(oracle::count_equal(img, 50) == 4);
  CHECK(img.at(1, 1) == 50);
  CHECK(img.at(2, 2) == 50);
  CHECK(img.at(3, 1) == 255);
  CHECK_THROWS_AS(blit_bitmap(img, bm, {3, 5}, 0, 2), PlacementError);
}

TEST_CASE("raster filters on a small patch") {
  RasterImage img(3, 3, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto med = filter3(img, FilterKind::Median);
  CHECK(med.at(1, 1) == 5);
  CHECK(med.at(0, 0) == 2);  // {1,2,4,5} lower median
  const auto mx = filter3(img, FilterKind::Max);
  CHECK(mx.at(0, 0) == 5);
  CHECK(mx.at(2, 2) == 9);
  const auto mean = filter3(img, FilterKind::Mean);
  CHECK(mean.at(1, 1) == 5);
  CHECK(mean.at(0, 0) == 3);  // 12/4
  CHECK(mean.at(1, 0) == 4);  // 21/6 = 3.5 rounds up
}

TEST_CASE("binary filters and morphology") {
  BinaryImage dot(5, 5);
  dot.set(2, 2, true);
  CHECK(filter3(dot, FilterKind::Median).ink_count() == 0);
  CHECK(filter3(dot, FilterKind::Max).ink_count() == 9);
  CHECK(erode3(filter3(dot, FilterKind::Max)).ink_count() == 1);
  CHECK(close3(dot) == dot);

  BinaryImage gap(7, 3);
  for (int x = 0; x < 7; ++x)
    if (x != 3) gap.set(x, 1, true);
  CHECK(close3(gap).at(3, 1));
}

TEST_CASE("salt and pepper density follows the binomial law") {
  RasterImage white(200, 60);
  Rng rng(11);
  const auto noisy = add_salt_pepper(white, 0.05, rng);
  // Only pepper is visible on white; flips are split between colours.
  const auto band = oracle::binomial_band(12000, 0.05, 5.0);
  Rng rng2(11);
  const auto noisy_black = add_salt_pepper(RasterImage(200, 60, 128), 0.05, rng2);
  const double flipped = static_cast<double>(12000 - oracle::count_equal(noisy_black, 128));
  CHECK(flipped >= band.lo);
  CHECK(flipped <= band.hi);
  CHECK(oracle::count_below(noisy, 255) > 0);
}

TEST_CASE("median restores sparse noise") {
  RasterImage img(64, 64);
  for (int y = 16; y < 48; ++y)
    for (int x = 16; x < 48; ++x) img.at(x, y) = 0;
  Rng rng(5);
  const auto noisy = add_salt_pepper(img, 0.05, rng);
  const auto restored = filter3(noisy, FilterKind::Median);
  std::size_t same = 0;
  for (std::size_t i = 0; i < img.size(); ++i) same += restored.pixels()[i] == img.pixels()[i];
  CHECK(static_cast<double>(same) / static_cast<double>(img.size()) >= 0.99);
}

TEST_CASE("hough finds a horizontal line and agrees with brute force") {
  BinaryImage img(100, 60);
  for (int x = 0; x < 100; ++x) img.set(x, 20, true);
  const auto lines = hough_lines(img, 50);
  REQUIRE(!lines.empty());
  CHECK(std::abs(lines[0].rho - 20) <= 1);
  CHECK(std::abs(lines[0].theta_deg - 90) <= 1);
  for (const auto& l : lines) CHECK(l.votes == oracle::hough_votes(img, l.theta_deg, l.rho));
  CHECK(lines[0].distance(37, 20) == doctest::Approx(0.0).epsilon(1e-9));

  BinaryImage diag(80, 80);
  for (int i = 0; i < 80; ++i) diag.set(i, i, true);
  const auto dl = hough_lines(diag, 40);
  REQUIRE(!dl.empty());
  CHECK(dl[0].theta_deg == 135);
  CHECK(dl[0].rho == 0);
  CHECK(dl[0].votes == oracle::hough_votes(diag, 135, 0));
  CHECK(std::is_sorted(dl.begin(), dl.end(),
                       [](const auto& a, const auto& b) { return a.votes > b.votes; }));
}

TEST_CASE("erase_lines keeps strokes that cross the line") {
  BinaryImage img(60, 30);
  for (int x = 0; x < 60; ++x) img.set(x, 10, true);
  for (int y = 2; y < 25; ++y) {
    img.set(30, y, true);
    img.set(31, y, true);
  }
  const auto lines = hough_lines(img, 40);
  const auto out = erase_lines(img, lines, 3);
  CHECK(!out.at(5, 10));
  CHECK(!out.at(50, 10));
  CHECK(out.at(30, 10));
  CHECK(out.at(31, 20));
}

namespace {
BinaryImage block(int w, int h, Rect r) {
  BinaryImage b(w, h);
  for (int y = r.top; y < r.bottom(); ++y)
    for (int x = r.left; x < r.right(); ++x) b.set(x, y, true);
  return b;
}
}  // namespace

TEST_CASE("components partition the ink") {
  Rng rng(21);
  BinaryImage img(40, 30);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) img.set(x, y, rng.next_float() < 0.4);
  const auto comps = connected_components_unfiltered(img);
  BinaryImage cover(40, 30);
  std::size_t total = 0;
  for (const auto& c : comps) {
    total += c.area();
    for (int y = 0; y < c.mask.height(); ++y)
      for (int x = 0; x < c.mask.width(); ++x)
        if (c.mask.at(x, y)) {
          CHECK(!cover.at(c.bbox.left + x, c.bbox.top + y));
          cover.set(c.bbox.left + x, c.bbox.top + y, true);
        }
  }
  CHECK(total == img.ink_count());
  CHECK(cover == img);
  for (const auto& c : connected_components(img)) CHECK(c.area() >= kMinComponentArea);
}

TEST_CASE("eight connectivity joins diagonals") {
  BinaryImage img(20, 20);
  for (int i = 0; i < 20; ++i) img.set(i, i, true);
  CHECK(connected_components(img).size() == 1);
}

TEST_CASE("order_and_fix merges, drops and splits") {
  BinaryImage img(100, 20);
  for (auto r : {Rect{60, 2, 5, 10}, Rect{5, 2, 5, 10}, Rect{30, 2, 5, 10}})
    for (int y = r.top; y < r.bottom(); ++y)
      for (int x = r.left; x < r.right(); ++x) img.set(x, y, true);
  auto segs = connected_components(img);
  REQUIRE(segs.size() == 3);
  const auto ordered = order_and_fix_segments(segs, 3);
  CHECK(ordered[0].bbox.left == 5);
  CHECK(ordered[1].bbox.left == 30);
  CHECK(ordered[2].bbox.left == 60);
  for (int i = 0; i < 3; ++i) CHECK(ordered[i].order_index == i);

  CHECK(order_and_fix_segments(segs, 2).size() == 2);
  const auto four = order_and_fix_segments(segs, 4);
  REQUIRE(four.size() == 4);
  for (std::size_t i = 1; i < four.size(); ++i)
    CHECK(four[i - 1].bbox.left <= four[i].bbox.left);

  // Two stacked boxes overlap fully in x and are merged.
  auto stacked = connected_components(
      block(20, 30, {2, 2, 6, 5}));
  auto lower = connected_components(block(20, 30, {3, 15, 6, 5}));
  stacked.insert(stacked.end(), lower.begin(), lower.end());
  const auto merged = order_and_fix_segments(stacked, 1);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].bbox == Rect{2, 2, 7, 18});
  CHECK(merged[0].area() == 60);

  CHECK_THROWS_AS(order_and_fix_segments({}, 4), SegmentationError);
}

TEST_CASE("resize10 is scale invariant") {
  Rng rng(8);
  BinaryImage base(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) base.set(x, y, rng.next_float() < 0.5);
  base.set(0, 0, true);
  base.set(9, 9, true);
  const auto f1 = resize10(segment_from_mask(base));
  for (int k : {2, 3, 5}) {
    BinaryImage big(10 * k, 10 * k);
    for (int y = 0; y < 10 * k; ++y)
      for (int x = 0; x < 10 * k; ++x) big.set(x, y, base.at(x / k, y / k));
    CHECK(resize10(segment_from_mask(big)) == f1);
  }
  for (int i = 0; i < 100; ++i) CHECK(f1[i] == (base.at(i % 10, i / 10) ? 1 : 0));
}

TEST_CASE("threshold and bounds") {
  RasterImage img(4, 4);
  img.at(1, 2) = 10;
  img.at(2, 3) = 127;
  img.at(3, 0) = 128;
  const auto m = threshold_below(img, 128);
  CHECK(m.ink_count() == oracle::count_below(img, 128));
  CHECK(m.ink_bounds() == Rect{1, 2, 2, 2});
  CHECK(BinaryImage(3, 3).ink_bounds().empty());
  CHECK(m.crop({1, 2, 2, 2}).ink_count() == 2);
}

TEST_CASE("threshold row example") {
  RasterImage row(3, 1, std::vector<std::uint8_t>{0, 160, 255});
  const auto m = threshold_below(row, 128);
  CHECK(m.at(0, 0));
  CHECK(!m.at(1, 0));
  CHECK(!m.at(2, 0));
  CHECK(threshold_below(RasterImage(9, 9), 128).ink_count() == 0);
}

TEST_CASE("filters leave constant images alone") {
  const RasterImage c(7, 5, 77);
  for (auto k : {FilterKind::Median, FilterKind::Max, FilterKind::Mean}) CHECK(filter3(c, k) == c);
  RasterImage ring(3, 3, std::vector<std::uint8_t>{0, 0, 0, 0, 255, 0, 0, 0, 0});
  CHECK(filter3(ring, FilterKind::Median).at(1, 1) == 0);
}

TEST_CASE("median pass removes isolated flips exactly") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    RasterImage img(30, 20, 200);
    BinaryImage used(30, 20);
    for (int k = 0; k < 25; ++k) {
      const int x = rng.uniform_int(0, 29), y = rng.uniform_int(0, 19);
      bool clear = true;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (used.contains(x + dx, y + dy) && used.at(x + dx, y + dy)) clear = false;
      if (!clear) continue;
      used.set(x, y, true);
      img.at(x, y) = rng.next_below(2) ? 0 : 255;
    }
    CHECK(filter3(img, FilterKind::Median) == RasterImage(30, 20, 200));
  }
}

TEST_CASE("salt and pepper edge densities") {
  const RasterImage gray(20, 10, 90);
  Rng a(4), b(4);
  CHECK(add_salt_pepper(gray, 0.0, a) == gray);
  for (int i = 0; i < 200; ++i) b.next();
  CHECK(a == b);
  Rng c(4);
  const auto full = add_salt_pepper(gray, 1.0, c);
  for (auto p : full.pixels()) CHECK((p == 0 || p == 255));

  Rng s7(7);
  const auto noisy = add_salt_pepper(RasterImage(200, 60, 128), 0.05, s7);
  const auto flipped = 12000 - oracle::count_equal(noisy, 128);
  CHECK(flipped >= 480);
  CHECK(flipped <= 720);
}

TEST_CASE("draw_line examples") {
  RasterImage h(10, 10);
  draw_line(h, {0, 5}, {9, 5}, 0);
  CHECK(oracle::count_equal(h, 0) == 10);
  for (int x = 0; x < 10; ++x) CHECK(h.at(x, 5) == 0);
  RasterImage p(10, 10);
  draw_line(p, {0, 0}, {0, 0}, 0);
  CHECK(oracle::count_equal(p, 0) == 1);
  RasterImage d(10, 10);
  draw_line(d, {0, 0}, {9, 9}, 0);
  CHECK(oracle::count_equal(d, 0) == 10);
  for (int i = 0; i < 10; ++i) CHECK(d.at(i, i) == 0);
}

TEST_CASE("blit examples") {
  BinaryImage one(1, 1, true);
  RasterImage img(8, 8);
  blit_bitmap(img, one, {3, 3}, 0, 2);
  CHECK(oracle::count_equal(img, 0) == 4);
  for (auto [x, y] : {std::pair{3, 3}, {4, 3}, {3, 4}, {4, 4}}) CHECK(img.at(x, y) == 0);
  RasterImage blank(8, 8);
  blit_bitmap(blank, BinaryImage(2, 2), {0, 0}, 0, 1);
  CHECK(blank == RasterImage(8, 8));
}

TEST_CASE("hough edge cases") {
  CHECK(hough_lines(BinaryImage(50, 50), 1).empty());

  BinaryImage row(100, 60);
  for (int x = 0; x < 100; ++x) row.set(x, 20, true);
  const auto one = hough_lines(row, 50);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == LineParams{20, 90, 100});

  BinaryImage two(100, 60);
  for (int x = 0; x < 100; ++x) {
    two.set(x, 10, true);
    two.set(x, 40, true);
  }
  const auto pair = hough_lines(two, 50);
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].theta_deg == 90);
  CHECK(pair[1].theta_deg == 90);
  CHECK(std::min(pair[0].rho, pair[1].rho) == 10);
  CHECK(std::max(pair[0].rho, pair[1].rho) == 40);
}

TEST_CASE("hough top line predicts a bresenham segment") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    RasterImage canvas(200, 60);
    const Point a{rng.uniform_int(0, 60), rng.uniform_int(0, 59)};
    const Point b{rng.uniform_int(140, 199), rng.uniform_int(0, 59)};
    draw_line(canvas, a, b, 0);
    const auto mask = threshold_below(canvas, 128);
    const auto lines = hough_lines(mask, 20);
    REQUIRE(!lines.empty());
    std::size_t near = 0;
    for (int y = 0; y < 60; ++y)
      for (int x = 0; x < 200; ++x)
        if (mask.at(x, y) && lines[0].distance(x, y) <= 1.0) ++near;
    CHECK(static_cast<double>(near) >= 0.95 * static_cast<double>(mask.ink_count()));
  }
}

TEST_CASE("erase_lines examples") {
  BinaryImage line(60, 20);
  for (int x = 0; x < 60; ++x) line.set(x, 8, true);
  CHECK(erase_lines(line, hough_lines(line, 30), 3).ink_count() == 0);

  BinaryImage bar = line;
  for (int y = 4; y < 12; ++y) bar.set(20, y, true);
  const auto out = erase_lines(bar, hough_lines(bar, 30), 3);
  for (int y = 4; y < 12; ++y) CHECK(out.at(20, y));

  BinaryImage square(20, 20);
  for (int y = 5; y < 12; ++y)
    for (int x = 5; x < 12; ++x) square.set(x, y, true);
  CHECK(erase_lines(square, {}, 3) == square);
}

TEST_CASE("component examples") {
  CHECK(connected_components(BinaryImage(10, 10)).empty());
  BinaryImage two(20, 10);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      two.set(x, y, true);
      two.set(x + 10, y, true);
    }
  const auto s = connected_components(two);
  REQUIRE(s.size() == 2);
  CHECK(s[0].area() == 25);
  CHECK(s[1].area() == 25);

  BinaryImage diag(20, 20);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      diag.set(x, y, true);
      diag.set(x + 5, y + 5, true);
    }
  CHECK(connected_components(diag).size() == 1);
}

TEST_CASE("noise blob over a glyph column merges") {
  BinaryImage img(120, 40);
  auto fill = [&](Rect r) {
    for (int y = r.top; y < r.bottom(); ++y)
      for (int x = r.left; x < r.right(); ++x) img.set(x, y, true);
  };
  for (int i = 0; i < 4; ++i) fill({5 + i * 28, 10, 10, 20});
  // 5 px wide blob, 4 of its columns inside glyph 1: overlap 4/5 = 80%.
  fill({37, 33, 5, 5});
  auto segs = connected_components(img);
  REQUIRE(segs.size() == 5);
  const auto out = order_and_fix_segments(segs, 4);
  REQUIRE(out.size() == 4);
  CHECK(out[1].bbox == Rect{33, 10, 10, 28});
  CHECK(out[1].area() == 225);
}

TEST_CASE("touching glyphs are split") {
  BinaryImage img(120, 40);
  auto fill = [&](Rect r) {
    for (int y = r.top; y < r.bottom(); ++y)
      for (int x = r.left; x < r.right(); ++x) img.set(x, y, true);
  };
  fill({5, 10, 10, 20});
  fill({30, 10, 24, 20});  // two glyphs fused
  fill({70, 10, 10, 20});
  const auto out = order_and_fix_segments(connected_components(img), 4);
  REQUIRE(out.size() == 4);
  CHECK(out[1].bbox == Rect{30, 10, 12, 20});
  CHECK(out[2].bbox == Rect{42, 10, 12, 20});
  CHECK(out[3].bbox.left == 70);
}

TEST_CASE("resize10 examples") {
  FeatureVector ones;
  ones.fill(1);
  CHECK(resize10(segment_from_mask(BinaryImage(20, 30, true))) == ones);
  for (auto [w, h] : {std::pair{3, 7}, {13, 11}, {40, 9}})
    CHECK(resize10(segment_from_mask(BinaryImage(w, h, true))) == ones);

  BinaryImage half(20, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 10; ++x) half.set(x, y, true);
  Segment seg{{0, 0, 20, 20}, half, 0};
  const auto f = resize10(seg);
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 10; ++i) CHECK(f[j * 10 + i] == (i < 5 ? 1 : 0));
}

TEST_CASE("pgm minimal image") {
  const auto bytes = pgm_encode(RasterImage(1, 1));
  const std::string expect = "P5\n1 1\n255\n\xff";
  CHECK(std::string(bytes.begin(), bytes.end()) == expect);
  const std::string p6 = "P6\n1 1\n255\n\xff\xff\xff";
  CHECK_THROWS_AS(pgm_decode(std::vector<std::uint8_t>(p6.begin(), p6.end())), CodecError);
}
