#include <gtest/gtest.h>

#include <sstream>

#include "netprune/generate.hpp"
#include "netprune/io.hpp"
#include "netprune/nets.hpp"

using namespace netprune;

namespace {

PointFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_point_file(in);
}

}  // namespace

TEST(PointFileParse, BareCoordinates) {
  const PointFile f = parse("0 0\n1.5 -2\n\n# comment\n3 4\n");
  EXPECT_EQ(f.rows.dimension(), 2u);
  ASSERT_EQ(f.rows.size(), 3u);
  EXPECT_EQ(f.rows.point(1)[1], -2.0);
  EXPECT_EQ(f.rows.weight(2), 1u);
}

TEST(PointFileParse, HeaderRoles) {
  const PointFile f = parse("# coord weight color flag coord attr\n1 3 2 1 5 0.25\n");
  EXPECT_EQ(f.rows.dimension(), 2u);
  EXPECT_EQ(f.rows.point(0)[0], 1.0);
  EXPECT_EQ(f.rows.point(0)[1], 5.0);
  EXPECT_EQ(f.rows.weight(0), 3u);
  EXPECT_EQ(f.attributes[0].color, 2u);
  EXPECT_TRUE(f.attributes[0].flag);
  EXPECT_EQ(f.attributes[0].values, std::vector<double>{0.25});
  EXPECT_TRUE(f.has(ColumnRole::Color));
}

TEST(PointFileParse, Errors) {
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("1 2\n3\n"), InputError);
  EXPECT_THROW(parse("1 x\n"), InputError);
  EXPECT_THROW(parse("1 nan\n"), InputError);
  EXPECT_THROW(parse("# coord weight\n1 0\n"), InputError);
  EXPECT_THROW(parse("# coord weight\n1 1.5\n"), InputError);
  EXPECT_THROW(parse("# coord color\n1 64\n"), InputError);
  EXPECT_THROW(parse("# coord flag\n1 2\n"), InputError);
  EXPECT_THROW(parse("# weight\n1\n"), InputError);
  EXPECT_THROW(parse("1 2 3 4 5 6 7 8 9\n"), InputError);
  EXPECT_THROW(parse("1e300 0\n"), InputError);
}

TEST(PointFileWrite, RoundTrip) {
  const PointFile f = parse("# coord coord weight flag\n0.1 -3e-7 2 1\n1e14 5 1 0\n");
  std::ostringstream out;
  write_point_file(out, f);
  const PointFile g = parse(out.str());
  ASSERT_EQ(g.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(g.rows.point(i)[a], f.rows.point(i)[a]);
    EXPECT_EQ(g.rows.weight(i), f.rows.weight(i));
    EXPECT_EQ(g.attributes[i].flag, f.attributes[i].flag);
  }
}

TEST(Generate, Deterministic) {
  for (const auto name : kDistributionNames) {
    const auto a = generate_points(parse_distribution(name), 100, 2, 1);
    const auto b = generate_points(parse_distribution(name), 100, 2, 1);
    ASSERT_EQ(a.size(), 100u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t d = 0; d < 2; ++d) EXPECT_EQ(a.point(i)[d], b.point(i)[d]);
    }
  }
  EXPECT_THROW(parse_distribution("nope"), InputError);
}

TEST(Generate, TightPairs) {
  const PointSet p = generate_points(Distribution::TightPairs, 1000, 2, 3);
  ASSERT_EQ(p.size(), 1000u);
  for (std::size_t i = 0; i < p.size(); i += 2) {
    EXPECT_NEAR(distance(p.point(i), p.point(i + 1)), kTightSpacing, 1e-12);
    EXPECT_NEAR(nearest_distance(p, i), kTightSpacing, 1e-12);
  }
  // Every other pair is far away.
  for (std::size_t i = 0; i < 40; i += 2) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j / 2 != i / 2) EXPECT_GT(distance(p.point(i), p.point(j)), 0.5);
    }
  }
  EXPECT_THROW(generate_points(Distribution::TightPairs, 7, 2, 1), InputError);
}

TEST(Generate, DuplicatesPresent) {
  const PointSet p = generate_points(Distribution::MultisetDuplicates, 50, 3, 2);
  const MergeResult m = merge_duplicates(p);
  EXPECT_LT(m.locations.size(), p.size());
}

TEST(Generate, LatticeSpacing) {
  const PointSet p = generate_points(Distribution::Lattice, 27, 3, 1);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(nearest_distance(p, i), 1.0);
}
