#include "oracles.hpp"

#include <aniso/geometry.hpp>
#include <aniso/meshgen.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace aniso;

namespace {

double total_measure(const SimplicialMesh& mesh) {
  double s = 0;
  for (int e = 0; e < mesh.num_cells(); ++e) {
    auto pts = mesh.cell_vertices(e);
    s += oracle::simplex_volume(pts);
  }
  return s;
}

void expect_valid(const SimplicialMesh& mesh) {
  EXPECT_NO_THROW(check_conformity(mesh));
  auto faces = build_faces(mesh);
  for (const auto& [verts, count] : oracle::enumerate_faces(mesh)) EXPECT_LE(count, 2);
  EXPECT_EQ(static_cast<std::size_t>(faces.size()), oracle::enumerate_faces(mesh).size());
}

}  // namespace

TEST(AnisoGrid, EightTriangles) {
  auto mesh = aniso_grid_2d(2, 2);
  EXPECT_EQ(mesh.num_cells(), 8);
  EXPECT_NEAR(total_measure(mesh), 1.0, 1e-14);
  expect_valid(mesh);
}

TEST(AnisoGrid, GammaConstantAcrossFamily) {
  auto fam = gen_family("aniso_grid_2d:4:4,40,400");
  ASSERT_EQ(fam.size(), 3u);
  for (const auto& m : fam) {
    EXPECT_NEAR(m.gamma_max, 2.0, 1e-10) << m.label;
    EXPECT_NEAR(semi_regularity(m.mesh).max, 2.0, 1e-10);
    EXPECT_NEAR(total_measure(m.mesh), 1.0, 1e-12);
    expect_valid(m.mesh);
  }
  EXPECT_NEAR(fam[2].aspect, 100.0, 1e-9);
}

TEST(AnisoGrid, RelativeNySpec) {
  auto fam = gen_family("aniso_grid_2d:4,8:x1,x10");
  ASSERT_EQ(fam.size(), 4u);
  std::vector<int> cells;
  for (const auto& m : fam) cells.push_back(m.mesh.num_cells());
  EXPECT_EQ(cells, (std::vector<int>{32, 320, 128, 1280}));
}

TEST(Needle, AnalyticGamma) {
  for (const auto& m : gen_family("needle_2d:1,0.1,0.01,0.001")) {
    EXPECT_NEAR(m.gamma_max, 2.0, 1e-10) << m.label;
    EXPECT_NEAR(total_measure(m.mesh), 1.0, 1e-12);
    expect_valid(m.mesh);
  }
}

TEST(Kuhn, UnitCube) {
  auto fam = gen_family("kuhn_3d:2:2:2,20");
  ASSERT_EQ(fam.size(), 2u);
  EXPECT_EQ(fam[0].mesh.num_cells(), 48);
  for (const auto& m : fam) {
    EXPECT_NEAR(total_measure(m.mesh), 1.0, 1e-12);
    expect_valid(m.mesh);
  }
}

TEST(Sliver, GammaStrictlyIncreasing) {
  auto fam = gen_family("sliver_3d:0.5,0.1,0.01,0.001");
  for (std::size_t k = 1; k < fam.size(); ++k) EXPECT_GT(fam[k].gamma_max, fam[k - 1].gamma_max);
}

TEST(LShape, AreaThree) {
  auto mesh = lshape_2d(4);
  EXPECT_NEAR(total_measure(mesh), 3.0, 1e-12);
  expect_valid(mesh);
  // nothing inside the removed quadrant
  for (int e = 0; e < mesh.num_cells(); ++e) {
    Vec c = Vec::Zero(2);
    for (const Vec& p : mesh.cell_vertices(e)) c += p / 3;
    EXPECT_FALSE(c(0) > 0 && c(1) < 0);
  }
}

TEST(GenFamily, InvalidSpecs) {
  EXPECT_THROW(gen_family("blob_2d:1"), Error);
  EXPECT_THROW(gen_family("needle_2d"), Error);
  EXPECT_THROW(gen_family("needle_2d:0"), Error);
  EXPECT_THROW(gen_family("aniso_grid_2d:4"), Error);
  EXPECT_THROW(gen_family("aniso_grid_2d:a:4"), Error);
  EXPECT_THROW(gen_family("lshape_2d:-1"), Error);
}
