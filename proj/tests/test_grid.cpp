#include <doctest.h>

#include <random>

#include "hjsd/grid.hpp"

using namespace hjsd;
using Eigen::Vector3d;

TEST_CASE("node coordinates are exact products") {
  auto g = BoxGrid::make2d(201, 201, -1, 1, -1, 1);
  CHECK(g.coords(g.linear(0, 0)).x() == -1.0);
  CHECK(g.coords(g.linear(200, 0)).x() == 1.0);
  CHECK(g.coords(g.linear(100, 175)) ==
        Vector3d(-1.0 + 100 * 0.01, -1.0 + 175 * 0.01, 0.0));
  CHECK(g.node_count() == 201 * 201);
}

TEST_CASE("locate at special points") {
  auto g = BoxGrid::make2d(5, 5, 0, 1, 0, 1);

  SUBCASE("grid node: single weight 1") {
    auto st = locate(g, {0.25, 0.5, 0});
    REQUIRE(st);
    int nonzero = 0;
    for (int m = 0; m < st->size; ++m)
      if (st->weights[m] != 0.0) {
        ++nonzero;
        CHECK(st->weights[m] == 1.0);
        CHECK(st->nodes[m] == g.linear(1, 2));
      }
    CHECK(nonzero == 1);
  }
  SUBCASE("edge midpoint: two halves") {
    auto st = locate(g, {0.125, 0.25, 0});
    REQUIRE(st);
    double w[2] = {0, 0};
    int found = 0;
    for (int m = 0; m < st->size; ++m)
      if (st->weights[m] != 0.0) w[found++] = st->weights[m];
    CHECK(found == 2);
    CHECK(w[0] == doctest::Approx(0.5));
    CHECK(w[1] == doctest::Approx(0.5));
  }
  SUBCASE("triangle centroid: three thirds") {
    // centroid of {(0,0),(1,0),(1,1)} * dx
    auto st = locate(g, {0.25 * 2.0 / 3.0, 0.25 / 3.0, 0});
    REQUIRE(st);
    for (int m = 0; m < st->size; ++m)
      CHECK(st->weights[m] == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("outside the box") {
    CHECK(!locate(g, {1.5, 0.5, 0}));
    CHECK(!locate(g, {0.5, -0.01, 0}));
  }
}

TEST_CASE("partition of unity and affine exactness in 2D") {
  auto g = BoxGrid::make2d(17, 13, -2, 1, 0, 5);
  Eigen::VectorXd affine(g.node_count());
  for (NodeIndex n = 0; n < g.node_count(); ++n) {
    Vector3d p = g.coords(n);
    affine[n] = 3.0 * p.x() - 2.0 * p.y() + 1.0;
  }
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ux(-2, 1), uy(0, 5);
  for (int i = 0; i < 1000; ++i) {
    Vector3d p{ux(rng), uy(rng), 0};
    auto st = locate(g, p);
    REQUIRE(st);
    double sum = 0, px = 0, py = 0;
    for (int m = 0; m < st->size; ++m) {
      CHECK(st->weights[m] >= 0.0);
      sum += st->weights[m];
      px += st->weights[m] * g.coords(st->nodes[m]).x();
      py += st->weights[m] * g.coords(st->nodes[m]).y();
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(px == doctest::Approx(p.x()).epsilon(1e-10));
    CHECK(py == doctest::Approx(p.y()).epsilon(1e-10));
    auto v = interpolate(g, affine, p);
    REQUIRE(v);
    CHECK(*v == doctest::Approx(3.0 * p.x() - 2.0 * p.y() + 1.0)
                    .epsilon(1e-10));
  }
}

TEST_CASE("partition of unity and affine exactness in 3D") {
  auto g = BoxGrid::make3d(7, 9, 5, 0, 1, -1, 1, 2, 4);
  Eigen::VectorXd affine(g.node_count());
  for (NodeIndex n = 0; n < g.node_count(); ++n) {
    Vector3d p = g.coords(n);
    affine[n] = p.x() - 0.5 * p.y() + 2.0 * p.z() - 3.0;
  }
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> ux(0, 1), uy(-1, 1), uz(2, 4);
  for (int i = 0; i < 1000; ++i) {
    Vector3d p{ux(rng), uy(rng), uz(rng)};
    auto st = locate(g, p);
    REQUIRE(st);
    double sum = 0;
    for (int m = 0; m < st->size; ++m) {
      CHECK(st->weights[m] >= -1e-15);
      sum += st->weights[m];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    auto v = interpolate(g, affine, p);
    REQUIRE(v);
    CHECK(*v ==
          doctest::Approx(p.x() - 0.5 * p.y() + 2.0 * p.z() - 3.0)
              .epsilon(1e-10));
  }
}

TEST_CASE("Kronecker property of the basis") {
  auto g = BoxGrid::make2d(4, 4, 0, 3, 0, 3);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(g.node_count());
  e[g.linear(2, 1)] = 1.0;
  CHECK(*interpolate(g, e, {2, 1, 0}) == 1.0);
  CHECK(*interpolate(g, e, {0, 0, 0}) == 0.0);
  // constant field reproduces the constant
  Eigen::VectorXd c = Eigen::VectorXd::Constant(g.node_count(), 4.25);
  CHECK(*interpolate(g, c, {1.37, 2.9, 0}) ==
        doctest::Approx(4.25).epsilon(1e-14));
}

TEST_CASE("snap index rounds half away from zero") {
  auto g = BoxGrid::make2d(201, 201, -1, 1, -1, 1);
  CHECK(g.snap_index(0, 0.0) == 100);
  CHECK(g.snap_index(0, 0.754) == 175);  // (0.754+1)/0.01 = 175.4
  CHECK(g.snap_index(1, 0.75) == 175);
  CHECK(g.snap_index(0, -0.5) == 50);
}
