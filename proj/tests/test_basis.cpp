#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ctdnet/basis.hpp"

using namespace ctdnet;

TEST_CASE("box bounds reject bad intervals") {
  CHECK_THROWS_AS(BoxBounds({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(BoxBounds({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(BoxBounds({1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(BoxBounds({0.0, 0.0}, {1.0}), std::invalid_argument);
  const BoxBounds b = BoxBounds::uniform(2, -1.0, 1.0);
  CHECK(b.dim() == 2);
  CHECK(b.contains(std::vector<double>{0.5, -1.0}));
  CHECK_FALSE(b.contains(std::vector<double>{0.5, 1.5}));
  std::vector<double> p{2.0, -3.0};
  b.clamp(p);
  CHECK(p == std::vector<double>{1.0, -1.0});
}

TEST_CASE("four centers on the unit interval include both endpoints") {
  const RbfGrid g(BoxBounds::uniform(1, 0.0, 1.0), 4, 0.3);
  REQUIRE(g.size() == 4);
  CHECK(g.center(0)[0] == 0.0);
  CHECK(g.center(1)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(g.center(2)[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(g.center(3)[0] == 1.0);
}

TEST_CASE("two-dimensional grid is a product, last dimension fastest") {
  const RbfGrid g(BoxBounds::uniform(2, 0.0, 1.0), 4, 0.3);
  REQUIRE(g.size() == 16);
  CHECK(g.center(1)[0] == 0.0);
  CHECK(g.center(1)[1] == doctest::Approx(1.0 / 3.0));
  CHECK(g.center(4)[0] == doctest::Approx(1.0 / 3.0));
  CHECK(g.center(4)[1] == 0.0);
  CHECK(g.center(15)[0] == 1.0);
  CHECK(g.center(15)[1] == 1.0);
}

TEST_CASE("single function per dimension sits at the lower bound") {
  const RbfGrid g(BoxBounds::uniform(1, -1.0, 1.0), 1, 0.5);
  REQUIRE(g.size() == 1);
  CHECK(g.center(0)[0] == -1.0);
}

TEST_CASE("invalid grids throw") {
  CHECK_THROWS_AS(RbfGrid(BoxBounds::uniform(1, 0.0, 1.0), 0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(RbfGrid(BoxBounds::uniform(1, 0.0, 1.0), 4, 0.0), std::invalid_argument);
  const RbfGrid g(BoxBounds::uniform(1, 0.0, 1.0), 4, 0.3);
  CHECK_THROWS_AS(g.evaluate(std::vector<double>{0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("evaluation matches hand values") {
  const RbfGrid psi(BoxBounds::uniform(1, 0.0, 1.0), 4, 0.1);
  const auto at_center = psi.evaluate(std::vector<double>{2.0 / 3.0});
  CHECK(at_center[2] == doctest::Approx(1.0).epsilon(1e-15));

  // width 0.1, distance 0.2 from the center at 0
  const auto a = psi.evaluate(std::vector<double>{0.2});
  CHECK(a[0] == doctest::Approx(0.8187307530779818).epsilon(1e-14));
  CHECK(a[0] == doctest::Approx(std::exp(-0.2)).epsilon(1e-14));

  // width 0.3, point 0.5 against the center at 1/3
  const RbfGrid phi(BoxBounds::uniform(1, 0.0, 1.0), 4, 0.3);
  const auto f = phi.evaluate(std::vector<double>{0.5});
  CHECK(f[1] == doctest::Approx(0.9547590287126507).epsilon(1e-13));
}

TEST_CASE("activations lie in (0, 1] and fall off with distance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  const RbfGrid g(BoxBounds::uniform(2, 0.0, 1.0), 3, 0.2);
  for (int k = 0; k < 2000; ++k) {
    const std::vector<double> p{u(rng), u(rng)};
    const auto v = g.evaluate(p);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(v[i] <= 1.0);
      CHECK(v[i] >= 0.0);
      const auto c = g.center(i);
      const double d2 = (p[0] - c[0]) * (p[0] - c[0]) + (p[1] - c[1]) * (p[1] - c[1]);
      if (d2 < 10.0) CHECK(v[i] > 0.0);
      for (std::size_t j = 0; j < v.size(); ++j) {
        const auto cj = g.center(j);
        const double dj = (p[0] - cj[0]) * (p[0] - cj[0]) + (p[1] - cj[1]) * (p[1] - cj[1]);
        if (dj < d2) CHECK(v[j] >= v[i]);
      }
    }
  }
}
