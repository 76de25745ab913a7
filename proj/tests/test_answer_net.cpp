#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ctdnet/answer_net.hpp"
#include "ctdnet/error.hpp"

using namespace ctdnet;

TEST_CASE("input lengths") {
  CHECK(InputLayout{80, 4, 4}.size() == 88);
  CHECK(InputLayout{20, 4, 0}.size() == 24);
}

TEST_CASE("assemble concatenates exactly") {
  const InputLayout layout{3, 4, 2};
  const std::vector<double> y(3, 0.0), phi{1, 0, 0, 0}, psi{0.25, 0.75};
  const InputVector x = assemble_input(layout, y, phi, psi);
  const std::vector<double> want{0, 0, 0, 1, 0, 0, 0, 0.25, 0.75};
  CHECK(std::vector<double>(x.values().begin(), x.values().end()) == want);
  CHECK(x.features()[0] == 1.0);
  CHECK(x.activations()[1] == 0.75);

  CHECK_THROWS_AS(assemble_input(layout, std::vector<double>(2), phi, psi), std::invalid_argument);
  CHECK_THROWS_AS(assemble_input(layout, y, phi, std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(assemble_input(InputLayout{3, 4, 0}, y, phi, psi), std::invalid_argument);
}

TEST_CASE("predict") {
  WeightMatrix zero(3, 5);
  CHECK(predict(zero, std::vector<double>{1, 2, 3, 4, 5}) == std::vector<double>{0, 0, 0});

  WeightMatrix w(1, 2);
  w(0, 0) = 2;
  w(0, 1) = -1;
  CHECK(predict(w, std::vector<double>{3, 4}) == std::vector<double>{2});

  WeightMatrix sel(2, 4);
  sel(1, 2) = 1.0;
  CHECK(predict(sel, std::vector<double>{9, 8, 7, 6})[1] == 7.0);

  CHECK_THROWS_AS(predict(w, std::vector<double>{1, 2, 3}), std::invalid_argument);
  w(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(predict(w, std::vector<double>{1, 0}), NonFiniteError);
}

TEST_CASE("row updates") {
  WeightMatrix w(2, 2);
  apply_row_update(w, 0, 0.0, std::vector<double>{1, 2});
  CHECK(w.max_abs() == 0.0);
  apply_row_update(w, 0, 0.5, std::vector<double>{1, 2});
  CHECK(w(0, 0) == 0.5);
  CHECK(w(0, 1) == 1.0);
  CHECK(w(1, 0) == 0.0);

  WeightMatrix a(1, 3), b(1, 3);
  const std::vector<double> x{0.3, -1.5, 2.25};
  apply_row_update(a, 0, 0.125, x);
  apply_row_update(a, 0, 0.375, x);
  apply_row_update(b, 0, 0.5, x);
  CHECK(a == b);

  WeightMatrix big(1, 1);
  big(0, 0) = std::numeric_limits<double>::max();
  CHECK_THROWS_AS(apply_row_update(big, 0, 1e300, std::vector<double>{1e300}), NonFiniteError);
}
