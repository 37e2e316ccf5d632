#include <cmath>

#include "doctest.h"
#include "sbsn/conjugate_gradient.hpp"

using namespace sbsn;

namespace {

// f(x) = -(x-a)^T A (x-a) with A = [[3,1,0],[1,2,0.5],[0,0.5,1]].
const double kA[3][3] = {{3, 1, 0}, {1, 2, 0.5}, {0, 0.5, 1}};
const double kOpt[3] = {1.5, -2.0, 0.25};

double quadratic(std::span<const double> x, std::span<double> g) {
  double d[3], f = 0.0;
  for (int i = 0; i < 3; ++i) d[i] = x[i] - kOpt[i];
  for (int i = 0; i < 3; ++i) {
    double ad = 0.0;
    for (int j = 0; j < 3; ++j) ad += kA[i][j] * d[j];
    f -= d[i] * ad;
    g[i] = -2.0 * ad;
  }
  return f;
}

}  // namespace

TEST_CASE("CG finds the maximiser of a concave quadratic") {
  std::vector<double> x{0.0, 0.0, 0.0};
  CgOptions opt;
  opt.max_steps = 200;
  opt.grad_tol = 1e-9;
  const auto res = maximize_conjugate_gradient(quadratic, x, opt);
  CHECK(res.converged);
  for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(kOpt[i]).epsilon(1e-6));
  CHECK(res.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("CG accepted values never decrease") {
  // Negated Rosenbrock.
  auto rosen = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -(-2.0 * a - 400.0 * x[0] * b);
    g[1] = -(200.0 * b);
    return -(a * a + 100.0 * b * b);
  };
  std::vector<double> x{-1.2, 1.0};
  CgOptions opt;
  // Armijo-only backtracking with a restart every n = 2 steps is slow on the
  // banana valley, so give it room.
  opt.max_steps = 20000;
  opt.grad_tol = 1e-7;
  const auto res = maximize_conjugate_gradient(rosen, x, opt);
  REQUIRE(res.accepted_values.size() >= 2);
  CHECK(res.accepted_values.size() == res.steps + 1);
  for (std::size_t i = 1; i < res.accepted_values.size(); ++i) {
    CHECK(res.accepted_values[i] >= res.accepted_values[i - 1]);
  }
  CHECK(res.converged);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("CG keeps x when the line search cannot find an increase") {
  // Gradient with the wrong sign: every trial step lowers f.
  auto wrong = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2.0 * x[0];
    return -x[0] * x[0];
  };
  std::vector<double> x{3.0};
  const auto res = maximize_conjugate_gradient(wrong, x, CgOptions{});
  CHECK(res.line_search_failed);
  CHECK_FALSE(res.converged);
  CHECK(x[0] == 3.0);
  CHECK(res.value == -9.0);
}

TEST_CASE("CG stops immediately at a stationary point") {
  std::vector<double> x{kOpt[0], kOpt[1], kOpt[2]};
  const auto res = maximize_conjugate_gradient(quadratic, x, CgOptions{});
  CHECK(res.converged);
  CHECK(res.steps == 0);
}
