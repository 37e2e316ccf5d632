#include "sbsn/conjugate_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sbsn {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

CgResult maximize_conjugate_gradient(const GradientObjective& f,
                                     std::vector<double>& x,
                                     const CgOptions& options) {
  const std::size_t n = x.size();
  CgResult result;
  std::vector<double> grad(n), direction(n), trial(n), trial_grad(n);

  double value = f(x, grad);
  result.accepted_values.push_back(value);
  direction = grad;
  double slope = dot(grad, direction);
  double step = 1.0 / std::max(1.0, max_abs(grad));
  std::size_t since_restart = 0;

  while (result.steps < options.max_steps) {
    if (max_abs(grad) < options.grad_tol) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    double trial_value = value;
    for (std::size_t b = 0; b <= options.max_backtracks; ++b) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] + step * direction[j];
      trial_value = f(trial, trial_grad);
      if (std::isfinite(trial_value) &&
          trial_value >= value + options.sufficient_increase * step * slope) {
        accepted = true;
        break;
      }
      step *= options.backtrack_factor;
    }
    if (!accepted) {
      result.line_search_failed = true;
      break;
    }

    const double previous_slope = slope;
    const double gg_old = dot(grad, grad);
    x.swap(trial);
    value = trial_value;
    result.accepted_values.push_back(value);
    ++result.steps;

    // Polak-Ribiere+: beta = max(0, g'(g - g_old) / g_old'g_old).
    double beta = 0.0;
    if (gg_old > 0.0) {
      beta = (dot(trial_grad, trial_grad) - dot(trial_grad, grad)) / gg_old;
      beta = std::max(0.0, beta);
    }
    grad.swap(trial_grad);
    if (++since_restart >= n) {
      beta = 0.0;
      since_restart = 0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      direction[j] = grad[j] + beta * direction[j];
    }
    slope = dot(grad, direction);
    if (!(slope > 0.0)) {
      direction = grad;
      slope = dot(grad, grad);
      since_restart = 0;
    }
    // Carry the previous step length over, rescaled by the change in slope.
    step = previous_slope > 0.0 && slope > 0.0
               ? std::min(1e6, 2.0 * step * previous_slope / slope)
               : 1.0;
  }
  if (!result.converged && max_abs(grad) < options.grad_tol) {
    result.converged = true;
  }
  result.value = value;
  return result;
}

}  // namespace sbsn
