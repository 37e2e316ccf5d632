#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sbsn {

struct CgOptions {
  std::size_t max_steps = 50;
  // Stop once the largest gradient component falls below this.
  double grad_tol = 1e-5;
  double backtrack_factor = 0.5;
  std::size_t max_backtracks = 30;
  double sufficient_increase = 1e-4;
};

struct CgResult {
  double value = 0.0;
  std::size_t steps = 0;
  bool converged = false;
  bool line_search_failed = false;
  // Objective at the start point and after every accepted step.
  std::vector<double> accepted_values;
};

// Returns f(x) and writes the gradient into grad.
using GradientObjective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

// Maximises f by nonlinear conjugate gradient with the Polak-Ribiere+ update,
// restarting along the gradient whenever the direction stops being an ascent
// direction or every dim steps. Steps come from a backtracking line search
// with a sufficient-increase test, so accepted values never decrease.
CgResult maximize_conjugate_gradient(const GradientObjective& f,
                                     std::vector<double>& x,
                                     const CgOptions& options);

}  // namespace sbsn
