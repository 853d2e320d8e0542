#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tinsim {

/// Residual callback: fill `residuals` for the given parameters.
using ResidualFunction =
    std::function<void(std::span<const double> params, std::span<double> residuals)>;

struct LmOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-12;  // on cost decrease and step size
  double initial_lambda = 1e-3;
};

struct LmResult {
  std::vector<double> params;
  double cost = 0.0;  // 0.5 * sum r^2
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt with a forward-difference Jacobian. Parameters should be
/// scaled to O(1) by the caller.
LmResult levenberg_marquardt(const ResidualFunction& f, std::vector<double> initial,
                             std::size_t n_residuals, const LmOptions& opts = {});

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least-squares straight line.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace tinsim
