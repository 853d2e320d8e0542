#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "tinsim/fit.hpp"

namespace tinsim {

namespace {

double half_sq(const Eigen::VectorXd& r) { return 0.5 * r.squaredNorm(); }

}  // namespace

LmResult levenberg_marquardt(const ResidualFunction& f, std::vector<double> initial,
                             std::size_t n_residuals, const LmOptions& opts) {
  const auto np = static_cast<Eigen::Index>(initial.size());
  const auto nr = static_cast<Eigen::Index>(n_residuals);
  if (np == 0 || nr < np) throw std::invalid_argument("levenberg_marquardt: underdetermined");

  Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(initial.data(), np);
  Eigen::VectorXd r(nr);
  auto eval = [&](const Eigen::VectorXd& q, Eigen::VectorXd& out) {
    f(std::span<const double>(q.data(), static_cast<std::size_t>(np)),
      std::span<double>(out.data(), static_cast<std::size_t>(nr)));
  };
  eval(p, r);
  double cost = half_sq(r);
  double lambda = opts.initial_lambda;

  LmResult res;
  Eigen::MatrixXd J(nr, np);
  Eigen::VectorXd r_step(nr);
  Eigen::VectorXd trial(np);
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    for (Eigen::Index j = 0; j < np; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(p[j]));
      trial = p;
      trial[j] += h;
      eval(trial, r_step);
      J.col(j) = (r_step - r) / h;
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < 1e-300) {
      res.converged = true;
      break;
    }

    bool improved = false;
    for (int inner = 0; inner < 30; ++inner) {
      Eigen::MatrixXd A = JtJ;
      for (Eigen::Index j = 0; j < np; ++j) A(j, j) += lambda * std::max(JtJ(j, j), 1e-30);
      const Eigen::VectorXd step = A.ldlt().solve(-g);
      trial = p + step;
      eval(trial, r_step);
      const double trial_cost = half_sq(r_step);
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        const double decrease = cost - trial_cost;
        const bool small_step = step.norm() <= opts.relative_tolerance * (p.norm() + 1e-30);
        p = trial;
        r = r_step;
        const bool small_decrease = decrease <= opts.relative_tolerance * cost;
        cost = trial_cost;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (small_step || small_decrease) res.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) {
      res.converged = true;  // no descent direction left at this precision
      break;
    }
    if (res.converged) break;
  }
  res.params.assign(p.data(), p.data() + np);
  res.cost = cost;
  return res;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LineFit out;
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (out.slope * x[i] + out.intercept);
    ss += e * e;
  }
  out.rms_residual = std::sqrt(ss / n);
  return out;
}

}  // namespace tinsim
