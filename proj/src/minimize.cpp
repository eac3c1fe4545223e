// Copyright 2026 The emconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emconv/minimize.hpp"

#include <algorithm>
#include <cmath>

#include "emconv/error.hpp"

namespace emconv {

namespace {

constexpr double kInitialDamping = 1e-5;
constexpr double kMinDamping = 1e-15;
constexpr double kMaxDamping = 1e16;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Bounds bound_at(std::span<const Bounds> bounds, std::size_t j) {
  return bounds.empty() ? Bounds{} : bounds[j];
}

Eigen::VectorXd evaluate(const ResidualFunction& fn, std::size_t m, std::span<const double> x) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(m));
  fn(x, std::span<double>(r.data(), m));
  return r;
}

}  // namespace

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::Gradient: return "gradient";
    case StopReason::CostChange: return "cost_change";
    case StopReason::StepSize: return "step_size";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::DampingOverflow: return "damping_overflow";
  }
  return "unknown";
}

std::vector<double> jacobian_steps(std::span<const double> x, std::span<const double> typical) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  std::vector<double> steps(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = typical.empty() ? 1.0 : typical[j];
    steps[j] = base * std::max(std::abs(x[j]), t);
  }
  return steps;
}

Eigen::MatrixXd numeric_jacobian(const ResidualFunction& fn, std::size_t residual_count,
                                 std::span<const double> x, std::span<const double> steps,
                                 std::span<const Bounds> bounds) {
  const std::size_t n = x.size();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(residual_count), static_cast<Eigen::Index>(n));
  std::vector<double> probe(x.begin(), x.end());
  Eigen::VectorXd r0;
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds b = bound_at(bounds, j);
    const double h = steps[j];
    const bool up_ok = x[j] + h <= b.upper;
    const bool down_ok = x[j] - h >= b.lower;
    auto at = [&](double offset) {
      probe[j] = x[j] + offset;
      Eigen::VectorXd r = evaluate(fn, residual_count, probe);
      probe[j] = x[j];
      return r;
    };
    if (up_ok && down_ok) {
      jac.col(static_cast<Eigen::Index>(j)) = (at(h) - at(-h)) / (2.0 * h);
    } else {
      if (r0.size() == 0) {
        r0 = evaluate(fn, residual_count, x);
      }
      const double s = up_ok ? h : -h;
      jac.col(static_cast<Eigen::Index>(j)) = (-3.0 * r0 + 4.0 * at(s) - at(2.0 * s)) / (2.0 * s);
    }
  }
  return jac;
}

MinimizeResult minimize(const ResidualFunction& fn, std::size_t residual_count, std::vector<double> initial,
                        std::span<const Bounds> bounds, const Tolerances& tol, std::span<const double> typical) {
  const std::size_t n = initial.size();
  require(n > 0, "minimize needs at least one parameter");
  require(residual_count >= 1, "minimize needs at least one residual");
  require(bounds.empty() || bounds.size() == n, "bounds must match the parameter count");
  require(typical.empty() || typical.size() == n, "typical scales must match the parameter count");

  MinimizeResult out;
  std::vector<double> x = std::move(initial);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = bound_at(bounds, j).clamp(x[j]);
  }
  Eigen::VectorXd r = evaluate(fn, residual_count, x);
  ++out.evaluations;
  require(all_finite(r), "residual function is not finite at the initial guess");
  double cost = 0.5 * r.squaredNorm();

  double lambda = kInitialDamping;
  std::vector<bool> free(n, true);
  Eigen::MatrixXd jac;
  bool done = false;

  while (!done) {
    const std::vector<double> steps = jacobian_steps(x, typical);
    jac = numeric_jacobian(fn, residual_count, x, steps, bounds);
    out.evaluations += static_cast<int>(2 * n);
    const Eigen::VectorXd grad = jac.transpose() * r;
    const Eigen::MatrixXd normal = jac.transpose() * jac;

    double gabs = 0.0;
    double gcos = 0.0;
    const double rnorm = r.norm();
    for (std::size_t j = 0; j < n; ++j) {
      const Bounds b = bound_at(bounds, j);
      const double gj = grad(static_cast<Eigen::Index>(j));
      free[j] = !((x[j] <= b.lower && gj > 0.0) || (x[j] >= b.upper && gj < 0.0));
      if (free[j]) {
        gabs = std::max(gabs, std::abs(gj));
        const double cn = jac.col(static_cast<Eigen::Index>(j)).norm();
        if (cn > 0.0 && rnorm > 0.0) {
          gcos = std::max(gcos, std::abs(gj) / (cn * rnorm));
        }
      }
    }
    out.gradient_norm = gabs;
    if (gabs <= tol.gtol || gcos <= tol.gtol) {
      out.converged = true;
      out.stop = StopReason::Gradient;
      break;
    }
    if (out.iterations >= tol.max_iterations) {
      out.stop = StopReason::MaxIterations;
      break;
    }

    std::vector<Eigen::Index> idx;
    for (std::size_t j = 0; j < n; ++j) {
      if (free[j]) idx.push_back(static_cast<Eigen::Index>(j));
    }
    const auto nf = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd a(nf, nf);
    Eigen::VectorXd gf(nf);
    double dmax = 0.0;
    for (Eigen::Index p = 0; p < nf; ++p) {
      gf(p) = grad(idx[p]);
      dmax = std::max(dmax, normal(idx[p], idx[p]));
      for (Eigen::Index q = 0; q < nf; ++q) a(p, q) = normal(idx[p], idx[q]);
    }
    Eigen::VectorXd diag(nf);
    for (Eigen::Index p = 0; p < nf; ++p) {
      diag(p) = std::max(a(p, p), 1e-12 * std::max(dmax, 1e-300));
    }

    while (true) {
      Eigen::MatrixXd damped = a;
      damped.diagonal() += lambda * diag;
      const Eigen::VectorXd delta = damped.ldlt().solve(-gf);
      std::vector<double> trial = x;
      for (Eigen::Index p = 0; p < nf; ++p) {
        const auto j = static_cast<std::size_t>(idx[p]);
        trial[j] = bound_at(bounds, j).clamp(x[j] + delta(p));
      }
      Eigen::VectorXd rt = evaluate(fn, residual_count, trial);
      ++out.evaluations;
      const double trial_cost = all_finite(rt) && delta.allFinite() ? 0.5 * rt.squaredNorm()
                                                                     : std::numeric_limits<double>::infinity();
      if (trial_cost < cost) {
        double step = 0.0;
        double xnorm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          step += (trial[j] - x[j]) * (trial[j] - x[j]);
          xnorm += x[j] * x[j];
        }
        step = std::sqrt(step);
        xnorm = std::sqrt(xnorm);
        const double dcost = cost - trial_cost;
        x = std::move(trial);
        r = std::move(rt);
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, kMinDamping);
        ++out.iterations;
        if (dcost <= tol.ftol * cost) {
          out.converged = true;
          out.stop = StopReason::CostChange;
          done = true;
        } else if (step <= tol.xtol * (xnorm + tol.xtol)) {
          out.converged = true;
          out.stop = StopReason::StepSize;
          done = true;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > kMaxDamping) {
        out.stop = StopReason::DampingOverflow;
        done = true;
        break;
      }
    }
  }

  // Final Jacobian at the returned point for the covariance estimate.
  const std::vector<double> steps = jacobian_steps(x, typical);
  jac = numeric_jacobian(fn, residual_count, x, steps, bounds);
  const Eigen::VectorXd grad = jac.transpose() * r;
  out.active.assign(n, false);
  std::vector<Eigen::Index> idx;
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds b = bound_at(bounds, j);
    const double gj = grad(static_cast<Eigen::Index>(j));
    out.active[j] = (x[j] <= b.lower && gj >= 0.0) || (x[j] >= b.upper && gj <= 0.0);
    if (!out.active[j]) idx.push_back(static_cast<Eigen::Index>(j));
  }
  out.covariance = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (!idx.empty()) {
    const auto nf = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd jf(jac.rows(), nf);
    for (Eigen::Index p = 0; p < nf; ++p) jf.col(p) = jac.col(idx[p]);
    const Eigen::MatrixXd normal = jf.transpose() * jf;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
    const Eigen::VectorXd ev = eig.eigenvalues();
    const double cutoff = std::max(ev.maxCoeff(), 0.0) * 1e-14 * static_cast<double>(nf);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(nf);
    for (Eigen::Index p = 0; p < nf; ++p) {
      if (ev(p) > cutoff && ev(p) > 0.0) inv(p) = 1.0 / ev(p);
    }
    const double dof = std::max<double>(static_cast<double>(residual_count) - static_cast<double>(nf), 1.0);
    const double s2 = 2.0 * cost / dof;
    Eigen::MatrixXd cf = s2 * eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
    cf = 0.5 * (cf + cf.transpose());
    for (Eigen::Index p = 0; p < nf; ++p) {
      for (Eigen::Index q = 0; q < nf; ++q) out.covariance(idx[p], idx[q]) = cf(p, q);
    }
  }
  out.x = std::move(x);
  out.cost = cost;
  return out;
}

}  // namespace emconv
