#pragma once

#include "k2bench/error.hpp"
#include "k2bench/evaluation.hpp"

#include <Eigen/Core>
#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace k2bench {

/// Saturating accuracy curve 1 - exp(-c1 * sqrt(cases)).
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> saturation_curve(Scalar c1,
                                                          const Eigen::Array<Scalar, Eigen::Dynamic, 1>& cases) {
  return Scalar(1) - (-c1 * cases.sqrt()).exp();
}

/// Decaying error curve c2 * exp(-c3 * sqrt(cases)).
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> decay_curve(Scalar c2, Scalar c3,
                                                     const Eigen::Array<Scalar, Eigen::Dynamic, 1>& cases) {
  return c2 * (-c3 * cases.sqrt()).exp();
}

/// One-parameter model behind the M1 fit.
struct SaturationModel {
  static constexpr int kParams = 1;
  Eigen::ArrayXd value(const Eigen::VectorXd& p, const Eigen::ArrayXd& x) const { return saturation_curve(p(0), x); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p, const Eigen::ArrayXd& x) const {
    const Eigen::ArrayXd s = x.sqrt();
    Eigen::MatrixXd j(x.size(), 1);
    j.col(0) = (s * (-p(0) * s).exp()).matrix();
    return j;
  }
};

/// Two-parameter model behind the M2 fit.
struct DecayModel {
  static constexpr int kParams = 2;
  Eigen::ArrayXd value(const Eigen::VectorXd& p, const Eigen::ArrayXd& x) const { return decay_curve(p(0), p(1), x); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p, const Eigen::ArrayXd& x) const {
    const Eigen::ArrayXd s = x.sqrt();
    const Eigen::ArrayXd e = (-p(1) * s).exp();
    Eigen::MatrixXd j(x.size(), 2);
    j.col(0) = e.matrix();
    j.col(1) = (-p(0) * s * e).matrix();
    return j;
  }
};

struct LmOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-8;
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
};

struct LmResult {
  Eigen::VectorXd params;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
  /// RSS after the start point and after every accepted step.
  std::vector<double> rss_history;
  std::string diagnostics;
};

namespace detail {

inline double residual_ss(const Eigen::ArrayXd& y, const Eigen::ArrayXd& f) { return (y - f).square().sum(); }

inline bool singular_normal_matrix(const Eigen::MatrixXd& jtj) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jtj, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
  return !(largest > 0.0) || eig.eigenvalues().minCoeff() <= 1e-14 * largest;
}

}  // namespace detail

/// Levenberg-Marquardt least squares for y ~ model(params, x).
///
/// Solves (J'J + lambda * diag(J'J)) delta = J'r. A step is accepted when it
/// does not increase the RSS, after which lambda is divided by the damping
/// factor; rejected steps multiply it. Converged means a step of relative
/// size below the tolerance.
/// Throws SingularJacobian if J'J is singular at the start point.
template <class Model>
LmResult levenberg_marquardt(const Model& model, const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                             Eigen::VectorXd params, const LmOptions& options = {}) {
  LmResult out;
  Eigen::ArrayXd f = model.value(params, x);
  double rss = detail::residual_ss(y, f);
  out.rss_history.push_back(rss);
  Eigen::MatrixXd jac = model.jacobian(params, x);
  if (detail::singular_normal_matrix(jac.transpose() * jac))
    throw SingularJacobian("normal matrix is singular at the start point (are all cases zero?)");

  double lambda = options.initial_damping;
  constexpr double kMaxDamping = 1e16;
  auto small_step = [&](const Eigen::VectorXd& delta) {
    return delta.norm() <= options.relative_tolerance * (params.norm() + options.relative_tolerance);
  };

  while (out.iterations < options.max_iterations) {
    ++out.iterations;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * (y - f).matrix();
    Eigen::VectorXd scale = jtj.diagonal();
    scale = scale.cwiseMax(1e-12 * std::max(1.0, scale.maxCoeff()));
    Eigen::MatrixXd damped = jtj;
    damped.diagonal() += lambda * scale;
    const Eigen::VectorXd delta = damped.ldlt().solve(gradient);
    if (!delta.allFinite()) {
      out.diagnostics = "non-finite step";
      break;
    }
    const Eigen::VectorXd trial = params + delta;
    const Eigen::ArrayXd trial_f = model.value(trial, x);
    const double trial_rss = detail::residual_ss(y, trial_f);
    if (std::isfinite(trial_rss) && trial_rss <= rss) {
      const bool done = small_step(delta);
      params = trial;
      f = trial_f;
      rss = trial_rss;
      out.rss_history.push_back(rss);
      jac = model.jacobian(params, x);
      lambda = std::max(lambda / options.damping_factor, 1e-12);
      if (done) {
        out.converged = true;
        break;
      }
    } else {
      // At the minimum, round-off can make even a negligible step look worse.
      if (small_step(delta)) {
        out.converged = true;
        break;
      }
      lambda *= options.damping_factor;
      if (lambda > kMaxDamping) {
        out.diagnostics = "damping exceeded " + std::to_string(kMaxDamping) + " without progress";
        break;
      }
    }
  }
  if (!out.converged && out.diagnostics.empty())
    out.diagnostics = "no convergence within " + std::to_string(options.max_iterations) + " iterations";
  out.params = params;
  out.rss = rss;
  return out;
}

enum class ModelId { kM1, kM2 };
const char* to_string(ModelId m);

struct FitPoint {
  double cases = 0.0;
  double value = 0.0;
};

struct RegressionFit {
  ModelId model = ModelId::kM1;
  Stratum stratum = Stratum::kAll;
  Eigen::VectorXd coefficients;  // (C1) or (C2, C3)
  Eigen::VectorXd standard_errors;
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  double rss = std::numeric_limits<double>::quiet_NaN();
  double tss = std::numeric_limits<double>::quiet_NaN();
  std::size_t points = 0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;
  std::vector<double> rss_history;
};

/// Least-squares fit of m1 = 1 - exp(-C1 sqrt(cases)).
/// SE(C1) = sqrt((J'J)^-1 * RSS / (n - 1)). Needs at least 2 points.
RegressionFit fit_m1(std::span<const FitPoint> points, double init = 0.1, const LmOptions& options = {});

/// Least-squares fit of m2 = C2 exp(-C3 sqrt(cases)).
/// SE from diag((J'J)^-1) * RSS / (n - 2). Needs at least 3 points.
RegressionFit fit_m2(std::span<const FitPoint> points, Eigen::Vector2d init = Eigen::Vector2d(1.0, 0.1),
                     const LmOptions& options = {});

std::vector<FitPoint> m1_points(std::span<const EvaluationRecord> records);
std::vector<FitPoint> m2_points(std::span<const EvaluationRecord> records);

/// Both models on every stratum. A stratum that cannot be fitted yields a
/// record with converged = false and the reason in diagnostics.
std::vector<RegressionFit> fit_all(std::span<const EvaluationRecord> records);

/// model,stratum,points,coefficient,estimate,standard_error,r_squared,iterations,converged
std::string format_regression_csv(std::span<const RegressionFit> fits);
std::string format_regression_text(std::span<const RegressionFit> fits);

}  // namespace k2bench
