#include "k2bench/regression.hpp"

#include "k2bench/network_io.hpp"

#include <cstdio>

namespace k2bench {

const char* to_string(ModelId m) { return m == ModelId::kM1 ? "M1" : "M2"; }

namespace {

template <class Model>
RegressionFit fit_model(ModelId id, std::span<const FitPoint> points, Eigen::VectorXd init,
                        const LmOptions& options) {
  constexpr auto p = static_cast<std::size_t>(Model::kParams);
  if (points.size() < p + 1)
    throw Error(std::string(to_string(id)) + " fit needs at least " + std::to_string(p + 1) + " points, got " +
                std::to_string(points.size()));
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::ArrayXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pt = points[static_cast<std::size_t>(i)];
    if (!(pt.cases >= 0.0)) throw Error("case counts must be non-negative");
    x(i) = pt.cases;
    y(i) = pt.value;
  }

  const Model model;
  const LmResult lm = levenberg_marquardt(model, x, y, std::move(init), options);

  RegressionFit fit;
  fit.model = id;
  fit.points = points.size();
  fit.coefficients = lm.params;
  fit.rss = lm.rss;
  fit.tss = (y - y.mean()).square().sum();
  fit.r_squared = fit.tss > 0.0 ? 1.0 - fit.rss / fit.tss : (fit.rss == 0.0 ? 1.0 : 0.0);
  fit.iterations = lm.iterations;
  fit.converged = lm.converged;
  fit.diagnostics = lm.diagnostics;
  fit.rss_history = lm.rss_history;

  const Eigen::MatrixXd jac = model.jacobian(lm.params, x);
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const double sigma2 = lm.rss / static_cast<double>(points.size() - p);
  const Eigen::MatrixXd covariance =
      jtj.ldlt().solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))) * sigma2;
  fit.standard_errors = covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  return fit;
}

}  // namespace

RegressionFit fit_m1(std::span<const FitPoint> points, double init, const LmOptions& options) {
  Eigen::VectorXd start(1);
  start << init;
  return fit_model<SaturationModel>(ModelId::kM1, points, start, options);
}

RegressionFit fit_m2(std::span<const FitPoint> points, Eigen::Vector2d init, const LmOptions& options) {
  return fit_model<DecayModel>(ModelId::kM2, points, Eigen::VectorXd(init), options);
}

std::vector<FitPoint> m1_points(std::span<const EvaluationRecord> records) {
  std::vector<FitPoint> out;
  for (const auto& r : records)
    if (!r.degenerate) out.push_back({static_cast<double>(r.cases), r.m1});
  return out;
}

std::vector<FitPoint> m2_points(std::span<const EvaluationRecord> records) {
  std::vector<FitPoint> out;
  for (const auto& r : records)
    if (!r.degenerate) out.push_back({static_cast<double>(r.cases), r.m2});
  return out;
}

std::vector<RegressionFit> fit_all(std::span<const EvaluationRecord> records) {
  const auto strata = stratify(records);
  std::vector<RegressionFit> fits;
  for (ModelId model : {ModelId::kM1, ModelId::kM2})
    for (Stratum s : {Stratum::kAll, Stratum::kOrd2, Stratum::kOrd3}) {
      const auto& subset = strata[s];
      RegressionFit fit;
      try {
        fit = model == ModelId::kM1 ? fit_m1(m1_points(subset)) : fit_m2(m2_points(subset));
      } catch (const Error& e) {
        fit.model = model;
        fit.points = subset.size();
        fit.diagnostics = e.what();
        const Eigen::Index p = model == ModelId::kM1 ? 1 : 2;
        fit.coefficients = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
        fit.standard_errors = fit.coefficients;
      }
      fit.stratum = s;
      fits.push_back(std::move(fit));
    }
  return fits;
}

namespace {

std::string coefficient_name(ModelId m, Eigen::Index k) {
  if (m == ModelId::kM1) return "C1";
  return k == 0 ? "C2" : "C3";
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string format_regression_csv(std::span<const RegressionFit> fits) {
  std::string out = "model,stratum,points,coefficient,estimate,standard_error,r_squared,iterations,converged\n";
  for (const auto& f : fits)
    for (Eigen::Index k = 0; k < f.coefficients.size(); ++k)
      out += std::string(to_string(f.model)) + "," + to_string(f.stratum) + "," + std::to_string(f.points) + "," +
             coefficient_name(f.model, k) + "," + format_probability(f.coefficients(k)) + "," +
             format_probability(f.standard_errors(k)) + "," + format_probability(f.r_squared) + "," +
             std::to_string(f.iterations) + "," + (f.converged ? "1" : "0") + "\n";
  return out;
}

std::string format_regression_text(std::span<const RegressionFit> fits) {
  std::string out;
  for (ModelId model : {ModelId::kM1, ModelId::kM2}) {
    out += model == ModelId::kM1 ? "M1 = 1 - exp(-C1 sqrt(cases))\n" : "M2 = C2 exp(-C3 sqrt(cases))\n";
    for (const auto& f : fits) {
      if (f.model != model) continue;
      out += "  " + std::string(to_string(f.stratum)) + " (n=" + std::to_string(f.points) + "):";
      for (Eigen::Index k = 0; k < f.coefficients.size(); ++k)
        out += "  " + coefficient_name(model, k) + " = " + num(f.coefficients(k)) + " +/- " + num(f.standard_errors(k));
      out += "  R^2 = " + num(f.r_squared) + "  iterations = " + std::to_string(f.iterations);
      if (!f.converged) out += "  [not converged: " + f.diagnostics + "]";
      out += "\n";
    }
  }
  return out;
}

}  // namespace k2bench
