#include "ltt/ode_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltt/errors.hpp"

namespace ltt {

namespace {

void check_velocity(const Vector& v, std::size_t dim) {
  if (v.size() != dim) {
    throw ShapeError("velocity field returned dimension " + std::to_string(v.size()) +
                     ", expected " + std::to_string(dim));
  }
}

void check_state(const Vector& x, std::size_t step) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw NumericError("ODE integration produced a non-finite state at step " + std::to_string(step));
    }
  }
}

}  // namespace

void DecodeConfig::validate() const {
  if (steps == 0) throw DomainError("DecodeConfig: steps must be at least 1");
  if (!(t_start >= 0.0 && t_start < 1.0)) throw DomainError("DecodeConfig: t_start must lie in [0, 1)");
}

VelocityField as_velocity_field(const StudentField& field) {
  return [&field](ConstSpan x, double t) { return field.forward(x, t); };
}

Vector integrate_staged(const VelocityField& field, ConstSpan x0, ConstSpan landing, Solver solver,
                        std::size_t steps) {
  if (landing.size() != x0.size()) throw ShapeError("integrate_staged: one landing time per component");
  if (steps == 0) throw DomainError("integrate_staged: steps must be at least 1");
  Vector x(x0.begin(), x0.end());
  if (x.empty()) return x;
  const double t0 = *std::min_element(landing.begin(), landing.end());
  if (!(t0 >= 0.0 && t0 <= 1.0)) throw DomainError("integrate_staged: landing times must lie in [0, 1]");
  if (t0 == 1.0) return x;

  const double dt = (1.0 - t0) / static_cast<double>(steps);
  const std::size_t dim = x.size();
  Vector share(dim);  // fraction of the current step each component moves
  Vector probe(dim);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_k = t0 + static_cast<double>(k) * dt;
    const double t_next = t0 + static_cast<double>(k + 1) * dt;
    for (std::size_t j = 0; j < dim; ++j) {
      if (landing[j] <= t_k) {
        share[j] = 1.0;
      } else if (landing[j] >= t_next) {
        share[j] = 0.0;
      } else {
        share[j] = (t_next - landing[j]) / dt;
      }
    }
    const Vector v = field(x, t_k);
    check_velocity(v, dim);
    if (solver == Solver::Euler) {
      for (std::size_t j = 0; j < dim; ++j) x[j] += share[j] * dt * v[j];
    } else {
      for (std::size_t j = 0; j < dim; ++j) probe[j] = x[j] + share[j] * 0.5 * dt * v[j];
      const Vector v_mid = field(probe, t_k + 0.5 * dt);
      check_velocity(v_mid, dim);
      for (std::size_t j = 0; j < dim; ++j) x[j] += share[j] * dt * v_mid[j];
    }
    check_state(x, k);
  }
  return x;
}

Vector integrate(const VelocityField& field, ConstSpan x0, const DecodeConfig& cfg) {
  cfg.validate();
  const Vector landing(x0.size(), cfg.t_start);
  Vector x = integrate_staged(field, x0, landing, cfg.solver, cfg.steps);
  if (cfg.clamp_output) {
    for (double& v : x) v = std::clamp(v, cfg.clamp_low, cfg.clamp_high);
  }
  return x;
}

Vector decode_awgn(ConstSpan y, double sigma_ch, const NoiseSchedule& sched,
                   const VelocityField& field, Solver solver, std::size_t steps,
                   bool clamp_output) {
  const double t_star = sched.sigma_inv(sigma_ch);
  if (t_star >= 1.0) {
    Vector out(y.begin(), y.end());
    if (clamp_output) {
      for (double& v : out) v = std::clamp(v, 0.0, 1.0);
    }
    return out;
  }
  DecodeConfig cfg;
  cfg.solver = solver;
  cfg.steps = steps;
  cfg.t_start = t_star;
  cfg.clamp_output = clamp_output;
  return integrate(field, y, cfg);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ShapeError("fit_line: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

ConvergenceProfile convergence_profile(const VelocityField& field, ConstSpan x0, double t_start,
                                       const std::vector<std::size_t>& step_counts, Solver solver,
                                       std::optional<Vector> reference) {
  if (step_counts.empty()) throw DomainError("convergence_profile: no step counts given");
  if (!reference) {
    DecodeConfig ref_cfg;
    ref_cfg.solver = Solver::Midpoint;
    ref_cfg.steps = 10 * *std::max_element(step_counts.begin(), step_counts.end());
    ref_cfg.t_start = t_start;
    reference = integrate(field, x0, ref_cfg);
  }
  ConvergenceProfile profile;
  std::vector<double> log_n, log_err;
  for (std::size_t n : step_counts) {
    DecodeConfig cfg;
    cfg.solver = solver;
    cfg.steps = n;
    cfg.t_start = t_start;
    const Vector x = integrate(field, x0, cfg);
    double err2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) err2 += (x[j] - (*reference)[j]) * (x[j] - (*reference)[j]);
    const double err = std::sqrt(err2);
    profile.points.push_back({n, err});
    if (err > 0.0) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_err.push_back(std::log(err));
    }
  }
  if (log_n.size() >= 2) profile.slope = fit_line(log_n, log_err).slope;
  return profile;
}

}  // namespace ltt
