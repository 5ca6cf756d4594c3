#include "ltt/flow_path.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ltt/errors.hpp"

namespace ltt {

namespace {

void check_same_size(ConstSpan a, ConstSpan b, const char* op) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(op) + ": dimension mismatch (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  }
}

double squared_distance(ConstSpan a, ConstSpan b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

PathSample sample_path(ConstSpan x1, double t, const NoiseSchedule& sched, Rng& rng) {
  const double level = sched.sigma(t);
  PathSample sample;
  sample.t = t;
  sample.x1.assign(x1.begin(), x1.end());
  sample.eps.resize(x1.size());
  sample.x_t.resize(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    sample.eps[i] = rng.normal();
    sample.x_t[i] = x1[i] + level * sample.eps[i];
  }
  return sample;
}

Vector teacher_velocity(const PathSample& sample, const NoiseSchedule& sched) {
  const double rate = sched.sigma_dot(sample.t);
  Vector u(sample.eps.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = rate * sample.eps[i];
  return u;
}

Vector teacher_velocity_ratio(ConstSpan x, double t, ConstSpan x1, const NoiseSchedule& sched) {
  check_same_size(x, x1, "teacher_velocity_ratio");
  const double level = sched.sigma(t);
  if (!(level > 0.0)) throw DomainError("teacher_velocity_ratio: sigma(t) must be positive");
  const double ratio = sched.sigma_dot(t) / level;
  Vector u(x.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = ratio * (x[i] - x1[i]);
  return u;
}

double conditional_density(ConstSpan x, double t, ConstSpan x1, const NoiseSchedule& sched) {
  check_same_size(x, x1, "conditional_density");
  const double level = sched.sigma(t);
  if (!(level > 0.0)) throw DomainError("conditional_density: sigma(t) must be positive");
  const double var = level * level;
  const double d = static_cast<double>(x.size());
  return std::exp(-0.5 * d * std::log(2.0 * std::numbers::pi * var) -
                  squared_distance(x, x1) / (2.0 * var));
}

double continuity_residual(ConstSpan x, double t, ConstSpan x1, const NoiseSchedule& sched,
                           double h) {
  check_same_size(x, x1, "continuity_residual");
  if (!(h > 0.0)) throw DomainError("continuity_residual: step h must be positive");
  if (t - h < 0.0 || t + h > 1.0 || !(sched.sigma(t + h) > 0.0)) {
    throw DomainError("continuity_residual: sigma(t +/- h) must be positive inside [0, 1]");
  }
  const double dp_dt =
      (conditional_density(x, t + h, x1, sched) - conditional_density(x, t - h, x1, sched)) /
      (2.0 * h);

  // div(p u) = (sigma_dot / sigma) * (d - |x - x1|^2 / sigma^2) * p for u = (sigma_dot/sigma)(x - x1).
  const double level = sched.sigma(t);
  const double d = static_cast<double>(x.size());
  const double divergence = sched.sigma_dot(t) / level *
                            (d - squared_distance(x, x1) / (level * level)) *
                            conditional_density(x, t, x1, sched);
  return std::abs(dp_dt + divergence);
}

Vector marginal_field_gaussian(ConstSpan x, double t, ConstSpan mu0, double sigma0,
                               const NoiseSchedule& sched) {
  check_same_size(x, mu0, "marginal_field_gaussian");
  const double level = sched.sigma(t);
  const double gain = level * sched.sigma_dot(t) / (sigma0 * sigma0 + level * level);
  Vector v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = gain * (x[i] - mu0[i]);
  return v;
}

}  // namespace ltt
