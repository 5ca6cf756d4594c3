#pragma once

#include "ltt/rng.hpp"
#include "ltt/schedule.hpp"
#include "ltt/types.hpp"

namespace ltt {

/// One draw from the conditional Gaussian path X_t | X_1 = x1 ~ N(x1, sigma(t)^2 I).
/// Invariant: x_t[i] == x1[i] + sigma(t) * eps[i].
struct PathSample {
  Vector x_t;
  Vector x1;
  Vector eps;
  double t = 0.0;
};

PathSample sample_path(ConstSpan x1, double t, const NoiseSchedule& sched, Rng& rng);

/// Conditional (teacher) velocity sigma_dot(t) * eps. Equal to
/// (sigma_dot / sigma) * (x_t - x1) wherever sigma(t) > 0 and finite at t = 1.
Vector teacher_velocity(const PathSample& sample, const NoiseSchedule& sched);

/// Same field in its ratio form (sigma_dot / sigma)(x - x1). Requires sigma(t) > 0.
Vector teacher_velocity_ratio(ConstSpan x, double t, ConstSpan x1, const NoiseSchedule& sched);

/// Conditional density p_{t|1}(x | x1).
double conditional_density(ConstSpan x, double t, ConstSpan x1, const NoiseSchedule& sched);

/// |d/dt p + div(p u)| at (x, t): the time derivative is a central difference with
/// step h, the divergence is closed-form. Vanishes as O(h^2) for the exact pair.
double continuity_residual(ConstSpan x, double t, ConstSpan x1, const NoiseSchedule& sched,
                           double h);

/// Exact marginal velocity field when the source is N(mu0, sigma0^2 I):
/// sigma * sigma_dot / (sigma0^2 + sigma^2) * (x - mu0).
Vector marginal_field_gaussian(ConstSpan x, double t, ConstSpan mu0, double sigma0,
                               const NoiseSchedule& sched);

}  // namespace ltt
