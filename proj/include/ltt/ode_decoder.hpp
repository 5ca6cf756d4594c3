#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ltt/schedule.hpp"
#include "ltt/student_field.hpp"
#include "ltt/types.hpp"

namespace ltt {

enum class Solver { Euler, Midpoint };

struct DecodeConfig {
  Solver solver = Solver::Euler;
  std::size_t steps = 10;
  double t_start = 0.0;  // landing time t*
  bool clamp_output = false;
  double clamp_low = 0.0;
  double clamp_high = 1.0;

  void validate() const;
};

/// Velocity field v(x, t) -> dx/dt.
using VelocityField = std::function<Vector(ConstSpan, double)>;

/// Adapter over a trained student; the student must outlive the returned field.
VelocityField as_velocity_field(const StudentField& field);

/// N uniform steps of the chosen scheme from t_start to 1.
Vector integrate(const VelocityField& field, ConstSpan x0, const DecodeConfig& cfg);

/// Integration with per-component landing times. The clock starts at the earliest
/// landing time; component j stays frozen until the clock passes landing[j] and,
/// on the step that crosses it, advances only over the remaining part of the step.
/// With equal landing times this is exactly integrate().
Vector integrate_staged(const VelocityField& field, ConstSpan x0, ConstSpan landing, Solver solver,
                        std::size_t steps);

/// Lands y at t* = sigma_inv(sigma_ch) and transports it to t = 1.
Vector decode_awgn(ConstSpan y, double sigma_ch, const NoiseSchedule& sched,
                   const VelocityField& field, Solver solver, std::size_t steps,
                   bool clamp_output = false);

struct ConvergencePoint {
  std::size_t steps = 0;
  double error = 0.0;
};

struct ConvergenceProfile {
  std::vector<ConvergencePoint> points;
  double slope = 0.0;  // least-squares slope of log(error) against log(N)
};

/// Error |x_N - x_ref| for each N. Without a reference, a midpoint run at ten
/// times the largest N serves as the reference.
ConvergenceProfile convergence_profile(const VelocityField& field, ConstSpan x0, double t_start,
                                       const std::vector<std::size_t>& step_counts, Solver solver,
                                       std::optional<Vector> reference = std::nullopt);

/// Least-squares slope and coefficient of determination of y against x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ltt
