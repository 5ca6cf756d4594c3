#pragma once

namespace ltt {

enum class ScheduleKind { Linear };

/// Strictly decreasing noise level sigma(t) on [0, 1] with sigma(0) = sigma_max and
/// sigma(1) = 0. Time runs from the prior (t = 0) to clean data (t = 1).
class NoiseSchedule {
 public:
  explicit NoiseSchedule(double sigma_max = 1.0, ScheduleKind kind = ScheduleKind::Linear);

  ScheduleKind kind() const noexcept { return kind_; }
  double sigma_max() const noexcept { return sigma_max_; }

  double sigma(double t) const;
  double sigma_dot(double t) const;

  /// Landing time: the unique t with sigma(t) == level. Throws CalibrationError when
  /// level exceeds sigma_max.
  double sigma_inv(double level) const;

 private:
  ScheduleKind kind_;
  double sigma_max_;
};

/// Converts between the clean-at-1 convention used here and the reversed
/// (clean-at-0) convention that some solvers report.
constexpr double reversed_time(double t) noexcept { return 1.0 - t; }

}  // namespace ltt
