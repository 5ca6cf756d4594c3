#include "ltt/schedule.hpp"

#include <cmath>
#include <string>

#include "ltt/errors.hpp"

namespace ltt {

namespace {

void check_time(double t, const char* op) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(op) + ": t = " + std::to_string(t) + " outside [0, 1]");
  }
}

}  // namespace

NoiseSchedule::NoiseSchedule(double sigma_max, ScheduleKind kind)
    : kind_(kind), sigma_max_(sigma_max) {
  if (!(sigma_max > 0.0) || !std::isfinite(sigma_max)) {
    throw DomainError("NoiseSchedule: sigma_max must be positive and finite");
  }
}

double NoiseSchedule::sigma(double t) const {
  check_time(t, "sigma");
  switch (kind_) {
    case ScheduleKind::Linear:
      return sigma_max_ * (1.0 - t);
  }
  return 0.0;
}

double NoiseSchedule::sigma_dot(double t) const {
  check_time(t, "sigma_dot");
  switch (kind_) {
    case ScheduleKind::Linear:
      return -sigma_max_;
  }
  return 0.0;
}

double NoiseSchedule::sigma_inv(double level) const {
  if (!(level >= 0.0)) {
    throw DomainError("sigma_inv: noise level must be nonnegative, got " + std::to_string(level));
  }
  if (level > sigma_max_) {
    throw CalibrationError("sigma_inv: noise level " + std::to_string(level) +
                               " exceeds sigma_max " + std::to_string(sigma_max_),
                           level, sigma_max_);
  }
  switch (kind_) {
    case ScheduleKind::Linear:
      return 1.0 - level / sigma_max_;
  }
  return 0.0;
}

}  // namespace ltt
