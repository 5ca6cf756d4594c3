#include "ltt/scalar_bench.hpp"

#include <cmath>

#include "ltt/errors.hpp"

namespace ltt {

ScalarModel::ScalarModel(double sigma_x, double sigma_ch) : sigma_x_(sigma_x), sigma_ch_(sigma_ch) {
  if (!(sigma_x > 0.0)) throw DomainError("ScalarModel: sigma_x must be positive");
  if (!(sigma_ch >= 0.0)) throw DomainError("ScalarModel: sigma_ch must be nonnegative");
}

double ltt_gain(const ScalarModel& m) {
  return m.sigma_x() / std::hypot(m.sigma_x(), m.sigma_ch());
}

double mmse_gain(const ScalarModel& m) {
  const double sx2 = m.sigma_x() * m.sigma_x();
  return sx2 / (sx2 + m.sigma_ch() * m.sigma_ch());
}

double mse_of_gain(const ScalarModel& m, double a) {
  const double sx2 = m.sigma_x() * m.sigma_x();
  const double sy2 = sx2 + m.sigma_ch() * m.sigma_ch();
  return sx2 - 2.0 * a * sx2 + a * a * sy2;
}

double excess_mse(const ScalarModel& m) {
  const double sy2 = m.sigma_x() * m.sigma_x() + m.sigma_ch() * m.sigma_ch();
  const double gap = ltt_gain(m) - mmse_gain(m);
  return sy2 * gap * gap;
}

double excess_mse_asymptote(const ScalarModel& m) {
  const double s2 = m.sigma_ch() * m.sigma_ch();
  return s2 * s2 / (4.0 * m.sigma_x() * m.sigma_x());
}

double exact_scalar_decode(double y, const ScalarModel& m, const NoiseSchedule& sched) {
  const double t_star = sched.sigma_inv(m.sigma_ch());
  // X_1 = X_{t*} * s(1) / s(t*), s(1) = sigma_x.
  const double s_start = std::hypot(m.sigma_x(), sched.sigma(t_star));
  return y * m.sigma_x() / s_start;
}

double scalar_field(double x, double t, const ScalarModel& m, const NoiseSchedule& sched) {
  const double level = sched.sigma(t);
  return level * sched.sigma_dot(t) / (m.sigma_x() * m.sigma_x() + level * level) * x;
}

}  // namespace ltt
