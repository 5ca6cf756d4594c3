#pragma once

#include "ltt/schedule.hpp"

namespace ltt {

/// Scalar Gaussian benchmark: X1 ~ N(0, sigma_x^2), Y = X1 + sigma_ch * eps.
/// Every quantity here has a closed form, which makes it the reference for the
/// ODE solvers and the trained field.
class ScalarModel {
 public:
  ScalarModel(double sigma_x, double sigma_ch);

  double sigma_x() const noexcept { return sigma_x_; }
  double sigma_ch() const noexcept { return sigma_ch_; }

 private:
  double sigma_x_;
  double sigma_ch_;
};

/// Slope of the decoder obtained by transporting Y along the exact scalar flow.
double ltt_gain(const ScalarModel& m);

/// Slope of the linear MMSE estimator.
double mmse_gain(const ScalarModel& m);

/// E[(X1 - a Y)^2] for the linear estimator a * Y.
double mse_of_gain(const ScalarModel& m, double a);

/// mse_of_gain(ltt_gain) - mse_of_gain(mmse_gain). Behaves as sigma_ch^4 / (4 sigma_x^2)
/// for small sigma_ch.
double excess_mse(const ScalarModel& m);

/// Leading-order term sigma_ch^4 / (4 sigma_x^2) of excess_mse.
double excess_mse_asymptote(const ScalarModel& m);

/// Exact t = 1 endpoint of the scalar probability-flow ODE started at Y from
/// t* = sigma_inv(sigma_ch).
double exact_scalar_decode(double y, const ScalarModel& m, const NoiseSchedule& sched);

/// Marginal velocity field of the scalar path, (s_dot / s) * x with
/// s^2 = sigma_x^2 + sigma(t)^2.
double scalar_field(double x, double t, const ScalarModel& m, const NoiseSchedule& sched);

}  // namespace ltt
