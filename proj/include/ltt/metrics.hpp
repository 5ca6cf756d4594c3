#pragma once

#include <limits>

#include "ltt/types.hpp"

namespace ltt {

inline constexpr double kDeltaPsnrCeiling = 99.0;

struct MetricReport {
  double mse = 0.0;
  double psnr_db = std::numeric_limits<double>::infinity();  // +inf when mse == 0
  double delta_psnr_db = 0.0;
  double peak = 1.0;
};

double mse(ConstSpan a, ConstSpan b);

/// 10 log10(peak^2 / mse); +inf for identical inputs.
double psnr(ConstSpan a, ConstSpan b, double peak = 1.0);
double psnr_from_mse(double mse, double peak = 1.0);

/// psnr(clean, decoded) - psnr(clean, received), clamped to [-ceiling, ceiling].
double delta_psnr(ConstSpan clean, ConstSpan decoded, ConstSpan received, double peak = 1.0,
                  double ceiling = kDeltaPsnrCeiling);

MetricReport evaluate(ConstSpan clean, ConstSpan decoded, ConstSpan received, double peak = 1.0);

}  // namespace ltt
