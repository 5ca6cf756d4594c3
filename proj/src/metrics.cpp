#include "ltt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ltt/errors.hpp"

namespace ltt {

double mse(ConstSpan a, ConstSpan b) {
  if (a.size() != b.size()) throw ShapeError("mse: inputs differ in length");
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double psnr_from_mse(double m, double peak) {
  if (!(peak > 0.0)) throw DomainError("psnr: peak must be positive");
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / m);
}

double psnr(ConstSpan a, ConstSpan b, double peak) { return psnr_from_mse(mse(a, b), peak); }

namespace {

double clamp_delta(double d, double ceiling) {
  if (std::isnan(d)) return 0.0;  // both sides infinite: no change
  return std::clamp(d, -ceiling, ceiling);
}

}  // namespace

double delta_psnr(ConstSpan clean, ConstSpan decoded, ConstSpan received, double peak, double ceiling) {
  return clamp_delta(psnr(clean, decoded, peak) - psnr(clean, received, peak), ceiling);
}

MetricReport evaluate(ConstSpan clean, ConstSpan decoded, ConstSpan received, double peak) {
  MetricReport r;
  r.peak = peak;
  r.mse = mse(clean, decoded);
  r.psnr_db = psnr_from_mse(r.mse, peak);
  r.delta_psnr_db = clamp_delta(r.psnr_db - psnr(clean, received, peak), kDeltaPsnrCeiling);
  return r;
}

}  // namespace ltt
