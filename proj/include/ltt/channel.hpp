#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ltt/complex_linalg.hpp"
#include "ltt/ode_decoder.hpp"
#include "ltt/rng.hpp"
#include "ltt/schedule.hpp"
#include "ltt/types.hpp"

namespace ltt {

/// Complex entries; std::complex is layout-compatible with interleaved [re, im] pairs.
using ComplexVec = std::vector<Complex>;

/// Consecutive real pairs become (re, im). An odd tail is zero-padded.
ComplexVec pack_complex(ConstSpan x);
Vector unpack_complex(const ComplexVec& z, std::size_t original_len);

/// y = x + sigma_ch * eps with eps ~ N(0, I).
Vector awgn(ConstSpan x, double sigma_ch, Rng& rng);

/// One CN(0, 1) draw: real and imaginary parts each N(0, 1/2).
Complex draw_cn(Rng& rng);

struct ChannelParams {
  double sigma_ch = 0.0;
  double lambda = 1.0;  // sigma_ch^2 / sigma_x^2, sigma_x^2 per complex symbol
  bool debias = false;       // divide each mode by its shrink factor before landing
  bool fast_fading = false;  // redraw H for every channel use
};

struct ChannelRealization {
  CMatrix h;
  SvdResult svd;
};

/// Equalized observation in the SVD domain plus everything needed to land and rotate back.
/// Entry k belongs to channel use k / streams and mode k % streams.
struct ChannelReport {
  ComplexVec equalized;
  std::vector<double> alpha;
  std::vector<double> sigma_eff;
  std::vector<double> t_star;
  std::vector<ChannelRealization> realizations;
  std::vector<std::size_t> realization_of_use;
  std::size_t streams = 1;
  std::size_t original_len = 0;  // real length before packing
  double sigma_ch = 0.0;
  double lambda = 0.0;
  double sigma_max = 1.0;
  bool debiased = false;

  std::size_t uses() const noexcept { return realization_of_use.size(); }
};

/// Per-use Y = H x + sigma_ch eps, rotation by U^H and per-mode MMSE weights. Every
/// channel use sees `h`. original_len defaults to 2 * x.size().
ChannelReport mimo_equalize(const ComplexVec& x, const CMatrix& h, const ChannelParams& params,
                            const NoiseSchedule& sched, Rng& rng, std::size_t original_len = 0);

/// One H per channel use (per_use.size() must equal the number of uses).
ChannelReport mimo_equalize(const ComplexVec& x, const std::vector<CMatrix>& per_use,
                            const ChannelParams& params, const NoiseSchedule& sched, Rng& rng,
                            std::size_t original_len = 0);

/// Draws H with CN(0, 1) entries (once per message, or per use with fast fading) and
/// then equalizes as mimo_equalize. Fading and noise come from two substreams seeded
/// by the next two outputs of `rng`.
ChannelReport mimo_transmit(const ComplexVec& x, std::size_t n_rx, std::size_t n_tx,
                            const ChannelParams& params, const NoiseSchedule& sched, Rng& rng,
                            std::size_t original_len = 0);

/// Scalar Rayleigh fading: the 1x1 case of mimo_transmit.
ChannelReport rayleigh_equalize(const ComplexVec& x, const ChannelParams& params,
                                const NoiseSchedule& sched, Rng& rng, std::size_t original_len = 0);

/// Largest deviation between the stored (alpha, sigma_eff, t_star) and values recomputed
/// from the stored realizations.
double report_consistency_error(const ChannelReport& report, const NoiseSchedule& sched);

/// The equalized observation rotated back by V and unpacked, without transport.
Vector landing_point(const ChannelReport& report);

/// Transports every mode from its landing time to 1 with one shared field. The ODE
/// state lives in SVD coordinates; the field is evaluated in the original coordinates.
Vector mimo_decode(const ChannelReport& report, const VelocityField& field, Solver solver,
                   std::size_t steps, bool clamp_output = false);

}  // namespace ltt
