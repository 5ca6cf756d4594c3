#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ltt/channel.hpp"
#include "ltt/data_io.hpp"
#include "ltt/ode_decoder.hpp"
#include "ltt/schedule.hpp"

namespace ltt {

enum class ChannelKind { Awgn, Rayleigh, Mimo };

std::string_view to_string(ChannelKind kind);
ChannelKind parse_channel(std::string_view name);
std::string_view to_string(Solver solver);
Solver parse_solver(std::string_view name);

/// sigma_ch for a real-valued AWGN channel: rms * 10^(-snr/20).
double awgn_sigma(double signal_rms, double snr_db);

struct CalibrationRow {
  double snr_db = 0.0;
  double sigma_ch = 0.0;
  double t_star = 0.0;           // clean at t = 1
  double t_star_reversed = 0.0;  // clean at t = 0
  bool outage = false;           // sigma_ch above sigma_max; times are NaN
};

/// Landing time per SNR with sigma_ch = signal_rms * 10^(-snr/20).
std::vector<CalibrationRow> calibration_table(const std::vector<double>& snrs_db, double signal_rms,
                                              const NoiseSchedule& sched);

struct PipelineConfig {
  ChannelKind channel = ChannelKind::Awgn;
  std::size_t mimo_rx = 2;
  std::size_t mimo_tx = 2;
  Solver solver = Solver::Euler;
  std::size_t steps = 10;
  bool debias = false;
  bool fast_fading = false;
  bool clamp = true;  // decoded and received images clamped to [0, 1]
  double peak = 1.0;
  std::uint64_t seed = 0;
  std::size_t messages = 0;  // 0: every sample of the dataset
  std::size_t workers = 0;   // 0: hardware concurrency
};

/// One message through channel and decoder.
struct MessageResult {
  Vector received;  // landing point in the original coordinates
  Vector decoded;
  bool outage = false;  // calibration failed; decoded is the landing point
};

/// Sends `x` through the configured channel at `snr_db` and decodes it. The noise and
/// fading draws come from `rng`. signal_power is the mean square per real coordinate.
MessageResult run_message(ConstSpan x, double snr_db, double signal_power, const PipelineConfig& cfg,
                          const NoiseSchedule& sched, const VelocityField& field, Rng& rng);

struct SnrPoint {
  ChannelKind channel = ChannelKind::Awgn;
  double snr_db = 0.0;
  double sigma_ch = 0.0;
  double mse = 0.0;          // mean over messages
  double psnr_db = 0.0;      // mean of per-message PSNR
  double delta_psnr_db = 0.0;
  double received_psnr_db = 0.0;
  std::size_t messages = 0;
  std::size_t outages = 0;
};

/// Runs every message at one SNR. Message m always uses the stream keyed by
/// (cfg.seed, m), so channels and SNR points share their random numbers.
SnrPoint run_snr_point(const Dataset& data, double snr_db, double signal_power, const PipelineConfig& cfg,
                       const NoiseSchedule& sched, const VelocityField& field);

struct StepsPoint {
  std::size_t steps = 0;
  double mse = 0.0;
  double psnr_db = 0.0;
  double seconds_per_sample = 0.0;  // median decode time
};

/// Decoder quality and median latency at N steps (AWGN only, single-threaded timing).
StepsPoint run_steps_point(const Dataset& data, double snr_db, double signal_power, std::size_t steps,
                           const PipelineConfig& cfg, const NoiseSchedule& sched, const VelocityField& field);

/// Message stream shared by every channel and SNR point.
Rng message_stream(std::uint64_t seed, std::size_t message);

}  // namespace ltt
