#include "ltt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ltt/errors.hpp"
#include "ltt/metrics.hpp"

namespace ltt {

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Awgn: return "awgn";
    case ChannelKind::Rayleigh: return "rayleigh";
    case ChannelKind::Mimo: return "mimo";
  }
  return "unknown";
}

ChannelKind parse_channel(std::string_view name) {
  if (name == "awgn") return ChannelKind::Awgn;
  if (name == "rayleigh") return ChannelKind::Rayleigh;
  if (name == "mimo") return ChannelKind::Mimo;
  throw ParseError("unknown channel '" + std::string(name) + "' (expected awgn, rayleigh or mimo)");
}

std::string_view to_string(Solver solver) { return solver == Solver::Euler ? "euler" : "midpoint"; }

Solver parse_solver(std::string_view name) {
  if (name == "euler") return Solver::Euler;
  if (name == "midpoint") return Solver::Midpoint;
  throw ParseError("unknown solver '" + std::string(name) + "' (expected euler or midpoint)");
}

double awgn_sigma(double signal_rms, double snr_db) { return signal_rms * std::pow(10.0, -snr_db / 20.0); }

std::vector<CalibrationRow> calibration_table(const std::vector<double>& snrs_db, double signal_rms,
                                              const NoiseSchedule& sched) {
  if (!(signal_rms > 0.0)) throw DomainError("calibration_table: signal_rms must be positive");
  std::vector<CalibrationRow> rows;
  for (double snr : snrs_db) {
    CalibrationRow row;
    row.snr_db = snr;
    row.sigma_ch = awgn_sigma(signal_rms, snr);
    try {
      row.t_star = sched.sigma_inv(row.sigma_ch);
      row.t_star_reversed = reversed_time(row.t_star);
    } catch (const CalibrationError&) {
      row.outage = true;
      row.t_star = row.t_star_reversed = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

Rng message_stream(std::uint64_t seed, std::size_t message) {
  return Rng(seed).derive("pipeline.message").derive(static_cast<std::uint64_t>(message));
}

namespace {

void clamp_unit(Vector& v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
}

}  // namespace

MessageResult run_message(ConstSpan x, double snr_db, double signal_power, const PipelineConfig& cfg,
                          const NoiseSchedule& sched, const VelocityField& field, Rng& rng) {
  MessageResult out;
  if (cfg.channel == ChannelKind::Awgn) {
    const double sigma_ch = awgn_sigma(std::sqrt(signal_power), snr_db);
    out.received = awgn(x, sigma_ch, rng);
    try {
      out.decoded = decode_awgn(out.received, sigma_ch, sched, field, cfg.solver, cfg.steps);
    } catch (const CalibrationError&) {
      out.outage = true;
      out.decoded = out.received;
    }
  } else {
    // Per complex symbol: sigma_x^2 = 2 * per-real power, so lambda = 10^(-snr/10).
    const double sx2 = 2.0 * signal_power;
    ChannelParams p;
    p.sigma_ch = std::sqrt(sx2) * std::pow(10.0, -snr_db / 20.0);
    p.lambda = p.sigma_ch * p.sigma_ch / sx2;
    p.debias = cfg.debias;
    p.fast_fading = cfg.fast_fading;
    const ComplexVec z = pack_complex(x);
    const std::size_t rx = cfg.channel == ChannelKind::Mimo ? cfg.mimo_rx : 1;
    const std::size_t tx = cfg.channel == ChannelKind::Mimo ? cfg.mimo_tx : 1;
    ChannelReport report;
    try {
      report = mimo_transmit(z, rx, tx, p, sched, rng, x.size());
      out.received = landing_point(report);
      out.decoded = mimo_decode(report, field, cfg.solver, cfg.steps);
    } catch (const CalibrationError&) {
      out.outage = true;
      if (out.received.empty()) out.received = Vector(x.begin(), x.end());
      out.decoded = out.received;
    }
  }
  if (cfg.clamp) {
    clamp_unit(out.received);
    clamp_unit(out.decoded);
  }
  return out;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SnrPoint run_snr_point(const Dataset& data, double snr_db, double signal_power, const PipelineConfig& cfg,
                       const NoiseSchedule& sched, const VelocityField& field) {
  const std::size_t n = cfg.messages == 0 ? data.size() : std::min(cfg.messages, data.size());
  if (n == 0) throw ShapeError("run_snr_point: no messages");
  std::vector<MetricReport> reports(n);
  std::vector<double> received_psnr(n);
  std::vector<char> outage(n, 0);
  parallel_for(n, cfg.workers, [&](std::size_t m) {
    Rng rng = message_stream(cfg.seed, m);
    const MessageResult r = run_message(data.samples[m], snr_db, signal_power, cfg, sched, field, rng);
    reports[m] = evaluate(data.samples[m], r.decoded, r.received, cfg.peak);
    received_psnr[m] = psnr(data.samples[m], r.received, cfg.peak);
    outage[m] = r.outage ? 1 : 0;
  });
  SnrPoint p;
  p.channel = cfg.channel;
  p.snr_db = snr_db;
  p.sigma_ch = cfg.channel == ChannelKind::Awgn ? awgn_sigma(std::sqrt(signal_power), snr_db)
                                                : std::sqrt(2.0 * signal_power) * std::pow(10.0, -snr_db / 20.0);
  p.messages = n;
  for (std::size_t m = 0; m < n; ++m) {
    p.mse += reports[m].mse;
    p.psnr_db += reports[m].psnr_db;
    p.delta_psnr_db += reports[m].delta_psnr_db;
    p.received_psnr_db += received_psnr[m];
    p.outages += static_cast<std::size_t>(outage[m]);
  }
  const double dn = static_cast<double>(n);
  p.mse /= dn;
  p.psnr_db /= dn;
  p.delta_psnr_db /= dn;
  p.received_psnr_db /= dn;
  return p;
}

StepsPoint run_steps_point(const Dataset& data, double snr_db, double signal_power, std::size_t steps,
                           const PipelineConfig& cfg, const NoiseSchedule& sched, const VelocityField& field) {
  const std::size_t n = cfg.messages == 0 ? data.size() : std::min(cfg.messages, data.size());
  if (n == 0) throw ShapeError("run_steps_point: no messages");
  const double sigma_ch = awgn_sigma(std::sqrt(signal_power), snr_db);
  std::vector<double> seconds(n);
  StepsPoint p;
  p.steps = steps;
  for (std::size_t m = 0; m < n; ++m) {
    Rng rng = message_stream(cfg.seed, m);
    const Vector y = awgn(data.samples[m], sigma_ch, rng);
    const auto start = std::chrono::steady_clock::now();
    Vector x = decode_awgn(y, sigma_ch, sched, field, cfg.solver, steps);
    const auto stop = std::chrono::steady_clock::now();
    seconds[m] = std::chrono::duration<double>(stop - start).count();
    if (cfg.clamp) clamp_unit(x);
    const double e = mse(data.samples[m], x);
    p.mse += e;
    p.psnr_db += psnr_from_mse(e, cfg.peak);
  }
  p.mse /= static_cast<double>(n);
  p.psnr_db /= static_cast<double>(n);
  std::nth_element(seconds.begin(), seconds.begin() + static_cast<std::ptrdiff_t>(n / 2), seconds.end());
  p.seconds_per_sample = seconds[n / 2];
  return p;
}

}  // namespace ltt
