#include "ltt/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ltt/cfm_trainer.hpp"
#include "ltt/channel.hpp"
#include "ltt/complex_linalg.hpp"
#include "ltt/data_io.hpp"
#include "ltt/errors.hpp"
#include "ltt/flow_path.hpp"
#include "ltt/metrics.hpp"
#include "ltt/ode_decoder.hpp"
#include "ltt/pipeline.hpp"
#include "ltt/scalar_bench.hpp"
#include "ltt/student_field.hpp"

namespace ltt {

namespace {

using Clock = std::chrono::steady_clock;

Check at_most(std::string label, double measured, double bound) {
  return {std::move(label), measured, "<=", bound, 0.0, measured <= bound, false};
}

Check below(std::string label, double measured, double bound) {
  return {std::move(label), measured, "<", bound, 0.0, measured < bound, false};
}

Check above(std::string label, double measured, double bound) {
  return {std::move(label), measured, ">", bound, 0.0, measured > bound, false};
}

Check at_least(std::string label, double measured, double bound) {
  return {std::move(label), measured, ">=", bound, 0.0, measured >= bound, false};
}

Check within(std::string label, double measured, double lo, double hi) {
  return {std::move(label), measured, "in", lo, hi, measured >= lo && measured <= hi, false};
}

Check info(Check c) {
  c.informational = true;
  return c;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

void say(const VerifyOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

// ---------------------------------------------------------------------------

void criterion_scalar_closed_forms(CriterionResult& r, const VerifyOptions& o) {
  r.title = "scalar benchmark closed forms vs Monte-Carlo least squares";
  r.time_limit = 5.0;
  constexpr std::size_t kPairs = 1'000'000;
  for (double sigma_ch : {1.0, 2.0}) {
    const ScalarModel m(1.0, sigma_ch);
    Rng rng = Rng(o.seed).derive("verify.scalar").derive(static_cast<std::uint64_t>(sigma_ch * 1000));
    std::vector<double> xs(kPairs), ys(kPairs);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < kPairs; ++i) {
      xs[i] = m.sigma_x() * rng.normal();
      ys[i] = xs[i] + sigma_ch * rng.normal();
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    // Least-squares slope is the empirical MMSE gain; the distribution-matching
    // gain maps the empirical spread of Y onto that of X.
    const double a_mmse_hat = sxy / syy;
    const double a_ltt_hat = std::sqrt(sxx / syy);
    auto mse_hat = [&](double a) {
      double s = 0.0;
      for (std::size_t i = 0; i < kPairs; ++i) s += (xs[i] - a * ys[i]) * (xs[i] - a * ys[i]);
      return s / static_cast<double>(kPairs);
    };
    const double excess_hat = mse_hat(a_ltt_hat) - mse_hat(a_mmse_hat);
    const std::string tag = "sigma_ch=" + std::to_string(sigma_ch).substr(0, 3) + ": ";
    r.checks.push_back(at_most(tag + "ltt_gain relative error", rel_err(ltt_gain(m), a_ltt_hat), 0.01));
    r.checks.push_back(at_most(tag + "mmse_gain relative error", rel_err(mmse_gain(m), a_mmse_hat), 0.01));
    r.checks.push_back(at_most(tag + "excess_mse relative error", rel_err(excess_mse(m), excess_hat), 0.01));
  }
  const ScalarModel small(1.0, 0.01);
  r.checks.push_back(within("excess_mse / (sigma_ch^4 / 4 sigma_x^2) at sigma_ch=0.01",
                            excess_mse(small) / excess_mse_asymptote(small), 0.995, 1.005));
}

// ---------------------------------------------------------------------------

void criterion_landing_table(CriterionResult& r, const VerifyOptions&) {
  r.title = "landing-time table, reversed scale, signal_rms=0.463";
  r.time_limit = 1.0;
  const std::vector<double> snrs{0, 3, 5, 7, 10, 12, 15};
  const std::vector<double> table{0.463, 0.328, 0.261, 0.207, 0.147, 0.116, 0.082};
  const NoiseSchedule sched(1.0);
  auto compare = [&](double rms, double& max_abs, int& exact) {
    const auto rows = calibration_table(snrs, rms, sched);
    max_abs = 0.0;
    exact = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      max_abs = std::max(max_abs, std::abs(rows[i].t_star_reversed - table[i]));
      if (std::abs(std::round(rows[i].t_star_reversed * 1000.0) - table[i] * 1000.0) < 0.5) ++exact;
    }
  };
  double max_abs = 0.0;
  int exact = 0;
  compare(0.463, max_abs, exact);
  // Both the tabulated times and the 0.463 constant carry three decimals, so the
  // computed column can sit up to 0.0005 * (1 + 1) away from the printed value.
  r.checks.push_back(below("max |t*_rev - table| over 7 rows", max_abs, 1e-3));
  r.checks.push_back(info(at_least("rows equal to the table after rounding to 3 decimals", exact, 7)));
  compare(0.4634, max_abs, exact);
  r.checks.push_back(info(at_least("rows equal after rounding with signal_rms=0.4634", exact, 7)));
}

// ---------------------------------------------------------------------------

void criterion_convergence(CriterionResult& r, const VerifyOptions& o) {
  r.title = "solver convergence orders and latency linearity";
  r.time_limit = 30.0;
  const NoiseSchedule sched(1.0);
  const Vector mu{0.0};
  const VelocityField analytic = [&](ConstSpan x, double t) { return marginal_field_gaussian(x, t, mu, 1.0, sched); };
  const double t_star = sched.sigma_inv(0.5);
  const Vector x0{1.5};
  const double s0 = sched.sigma(t_star);
  // d log x / dt = d/dt (1/2) log(1 + sigma^2), so x(1) = x0 / sqrt(1 + sigma(t*)^2).
  const Vector exact{x0[0] / std::sqrt(1.0 + s0 * s0)};
  const std::vector<std::size_t> ns{5, 10, 20, 40, 80};
  const auto euler = convergence_profile(analytic, x0, t_star, ns, Solver::Euler, exact);
  const auto mid = convergence_profile(analytic, x0, t_star, ns, Solver::Midpoint, exact);
  r.checks.push_back(within("Euler log-log error slope", euler.slope, -1.2, -0.8));
  r.checks.push_back(within("midpoint log-log error slope", mid.slope, -2.3, -1.7));

  // Two-component scalar mixture (means +-1.5, std 0.5): a nonlinear analytic field.
  const VelocityField mixture = [&](ConstSpan x, double t) {
    const double s = sched.sigma(t), v2 = 0.25 + s * s;
    const double w1 = std::exp(-(x[0] - 1.5) * (x[0] - 1.5) / (2.0 * v2));
    const double w2 = std::exp(-(x[0] + 1.5) * (x[0] + 1.5) / (2.0 * v2));
    const double mean = 1.5 * (w1 - w2) / (w1 + w2);
    return Vector{s * sched.sigma_dot(t) / v2 * (x[0] - mean)};
  };
  const auto mix_euler = convergence_profile(mixture, Vector{0.3}, 0.2, ns, Solver::Euler);
  const auto mix_mid = convergence_profile(mixture, Vector{0.3}, 0.2, ns, Solver::Midpoint);
  r.checks.push_back(info(within("Euler slope, mixture field", mix_euler.slope, -1.2, -0.8)));
  r.checks.push_back(info(within("midpoint slope, mixture field", mix_mid.slope, -2.3, -1.7)));

  FieldArchitecture arch;
  arch.input_dim = 64;
  arch.hidden_dims = {128, 128};
  StudentField net(arch, o.seed);
  Rng prng = Rng(o.seed).derive("verify.latency.params");
  for (std::size_t i = 0; i < net.parameter_count(); ++i) net.set_parameter(i, net.parameter(i) + 0.05 * prng.normal());
  const Dataset data = synth_gaussian(64, 0.5, 0.2, 41, o.seed);
  PipelineConfig pc;
  pc.seed = o.seed;
  pc.clamp = false;
  std::vector<double> nd, secs;
  const VelocityField f = as_velocity_field(net);
  run_steps_point(data, 10.0, data.signal_power(), 5, pc, sched, f);  // warm-up
  for (std::size_t n : ns) {
    const StepsPoint p = run_steps_point(data, 10.0, data.signal_power(), n, pc, sched, f);
    nd.push_back(static_cast<double>(n));
    secs.push_back(p.seconds_per_sample);
  }
  r.checks.push_back(at_least("latency vs N linear fit R^2", fit_line(nd, secs).r_squared, 0.98));
}

// ---------------------------------------------------------------------------

void criterion_training(CriterionResult& r, const VerifyOptions& o) {
  r.title = "CFM training fidelity on a 1-D Gaussian source";
  r.time_limit = 180.0;
  const NoiseSchedule sched(1.0);
  const Dataset data = synth_gaussian(1, 0.0, 1.0, 50'000, o.seed + 1);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 256;
  cfg.learning_rate = 3e-3;
  cfg.lr_schedule = LrSchedule::Cosine;
  cfg.seed = o.seed + 2;
  say(o, "training 1-D field");
  const TrainResult trained = train(cfg, data);

  const Vector mu{0.0};
  double se = 0.0;
  std::size_t count = 0;
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 19; ++j) {
      const Vector x{-3.0 + 0.1 * i};
      const double t = 0.05 * j;
      const double d = trained.field.forward(x, t)[0] - marginal_field_gaussian(x, t, mu, 1.0, sched)[0];
      se += d * d;
      ++count;
    }
  }
  r.checks.push_back(at_most("field RMSE on [-3,3]x[0,0.95]", std::sqrt(se / static_cast<double>(count)), 0.05));

  const double sigma_ch = awgn_sigma(1.0, 10.0);
  const VelocityField f = as_velocity_field(trained.field);
  Rng rng = Rng(o.seed).derive("verify.training.decode");
  constexpr int kMessages = 20'000;
  double total = 0.0;
  for (int k = 0; k < kMessages; ++k) {
    const double x = rng.normal();
    const Vector y{x + sigma_ch * rng.normal()};
    const double d = decode_awgn(y, sigma_ch, sched, f, Solver::Euler, 10)[0] - x;
    total += d * d;
  }
  const double bound = sigma_ch * sigma_ch / (1.0 + sigma_ch * sigma_ch);
  r.checks.push_back(at_most("|decode MSE / MMSE bound - 1| at 10 dB", std::abs(total / kMessages / bound - 1.0), 0.10));
}

// ---------------------------------------------------------------------------

double unitarity_residual(const CMatrix& q) {
  return frobenius(subtract(multiply(adjoint(q), q), CMatrix::identity(q.cols)));
}

void criterion_channels(CriterionResult& r, const VerifyOptions& o) {
  r.title = "channel reductions: Rayleigh noise, identity MIMO, complex SVD";
  r.time_limit = 30.0;
  const NoiseSchedule sched(1.0);
  Rng root = Rng(o.seed).derive("verify.channel");

  double worst_var = 0.0, worst_consistency = 0.0;
  for (std::uint64_t draw = 0; draw < 3; ++draw) {
    Rng rng = root.derive(draw);
    ComplexVec x(100'000);
    for (auto& z : x) z = draw_cn(rng);
    ChannelParams p;
    p.sigma_ch = 0.5;
    p.lambda = 0.25;
    const ChannelReport rep = rayleigh_equalize(x, p, sched, rng);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(rep.equalized[k] - rep.alpha[k] * x[k]);
    const double var = s / static_cast<double>(x.size());
    worst_var = std::max(worst_var, rel_err(var, rep.sigma_eff[0] * rep.sigma_eff[0]));
    worst_consistency = std::max(worst_consistency, report_consistency_error(rep, sched));
  }
  r.checks.push_back(at_most("Rayleigh Var(Z - alpha x) vs sigma_eff^2, relative", worst_var, 0.02));
  r.checks.push_back(at_most("report recomputed from stored H, max deviation", worst_consistency, 1e-12));

  double worst_identity = 0.0;
  const Vector mu0(63, 0.5);
  const VelocityField field = [&](ConstSpan x, double t) {
    return marginal_field_gaussian(x, t, ConstSpan(mu0).first(x.size()), 0.3, sched);
  };
  for (std::size_t len : {64u, 63u}) {
    for (Solver solver : {Solver::Euler, Solver::Midpoint}) {
      Rng rng = root.derive("identity").derive(len * 2 + (solver == Solver::Euler ? 0 : 1));
      Vector x(len);
      for (double& v : x) v = rng.uniform();
      ChannelParams p;
      p.sigma_ch = 0.2;
      p.lambda = 0.0;
      const ChannelReport rep = mimo_equalize(pack_complex(x), CMatrix::identity(2), p, sched, rng, len);
      const Vector via_mimo = mimo_decode(rep, field, solver, 10);
      const Vector via_awgn = decode_awgn(landing_point(rep), p.sigma_ch, sched, field, solver, 10);
      for (std::size_t i = 0; i < len; ++i) worst_identity = std::max(worst_identity, std::abs(via_mimo[i] - via_awgn[i]));
    }
  }
  r.checks.push_back(at_most("MIMO with H=I vs AWGN decode, max abs difference", worst_identity, 1e-9));

  double recon = 0.0, unit = 0.0;
  Rng mrng = root.derive("svd");
  auto probe = [&](const CMatrix& h) {
    const SvdResult s = complex_svd(h);
    recon = std::max(recon, frobenius(subtract(s.reconstruct(), h)));
    unit = std::max({unit, unitarity_residual(s.u), unitarity_residual(s.v)});
  };
  const std::pair<std::size_t, std::size_t> shapes[] = {{1, 1}, {2, 2}, {3, 3}, {4, 2}, {4, 4}};
  for (auto [rows, cols] : shapes) {
    for (int k = 0; k < 500; ++k) {
      CMatrix h(rows, cols);
      for (auto& z : h.data) z = draw_cn(mrng);
      probe(h);
    }
  }
  CMatrix rank1(2, 2);
  rank1(0, 0) = {1.0, 0.5};
  rank1(0, 1) = {2.0, 1.0};
  rank1(1, 0) = {-0.5, 1.0};
  rank1(1, 1) = {-1.0, 2.0};
  probe(rank1);
  probe(CMatrix(2, 2));
  probe(CMatrix::diagonal({2.0, 0.5}));
  r.checks.push_back(at_most("SVD reconstruction residual ||U S V^H - H||_F", recon, 1e-10));
  r.checks.push_back(at_most("SVD unitarity residual ||Q^H Q - I||_F", unit, 1e-10));
}

// ---------------------------------------------------------------------------

void criterion_continuity(CriterionResult& r, const VerifyOptions& o) {
  r.title = "continuity equation residual order in the time step";
  r.time_limit = 10.0;
  const NoiseSchedule sched(1.0);
  const std::vector<double> hs{0.02, 0.01, 0.005, 0.0025};
  double worst = 1e9;
  for (std::size_t d : {1u, 2u, 8u}) {
    Rng rng = Rng(o.seed).derive("verify.continuity").derive(static_cast<std::uint64_t>(d));
    std::vector<Vector> xs, x1s;
    std::vector<double> ts;
    for (double t : {0.3, 0.6}) {
      for (int k = 0; k < 3; ++k) {
        Vector x1(d), x(d);
        for (std::size_t i = 0; i < d; ++i) {
          x1[i] = rng.normal();
          x[i] = x1[i] + sched.sigma(t) * rng.normal();
        }
        xs.push_back(x);
        x1s.push_back(x1);
        ts.push_back(t);
      }
    }
    std::vector<double> log_h, log_res;
    for (double h : hs) {
      double total = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) total += continuity_residual(xs[k], ts[k], x1s[k], sched, h);
      log_h.push_back(std::log(h));
      log_res.push_back(std::log(total));
    }
    const double order = fit_line(log_h, log_res).slope;
    r.checks.push_back(info(at_least("observed order, d=" + std::to_string(d), order, 1.9)));
    worst = std::min(worst, order);
  }
  r.checks.push_back(at_least("minimum observed order over d in {1,2,8}", worst, 1.9));
}

// ---------------------------------------------------------------------------

void criterion_gradients(CriterionResult& r, const VerifyOptions& o) {
  r.title = "student field gradients vs central finite differences";
  r.time_limit = 5.0;
  FieldArchitecture arch;
  arch.input_dim = 3;
  arch.hidden_dims = {6, 5};
  arch.time_features = 2;
  StudentField net(arch, o.seed);
  Rng rng = Rng(o.seed).derive("verify.gradients");
  for (std::size_t i = 0; i < net.parameter_count(); ++i) net.set_parameter(i, 0.7 * rng.normal());

  // Fourth-order central stencil: truncation ~h^4 and roundoff ~eps|L|/h both stay
  // far below the tolerance for gradients of order 1e-6 and up.
  constexpr double kStep = 1e-4;
  // Gradients below this magnitude are compared absolutely.
  constexpr double kFloor = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    Vector x(3), target(3);
    for (double& v : x) v = rng.normal();
    for (double& v : target) v = rng.normal();
    const double t = rng.uniform();
    auto loss = [&] {
      const Vector v = net.forward(x, t);
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - target[i]) * (v[i] - target[i]);
      return s;
    };
    net.zero_grad();
    net.backward(x, t, target);
    for (std::size_t i = 0; i < net.parameter_count(); ++i) {
      const double p0 = net.parameter(i);
      auto at = [&](double offset) {
        net.set_parameter(i, p0 + offset);
        return loss();
      };
      const double fd = (8.0 * (at(kStep) - at(-kStep)) - (at(2.0 * kStep) - at(-2.0 * kStep))) / (12.0 * kStep);
      net.set_parameter(i, p0);
      const double g = net.gradient(i);
      worst = std::max(worst, std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), kFloor}));
    }
  }
  net.zero_grad();
  r.checks.push_back(at_most("max relative gradient error over " + std::to_string(net.parameter_count()) + " parameters",
                             worst, 1e-4));
}

// ---------------------------------------------------------------------------

void criterion_end_to_end(CriterionResult& r, const VerifyOptions& o) {
  r.title = "end-to-end improvement on 8x8 digits";
  r.time_limit = 1200.0;
  const auto images = o.data_dir / "digits-images.idx3-ubyte";
  const auto labels = o.data_dir / "digits-labels.idx1-ubyte";
  if (!std::filesystem::exists(images)) {
    r.note = "digit images not found at " + images.string();
    return;
  }
  Dataset all = load_idx(images, labels);
  all = downsample(crop_center(all, 24, 24), 3);
  if (all.size() < 1500) {
    r.note = "expected 1500 digit images, found " + std::to_string(all.size());
    return;
  }
  const Dataset train_set = all.slice(0, 1000);
  const Dataset test_set = all.slice(1000, 500);
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.batch_size = 64;
  cfg.learning_rate = 1e-3;
  cfg.lr_schedule = LrSchedule::Cosine;
  cfg.hidden_dims = {256, 256};
  cfg.seed = o.seed + 3;
  say(o, "training 64-dim digit field (1000 images, 400 epochs)");
  const TrainResult trained = train(cfg, train_set);
  const VelocityField f = as_velocity_field(trained.field);
  const NoiseSchedule sched(1.0);
  const double power = train_set.signal_power();
  const std::vector<double> snrs{0, 3, 5, 10, 15};

  std::vector<SnrPoint> awgn_pts, ray_pts, mimo_pts;
  for (double snr : snrs) {
    PipelineConfig pc;
    pc.seed = o.seed;
    pc.channel = ChannelKind::Awgn;
    awgn_pts.push_back(run_snr_point(test_set, snr, power, pc, sched, f));
    pc.channel = ChannelKind::Rayleigh;
    ray_pts.push_back(run_snr_point(test_set, snr, power, pc, sched, f));
    pc.channel = ChannelKind::Mimo;
    mimo_pts.push_back(run_snr_point(test_set, snr, power, pc, sched, f));
  }
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    const std::string at = " at " + std::to_string(static_cast<int>(snrs[i])) + " dB";
    r.checks.push_back(above("AWGN mean delta PSNR" + at, awgn_pts[i].delta_psnr_db, 0.0));
  }
  for (std::size_t i = 1; i < snrs.size(); ++i) {
    r.checks.push_back(at_least("AWGN PSNR step " + std::to_string(static_cast<int>(snrs[i - 1])) + "->" +
                                    std::to_string(static_cast<int>(snrs[i])) + " dB (dB, margin 0.2)",
                                awgn_pts[i].psnr_db - awgn_pts[i - 1].psnr_db, -0.2));
  }
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    const std::string at = " at " + std::to_string(static_cast<int>(snrs[i])) + " dB over " +
                           std::to_string(mimo_pts[i].messages) + " messages";
    r.checks.push_back(at_least("MIMO minus Rayleigh mean PSNR" + at, mimo_pts[i].psnr_db - ray_pts[i].psnr_db, 0.0));
  }
}

}  // namespace

bool CriterionResult::passed() const {
  if (!note.empty()) return false;
  if (time_limit > 0.0 && seconds >= time_limit) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.passed; });
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  CriterionResult r;
  r.id = id;
  const auto start = Clock::now();
  try {
    switch (id) {
      case 1: criterion_scalar_closed_forms(r, options); break;
      case 2: criterion_landing_table(r, options); break;
      case 3: criterion_convergence(r, options); break;
      case 4: criterion_training(r, options); break;
      case 5: criterion_channels(r, options); break;
      case 6: criterion_continuity(r, options); break;
      case 7: criterion_gradients(r, options); break;
      case 8: criterion_end_to_end(r, options); break;
      default: throw DomainError("no acceptance criterion with id " + std::to_string(id));
    }
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    r.note = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

CriterionResult check_corrupted_checkpoint(const std::filesystem::path& scratch_dir) {
  CriterionResult r;
  r.id = 0;
  r.title = "corrupted checkpoint is rejected";
  const auto start = Clock::now();
  std::filesystem::create_directories(scratch_dir);
  const auto good = scratch_dir / "intact.json";
  const auto bad = scratch_dir / "corrupted.json";
  FieldArchitecture arch;
  arch.input_dim = 2;
  arch.hidden_dims = {4};
  save_checkpoint(StudentField(arch, 1), good);
  std::string text;
  {
    std::ifstream in(good);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  {
    std::ofstream out(bad, std::ios::trunc);
    out << text.substr(0, text.size() / 2);
  }
  bool rejected = false;
  try {
    load_checkpoint(bad);
  } catch (const ParseError&) {
    rejected = true;
  }
  bool intact = true;
  try {
    load_checkpoint(good);
  } catch (const std::exception&) {
    intact = false;
  }
  r.checks.push_back(at_least("truncated checkpoint raises a parse error", rejected ? 1.0 : 0.0, 1.0));
  r.checks.push_back(at_least("intact checkpoint still loads", intact ? 1.0 : 0.0, 1.0));
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

void print_result(std::ostream& os, const CriterionResult& result) {
  const auto flags = os.flags();
  os << (result.passed() ? "PASS" : "FAIL") << "  [" << result.id << "] " << result.title << " ("
     << std::fixed << std::setprecision(2) << result.seconds << " s";
  if (result.time_limit > 0.0) os << ", limit " << std::setprecision(0) << result.time_limit << " s";
  os << ")\n";
  os.flags(flags);
  if (!result.note.empty()) os << "      " << result.note << "\n";
  for (const Check& c : result.checks) {
    os << "      " << (c.informational ? "info" : (c.passed ? "ok  " : "FAIL")) << "  " << c.label << ": "
       << std::setprecision(6) << c.measured << " " << c.relation << " ";
    if (c.relation == "in") {
      os << "[" << c.bound << ", " << c.bound_high << "]";
    } else {
      os << c.bound;
    }
    os << "\n";
  }
  os.flags(flags);
}

}  // namespace ltt
