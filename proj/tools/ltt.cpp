// ltt: command-line harness for training, decoding, calibration and sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ltt/cfm_trainer.hpp"
#include "ltt/data_io.hpp"
#include "ltt/errors.hpp"
#include "ltt/metrics.hpp"
#include "ltt/pipeline.hpp"
#include "ltt/rng.hpp"
#include "ltt/student_field.hpp"
#include "ltt/verification.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string out = "out";
};

struct DataOpts {
  std::string path;
  std::string labels;
  std::size_t crop = 0;
  std::size_t downsample = 1;
  std::size_t first = 0;
  std::size_t count = 0;
};

void add_data_options(CLI::App* cmd, DataOpts& d, bool required) {
  auto* opt = cmd->add_option("--data", d.path, "dataset: IDX image file or CSV (one sample per row)");
  opt->check(CLI::ExistingFile);
  if (required) opt->required();
  cmd->add_option("--labels", d.labels, "IDX label file")->check(CLI::ExistingFile);
  cmd->add_option("--crop", d.crop, "center crop to crop x crop before downsampling (images)");
  cmd->add_option("--downsample", d.downsample, "box-average factor (images)")->check(CLI::PositiveNumber);
  cmd->add_option("--first", d.first, "index of the first sample used");
  cmd->add_option("--count", d.count, "number of samples used (0: all remaining)");
}

ltt::Dataset load_data(const DataOpts& d) {
  ltt::Dataset ds;
  if (fs::path(d.path).extension() == ".csv") {
    ds = ltt::load_dataset_csv(d.path);
  } else {
    ds = ltt::load_idx(d.path, d.labels.empty() ? std::nullopt : std::optional<fs::path>(d.labels));
    if (d.crop > 0) ds = ltt::crop_center(ds, d.crop, d.crop);
    if (d.downsample > 1) ds = ltt::downsample(ds, d.downsample);
  }
  if (d.first > ds.size()) throw ltt::ShapeError("--first is beyond the dataset size " + std::to_string(ds.size()));
  const std::size_t count = d.count == 0 ? ds.size() - d.first : d.count;
  if (d.first != 0 || count != ds.size()) ds = ds.slice(d.first, count);
  return ds;
}

std::uint64_t fnv1a(const std::string& text) { return ltt::Rng::hash_tag(text); }

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Resolved options of a subcommand as TOML, without the output location.
std::string resolved_config(const CLI::App* cmd) {
  std::istringstream in(cmd->config_to_str(true, false));
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("out=", 0) == 0 || line.rfind("config=", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

std::string write_manifest(const fs::path& dir, const CLI::App* cmd, const Common& common) {
  fs::create_directories(dir);
  const std::string config = resolved_config(cmd);
  const std::string hash = hex(fnv1a(cmd->get_name() + "\n" + config));
  json m;
  m["command"] = cmd->get_name();
  m["version"] = LTT_VERSION;
  m["seed"] = common.seed;
  m["config"] = config;
  m["hash"] = hash;
  std::ofstream(dir / "manifest.json") << m.dump(2) << "\n";
  return hash;
}

std::optional<std::string> previous_hash(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return std::nullopt;
  try {
    return json::parse(in).at("hash").get<std::string>();
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

std::vector<double> to_doubles(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : split_list(items)) out.push_back(ltt::parse_double(s));
  return out;
}

std::vector<std::size_t> to_sizes(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(items)) out.push_back(static_cast<std::size_t>(std::stoull(s)));
  return out;
}

struct DecodeOpts {
  std::string checkpoint;
  std::string channel = "awgn";
  std::string solver = "euler";
  std::size_t steps = 10;
  bool debias = false;
  bool fast_fading = false;
  bool no_clamp = false;
  std::size_t messages = 0;
  double signal_power = 0.0;
  double sigma_max = 1.0;
};

void add_decode_options(CLI::App* cmd, DecodeOpts& d) {
  cmd->add_option("--checkpoint", d.checkpoint, "trained field checkpoint")->required()->check(CLI::ExistingFile);
  cmd->add_option("--solver", d.solver, "euler or midpoint")->check(CLI::IsMember({"euler", "midpoint"}));
  cmd->add_flag("--debias", d.debias, "divide each mode by its shrink factor before landing");
  cmd->add_flag("--fast-fading", d.fast_fading, "redraw the channel for every channel use");
  cmd->add_flag("--no-clamp", d.no_clamp, "keep decoded values outside [0, 1]");
  cmd->add_option("--messages", d.messages, "messages per point (0: whole dataset)");
  cmd->add_option("--signal-power", d.signal_power, "mean square per coordinate (0: measured on the data)");
  cmd->add_option("--sigma-max", d.sigma_max, "noise level at t = 0")->check(CLI::PositiveNumber);
}

ltt::PipelineConfig pipeline_config(const DecodeOpts& d, const Common& c) {
  ltt::PipelineConfig pc;
  pc.channel = ltt::parse_channel(d.channel);
  pc.solver = ltt::parse_solver(d.solver);
  pc.steps = d.steps;
  pc.debias = d.debias;
  pc.fast_fading = d.fast_fading;
  pc.clamp = !d.no_clamp;
  pc.seed = c.seed;
  pc.messages = d.messages;
  return pc;
}

double power_of(const DecodeOpts& d, const ltt::Dataset& ds) { return d.signal_power > 0.0 ? d.signal_power : ds.signal_power(); }

// ---------------------------------------------------------------------------

int cmd_train(const CLI::App* cmd, const Common& c, const DataOpts& data, ltt::TrainConfig cfg, bool cosine,
              double sigma_max) {
  const fs::path out(c.out);
  write_manifest(out, cmd, c);
  const ltt::Dataset ds = load_data(data);
  cfg.seed = c.seed;
  cfg.dataset_ref = data.path;
  cfg.schedule = ltt::NoiseSchedule(sigma_max);
  cfg.lr_schedule = cosine ? ltt::LrSchedule::Cosine : ltt::LrSchedule::Constant;
  cfg.checkpoint_path = out / "checkpoint.json";
  std::cout << "training on " << ds.size() << " samples of dim " << ds.dim() << "\n";
  const auto result = ltt::train(cfg, ds, [](const ltt::LossRecord& r) {
    std::cout << "step " << r.step << " epoch " << r.epoch << " loss " << r.loss << "\n";
  });
  ltt::save_checkpoint(result.field, out / "checkpoint.json");
  ltt::write_loss_csv(result.history, out / "loss.csv");
  std::cout << "wrote " << (out / "checkpoint.json").string() << " and " << (out / "loss.csv").string() << "\n";
  return 0;
}

int cmd_decode(const CLI::App* cmd, const Common& c, const DataOpts& data, const DecodeOpts& d, double snr) {
  const fs::path out(c.out);
  write_manifest(out, cmd, c);
  const ltt::Dataset ds = load_data(data);
  const ltt::StudentField field = ltt::load_checkpoint(d.checkpoint);
  const ltt::VelocityField f = ltt::as_velocity_field(field);
  const ltt::NoiseSchedule sched(d.sigma_max);
  const ltt::PipelineConfig pc = pipeline_config(d, c);
  const double power = power_of(d, ds);
  const std::size_t n = pc.messages == 0 ? ds.size() : std::min(pc.messages, ds.size());
  ltt::Dataset received = ds.slice(0, n), decoded = ds.slice(0, n);
  std::vector<ltt::CsvRow> rows;
  for (std::size_t m = 0; m < n; ++m) {
    ltt::Rng rng = ltt::message_stream(c.seed, m);
    const auto r = ltt::run_message(ds.samples[m], snr, power, pc, sched, f, rng);
    received.samples[m] = r.received;
    decoded.samples[m] = r.decoded;
    const auto metric = ltt::evaluate(ds.samples[m], r.decoded, r.received, pc.peak);
    rows.push_back({static_cast<std::int64_t>(m), metric.mse, metric.psnr_db, metric.delta_psnr_db,
                    std::string(r.outage ? "outage" : "ok")});
  }
  ltt::write_dataset_csv(received, out / "received.csv");
  ltt::write_dataset_csv(decoded, out / "decoded.csv");
  ltt::write_csv(out / "metrics.csv", {"message", "mse", "psnr_db", "delta_psnr_db", "status"}, rows);
  std::cout << "decoded " << n << " messages into " << out.string() << "\n";
  return 0;
}

int cmd_calibrate(const CLI::App* cmd, const Common& c, const std::vector<std::string>& snr_items, double rms,
                  double sigma_max) {
  const fs::path out(c.out);
  write_manifest(out, cmd, c);
  const auto rows = ltt::calibration_table(to_doubles(snr_items), rms, ltt::NoiseSchedule(sigma_max));
  std::vector<ltt::CsvRow> csv;
  std::printf("%8s %10s %10s %10s\n", "snr_db", "sigma_ch", "t_star", "t_rev");
  for (const auto& r : rows) {
    csv.push_back({r.snr_db, r.sigma_ch, r.t_star, r.t_star_reversed, std::string(r.outage ? "calibration_error" : "ok")});
    if (r.outage) {
      std::printf("%8.2f %10.6f %10s %10s  calibration error: sigma_ch > sigma_max\n", r.snr_db, r.sigma_ch, "-", "-");
    } else {
      std::printf("%8.2f %10.6f %10.6f %10.6f\n", r.snr_db, r.sigma_ch, r.t_star, r.t_star_reversed);
    }
  }
  ltt::write_csv(out / "calibration.csv", {"snr_db", "sigma_ch", "t_star", "t_star_reversed", "status"}, csv);
  return 0;
}

int cmd_sweep_snr(const CLI::App* cmd, const Common& c, const DataOpts& data, const DecodeOpts& d,
                  const std::vector<std::string>& channel_items, const std::vector<std::string>& snr_items) {
  const fs::path out(c.out);
  const fs::path csv_path = out / "sweep_snr.csv";
  const auto old_hash = previous_hash(out);
  const std::string hash = write_manifest(out, cmd, c);
  const std::vector<std::string> header{"channel", "snr_db", "sigma_ch", "mse", "psnr_db", "delta_psnr_db",
                                        "received_psnr_db", "messages", "outages", "status"};

  // Rows already present for an identical configuration are kept and skipped.
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> done;
  if (old_hash && *old_hash == hash && fs::exists(csv_path)) {
    const ltt::CsvTable t = ltt::read_csv(csv_path);
    for (const auto& row : t.rows) {
      if (row.size() == header.size() && row.back() == "ok") done[{row[0], row[1]}] = row;
    }
  }

  const ltt::Dataset ds = load_data(data);
  const ltt::StudentField field = ltt::load_checkpoint(d.checkpoint);
  const ltt::VelocityField f = ltt::as_velocity_field(field);
  const ltt::NoiseSchedule sched(d.sigma_max);
  const double power = power_of(d, ds);
  std::vector<std::string> channels = split_list(channel_items);
  if (channels.empty()) channels = {d.channel};
  std::vector<ltt::CsvRow> rows;
  std::size_t skipped = 0;
  for (const auto& ch : channels) {
    DecodeOpts dc = d;
    dc.channel = ch;
    const ltt::PipelineConfig pc = pipeline_config(dc, c);
    for (double snr : to_doubles(snr_items)) {
      const std::string snr_text = ltt::format_double(snr);
      if (auto it = done.find({ch, snr_text}); it != done.end()) {
        ltt::CsvRow row;
        for (const auto& cell : it->second) row.emplace_back(cell);
        rows.push_back(row);
        ++skipped;
        continue;
      }
      try {
        const ltt::SnrPoint p = ltt::run_snr_point(ds, snr, power, pc, sched, f);
        rows.push_back({ch, snr, p.sigma_ch, p.mse, p.psnr_db, p.delta_psnr_db, p.received_psnr_db,
                        static_cast<std::int64_t>(p.messages), static_cast<std::int64_t>(p.outages), std::string("ok")});
        std::printf("%-9s %6.2f dB  psnr %8.3f  delta %7.3f\n", ch.c_str(), snr, p.psnr_db, p.delta_psnr_db);
      } catch (const std::exception& e) {
        rows.push_back({ch, snr, 0.0, 0.0, 0.0, 0.0, 0.0, std::int64_t{0}, std::int64_t{0}, std::string("error: ") + e.what()});
        std::fprintf(stderr, "%s %.2f dB failed: %s\n", ch.c_str(), snr, e.what());
      }
      ltt::write_csv(csv_path, header, rows);
    }
  }
  ltt::write_csv(csv_path, header, rows);
  if (skipped > 0) std::cout << "reused " << skipped << " rows from a previous run\n";
  return 0;
}

int cmd_sweep_steps(const CLI::App* cmd, const Common& c, const DataOpts& data, const DecodeOpts& d,
                    const std::vector<std::string>& step_items, double snr) {
  const fs::path out(c.out);
  write_manifest(out, cmd, c);
  const ltt::Dataset ds = load_data(data);
  const ltt::StudentField field = ltt::load_checkpoint(d.checkpoint);
  const ltt::VelocityField f = ltt::as_velocity_field(field);
  const ltt::NoiseSchedule sched(d.sigma_max);
  const ltt::PipelineConfig pc = pipeline_config(d, c);
  std::vector<ltt::CsvRow> rows;
  for (std::size_t n : to_sizes(step_items)) {
    const ltt::StepsPoint p = ltt::run_steps_point(ds, snr, power_of(d, ds), n, pc, sched, f);
    rows.push_back({static_cast<std::int64_t>(n), p.mse, p.psnr_db, p.seconds_per_sample});
    std::printf("N=%4zu  mse %.6g  psnr %.3f  %.3g s/sample\n", n, p.mse, p.psnr_db, p.seconds_per_sample);
  }
  ltt::write_csv(out / "sweep_steps.csv", {"steps", "mse", "psnr_db", "seconds_per_sample"}, rows);
  return 0;
}

int cmd_verify(const CLI::App* cmd, const Common& c, const std::vector<int>& ids, const std::string& data_dir) {
  const fs::path out(c.out);
  write_manifest(out, cmd, c);
  std::vector<ltt::CriterionResult> results;
  results.push_back(ltt::check_corrupted_checkpoint(out / "scratch"));
  ltt::print_result(std::cout, results.back());
  ltt::VerifyOptions options;
  options.data_dir = data_dir;
  options.seed = c.seed;
  options.log = [](const std::string& msg) { std::cerr << "  .. " << msg << "\n"; };
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int id = 1; id <= ltt::kCriterionCount; ++id) todo.push_back(id);
  }
  for (int id : todo) {
    try {
      results.push_back(ltt::run_criterion(id, options));
    } catch (const ltt::DomainError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    ltt::print_result(std::cout, results.back());
    std::cout.flush();
  }
  std::vector<ltt::CsvRow> rows;
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed();
    for (const auto& chk : r.checks) {
      rows.push_back({static_cast<std::int64_t>(r.id), chk.label, chk.measured, chk.relation, chk.bound,
                      std::string(chk.informational ? "info" : (chk.passed ? "pass" : "fail"))});
    }
  }
  ltt::write_csv(out / "verify.csv", {"criterion", "check", "measured", "relation", "bound", "status"}, rows);
  return all ? 0 : 1;
}

int cmd_gen_data(const CLI::App* cmd, const Common& c, const std::string& kind, std::size_t dim, std::size_t n,
                 double mu0, double sigma0, const std::vector<double>& means) {
  const fs::path out(c.out);
  write_manifest(out, cmd, c);
  ltt::Dataset ds;
  if (kind == "gaussian") {
    ds = ltt::synth_gaussian(dim, mu0, sigma0, n, c.seed);
  } else {
    std::vector<ltt::MixtureComponent> comps;
    for (double m : means) comps.push_back({ltt::Vector(dim, m), sigma0, 1.0});
    if (comps.empty()) throw CLI::ValidationError("--means", "gmm needs at least one component mean");
    ds = ltt::synth_gmm(dim, comps, n, c.seed);
  }
  ltt::write_dataset_csv(ds, out / "data.csv");
  std::cout << "wrote " << ds.size() << " samples to " << (out / "data.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"land-then-transport flow-matching decoders"};
  app.set_version_flag("--version", std::string(LTT_VERSION));
  app.set_config("--config", "", "TOML file with option values; flags override it");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Common common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", common.seed, "random seed");
    cmd->add_option("--out", common.out, "output directory");
  };

  DataOpts data;
  DecodeOpts dec;

  auto* train = app.add_subcommand("train", "fit a velocity field by conditional flow matching");
  add_common(train);
  add_data_options(train, data, true);
  ltt::TrainConfig tcfg;
  bool cosine = false;
  double sigma_max = 1.0;
  train->add_option("--epochs", tcfg.epochs);
  train->add_option("--batch-size", tcfg.batch_size)->check(CLI::PositiveNumber);
  train->add_option("--lr", tcfg.learning_rate)->check(CLI::PositiveNumber);
  train->add_flag("--cosine", cosine, "cosine learning-rate decay to zero");
  train->add_option("--hidden", tcfg.hidden_dims, "hidden layer widths")->delimiter(',');
  train->add_option("--time-features", tcfg.time_features);
  train->add_option("--log-every", tcfg.log_every)->check(CLI::PositiveNumber);
  train->add_option("--sigma-max", sigma_max)->check(CLI::PositiveNumber);

  double snr = 10.0;
  auto* decode = app.add_subcommand("decode", "send a dataset through a channel and decode it");
  add_common(decode);
  add_data_options(decode, data, true);
  add_decode_options(decode, dec);
  decode->add_option("--channel", dec.channel)->check(CLI::IsMember({"awgn", "rayleigh", "mimo"}));
  decode->add_option("--snr", snr, "SNR in dB");
  decode->add_option("--steps", dec.steps)->check(CLI::PositiveNumber);

  std::vector<std::string> snr_list{"0,3,5,7,10,12,15"};
  double rms = 0.463;
  auto* calibrate = app.add_subcommand("calibrate", "landing time for each SNR");
  add_common(calibrate);
  calibrate->add_option("--snr", snr_list, "comma-separated SNR values in dB");
  calibrate->add_option("--signal-rms", rms)->check(CLI::PositiveNumber);
  calibrate->add_option("--sigma-max", sigma_max)->check(CLI::PositiveNumber);

  std::vector<std::string> channel_list;
  std::vector<std::string> sweep_snrs{"0,3,5,10,15"};
  auto* sweep_snr = app.add_subcommand("sweep-snr", "PSNR and delta PSNR across SNR and channels");
  add_common(sweep_snr);
  add_data_options(sweep_snr, data, true);
  add_decode_options(sweep_snr, dec);
  sweep_snr->add_option("--channel", channel_list, "awgn, rayleigh, mimo (comma-separated)");
  sweep_snr->add_option("--snr", sweep_snrs, "comma-separated SNR values in dB");
  sweep_snr->add_option("--steps", dec.steps)->check(CLI::PositiveNumber);

  std::vector<std::string> step_list{"2,5,10,20,50"};
  auto* sweep_steps = app.add_subcommand("sweep-steps", "quality and latency against the number of ODE steps");
  add_common(sweep_steps);
  add_data_options(sweep_steps, data, true);
  add_decode_options(sweep_steps, dec);
  sweep_steps->add_option("--steps", step_list, "comma-separated step counts");
  sweep_steps->add_option("--snr", snr, "SNR in dB");

  std::vector<int> criteria;
  std::string data_dir = "tests/fixtures";
  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  add_common(verify);
  verify->add_option("--criteria", criteria, "criterion ids (default: all)")->delimiter(',');
  verify->add_option("--data-dir", data_dir, "directory with digits-images.idx3-ubyte");

  std::string kind = "gaussian";
  std::size_t dim = 1, n = 10000;
  double mu0 = 0.0, sigma0 = 1.0;
  std::vector<double> means;
  auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset as CSV");
  add_common(gen);
  gen->add_option("--kind", kind)->check(CLI::IsMember({"gaussian", "gmm"}));
  gen->add_option("--dim", dim)->check(CLI::PositiveNumber);
  gen->add_option("--n", n)->check(CLI::PositiveNumber);
  gen->add_option("--mu0", mu0);
  gen->add_option("--sigma0", sigma0)->check(CLI::PositiveNumber);
  gen->add_option("--means", means, "component means for gmm")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train) return cmd_train(train, common, data, tcfg, cosine, sigma_max);
    if (*decode) return cmd_decode(decode, common, data, dec, snr);
    if (*calibrate) return cmd_calibrate(calibrate, common, snr_list, rms, sigma_max);
    if (*sweep_snr) return cmd_sweep_snr(sweep_snr, common, data, dec, channel_list, sweep_snrs);
    if (*sweep_steps) return cmd_sweep_steps(sweep_steps, common, data, dec, step_list, snr);
    if (*verify) return cmd_verify(verify, common, criteria, data_dir);
    if (*gen) return cmd_gen_data(gen, common, kind, dim, n, mu0, sigma0, means);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ltt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
