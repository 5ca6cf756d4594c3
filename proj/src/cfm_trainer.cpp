#include "ltt/cfm_trainer.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

#include "ltt/errors.hpp"
#include "ltt/flow_path.hpp"

namespace ltt {

void TrainConfig::validate() const {
  if (batch_size == 0) throw DomainError("TrainConfig: batch_size must be positive");
  if (!(learning_rate > 0.0)) throw DomainError("TrainConfig: learning_rate must be positive");
  if (log_every == 0) throw DomainError("TrainConfig: log_every must be positive");
}

double cfm_batch_loss(StudentField& field, std::span<const ConstSpan> batch,
                      const NoiseSchedule& sched, std::span<Rng> sample_streams) {
  if (batch.empty()) throw ShapeError("cfm_batch_loss: empty batch");
  if (sample_streams.size() != batch.size()) {
    throw ShapeError("cfm_batch_loss: need one random stream per sample");
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    Rng& rng = sample_streams[i];
    const double t = rng.uniform();
    const PathSample sample = sample_path(batch[i], t, sched, rng);
    const Vector target = teacher_velocity(sample, sched);
    const double loss = field.backward(sample.x_t, t, target, scale);
    if (!std::isfinite(loss)) {
      double eps_norm = 0.0, x_norm = 0.0;
      for (double e : sample.eps) eps_norm += e * e;
      for (double x : sample.x_t) x_norm += x * x;
      std::ostringstream msg;
      msg << "cfm_batch_loss: non-finite loss at sample " << i << " (t=" << t
          << ", sigma(t)=" << sched.sigma(t) << ", |eps|=" << std::sqrt(eps_norm)
          << ", |x_t|=" << std::sqrt(x_norm) << ")";
      throw NumericError(msg.str());
    }
    total += loss;
  }
  return total * scale;
}

double cfm_batch_loss(StudentField& field, std::span<const ConstSpan> batch,
                      const NoiseSchedule& sched, Rng& rng) {
  std::vector<Rng> streams;
  streams.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) streams.emplace_back(rng.next_u64());
  return cfm_batch_loss(field, batch, sched, streams);
}

TrainResult train(const TrainConfig& config, const Dataset& dataset, const TrainObserver& observer) {
  config.validate();
  if (dataset.size() == 0) throw ShapeError("train: dataset is empty");

  FieldArchitecture arch;
  arch.input_dim = dataset.dim();
  arch.hidden_dims = config.hidden_dims;
  arch.time_features = config.time_features;
  TrainResult result{StudentField(arch, config.seed), {}};

  const Rng root(config.seed);
  Rng shuffle_rng = root.derive("train.shuffle");
  Rng noise_rng = root.derive("train.noise");
  AdamConfig adam{.learning_rate = config.learning_rate};
  const std::size_t steps_per_epoch = (dataset.size() + config.batch_size - 1) / config.batch_size;
  const double total_steps = static_cast<double>(steps_per_epoch * config.epochs);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<ConstSpan> batch;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the dedicated shuffle stream.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }
    for (std::size_t first = 0; first < order.size(); first += config.batch_size) {
      const std::size_t last = std::min(first + config.batch_size, order.size());
      batch.clear();
      for (std::size_t k = first; k < last; ++k) batch.push_back(dataset.samples[order[k]]);
      const double loss = cfm_batch_loss(result.field, batch, config.schedule, noise_rng);
      if (config.lr_schedule == LrSchedule::Cosine) {
        adam.learning_rate =
            0.5 * config.learning_rate * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / total_steps));
      }
      result.field.adam_step(adam);
      ++step;
      const LossRecord record{step, epoch + 1, loss};
      result.history.push_back(record);
      if (observer && step % config.log_every == 0) observer(record);
    }
    if (config.checkpoint_path) save_checkpoint(result.field, *config.checkpoint_path);
  }
  return result;
}

void write_loss_csv(const std::vector<LossRecord>& history, const std::filesystem::path& path) {
  std::vector<CsvRow> rows;
  rows.reserve(history.size());
  for (const LossRecord& r : history) {
    rows.push_back({static_cast<std::int64_t>(r.step), static_cast<std::int64_t>(r.epoch), r.loss});
  }
  write_csv(path, {"step", "epoch", "loss"}, rows);
}

}  // namespace ltt
