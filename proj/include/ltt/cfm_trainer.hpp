#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltt/data_io.hpp"
#include "ltt/rng.hpp"
#include "ltt/schedule.hpp"
#include "ltt/student_field.hpp"

namespace ltt {

enum class LrSchedule { Constant, Cosine };

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  /// Cosine anneals from learning_rate to 0 over all steps.
  LrSchedule lr_schedule = LrSchedule::Constant;
  std::uint64_t seed = 0;
  NoiseSchedule schedule{1.0};
  std::string dataset_ref;
  std::size_t log_every = 100;
  std::vector<std::size_t> hidden_dims{64, 64};
  std::size_t time_features = 4;
  /// Written at the end of every epoch when set.
  std::optional<std::filesystem::path> checkpoint_path;

  void validate() const;
};

struct LossRecord {
  std::size_t step = 0;
  std::size_t epoch = 0;
  double loss = 0.0;
};

struct TrainResult {
  StudentField field;
  std::vector<LossRecord> history;
};

/// Mini-batch CFM loss (1/B) sum_i |v(x_t^i, t^i) - sigma_dot(t^i) eps^i|^2 with
/// t^i ~ U[0,1] and eps^i ~ N(0, I) drawn from the i-th stream. Accumulates the
/// gradient of the returned loss into the field.
double cfm_batch_loss(StudentField& field, std::span<const ConstSpan> batch,
                      const NoiseSchedule& sched, std::span<Rng> sample_streams);

/// Same, deriving one substream per sample from `rng`.
double cfm_batch_loss(StudentField& field, std::span<const ConstSpan> batch,
                      const NoiseSchedule& sched, Rng& rng);

using TrainObserver = std::function<void(const LossRecord&)>;

/// Runs epochs x ceil(|D| / B) steps of cfm_batch_loss followed by an Adam update.
/// The observer is called every log_every steps.
TrainResult train(const TrainConfig& config, const Dataset& dataset,
                  const TrainObserver& observer = {});

/// Loss history as CSV with columns step, epoch, loss.
void write_loss_csv(const std::vector<LossRecord>& history, const std::filesystem::path& path);

}  // namespace ltt
