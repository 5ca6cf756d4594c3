#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ltt/types.hpp"

namespace ltt {

enum class Activation { SiLU };

/// Shape of the student MLP. The network input is x concatenated with the time
/// features [sin(2 pi k t), cos(2 pi k t)] for k = 1..time_features and raw t.
struct FieldArchitecture {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden_dims{64, 64};
  std::size_t time_features = 4;
  Activation activation = Activation::SiLU;

  std::size_t feature_dim() const noexcept { return input_dim + 2 * time_features + 1; }
  void validate() const;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Dense layer with row-major weights (out x in), its gradient accumulators and
/// Adam moment buffers.
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  Vector weights;
  Vector bias;
  Vector grad_weights;
  Vector grad_bias;
  Vector m_weights, v_weights;
  Vector m_bias, v_bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim);
};

/// Trainable velocity field v_theta(x, t).
///
/// forward() is const and allocation-local, so frozen parameters can be shared
/// by concurrent readers. backward() and adam_step() mutate the gradient and
/// moment buffers and need exclusive access.
class StudentField {
 public:
  /// Hidden layers get fan-in scaled uniform weights from the seed; the output
  /// layer starts at zero, so an untrained field is the zero field.
  StudentField(FieldArchitecture arch, std::uint64_t seed);
  StudentField(FieldArchitecture arch, std::vector<DenseLayer> layers);

  const FieldArchitecture& architecture() const noexcept { return arch_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }

  Vector forward(ConstSpan x, double t) const;

  /// Accumulates scale * d|v(x,t) - target|^2 / d(theta) into the gradient buffers and
  /// returns the unscaled sample loss |v(x,t) - target|^2.
  double backward(ConstSpan x, double t, ConstSpan target, double scale = 1.0);

  /// Bias-corrected Adam update; clears the gradient buffers afterwards.
  void adam_step(const AdamConfig& cfg);
  void zero_grad();
  std::uint64_t adam_steps_taken() const noexcept { return adam_t_; }

  /// Flat view over all parameters: layer by layer, weights then bias.
  std::size_t parameter_count() const;
  double parameter(std::size_t index) const;
  void set_parameter(std::size_t index, double value);
  double gradient(std::size_t index) const;

 private:
  Vector features(ConstSpan x, double t) const;
  std::pair<std::size_t, std::size_t> locate(std::size_t index) const;

  FieldArchitecture arch_;
  std::vector<DenseLayer> layers_;
  std::uint64_t adam_t_ = 0;
};

/// Checkpoint file: JSON {version: 1, architecture: {...}, layers: [{w: [[..]], b: [..]}]}.
/// Doubles are written in shortest round-trip form, so reload is bit-exact.
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const StudentField& field, const std::filesystem::path& path);
StudentField load_checkpoint(const std::filesystem::path& path);

std::string checkpoint_to_string(const StudentField& field);
StudentField checkpoint_from_string(const std::string& text);

}  // namespace ltt
