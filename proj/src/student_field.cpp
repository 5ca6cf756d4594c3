#include "ltt/student_field.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "ltt/errors.hpp"
#include "ltt/rng.hpp"

namespace ltt {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double silu(double z) { return z * sigmoid(z); }

double silu_grad(double z) {
  const double s = sigmoid(z);
  return s * (1.0 + z * (1.0 - s));
}

bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// z = W a + b
void affine(const DenseLayer& layer, const double* input, double* output) {
  for (std::size_t o = 0; o < layer.out; ++o) {
    const double* row = layer.weights.data() + o * layer.in;
    double acc = layer.bias[o];
    for (std::size_t i = 0; i < layer.in; ++i) acc += row[i] * input[i];
    output[o] = acc;
  }
}

void adam_update(Vector& param, Vector& grad, Vector& m, Vector& v, const AdamConfig& cfg,
                 double correction1, double correction2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    param[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps);
    grad[i] = 0.0;
  }
}

}  // namespace

void FieldArchitecture::validate() const {
  if (input_dim == 0) throw ShapeError("FieldArchitecture: input_dim must be positive");
  if (hidden_dims.empty()) throw ShapeError("FieldArchitecture: at least one hidden layer required");
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw ShapeError("FieldArchitecture: hidden widths must be positive");
  }
  if (time_features == 0) throw ShapeError("FieldArchitecture: time_features must be positive");
}

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim)
    : in(in_dim),
      out(out_dim),
      weights(in_dim * out_dim, 0.0),
      bias(out_dim, 0.0),
      grad_weights(in_dim * out_dim, 0.0),
      grad_bias(out_dim, 0.0),
      m_weights(in_dim * out_dim, 0.0),
      v_weights(in_dim * out_dim, 0.0),
      m_bias(out_dim, 0.0),
      v_bias(out_dim, 0.0) {}

StudentField::StudentField(FieldArchitecture arch, std::uint64_t seed) : arch_(std::move(arch)) {
  arch_.validate();
  Rng rng = Rng(seed).derive("student_field.init");
  std::size_t fan_in = arch_.feature_dim();
  for (std::size_t width : arch_.hidden_dims) {
    DenseLayer layer(fan_in, width);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (double& w : layer.weights) w = bound * (2.0 * rng.uniform() - 1.0);
    layers_.push_back(std::move(layer));
    fan_in = width;
  }
  layers_.emplace_back(fan_in, arch_.input_dim);
}

StudentField::StudentField(FieldArchitecture arch, std::vector<DenseLayer> layers)
    : arch_(std::move(arch)), layers_(std::move(layers)) {
  arch_.validate();
  if (layers_.size() != arch_.hidden_dims.size() + 1) {
    throw ShapeError("StudentField: layer count does not match architecture");
  }
  std::size_t fan_in = arch_.feature_dim();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const std::size_t width = l + 1 < layers_.size() ? arch_.hidden_dims[l] : arch_.input_dim;
    DenseLayer& layer = layers_[l];
    if (layer.in != fan_in || layer.out != width || layer.weights.size() != fan_in * width ||
        layer.bias.size() != width) {
      throw ShapeError("StudentField: layer " + std::to_string(l) + " has shape " +
                       std::to_string(layer.out) + "x" + std::to_string(layer.in) + ", expected " +
                       std::to_string(width) + "x" + std::to_string(fan_in));
    }
    layer.grad_weights.assign(layer.weights.size(), 0.0);
    layer.grad_bias.assign(layer.bias.size(), 0.0);
    layer.m_weights.assign(layer.weights.size(), 0.0);
    layer.v_weights.assign(layer.weights.size(), 0.0);
    layer.m_bias.assign(layer.bias.size(), 0.0);
    layer.v_bias.assign(layer.bias.size(), 0.0);
    fan_in = width;
  }
}

Vector StudentField::features(ConstSpan x, double t) const {
  if (x.size() != arch_.input_dim) {
    throw ShapeError("StudentField: input has dimension " + std::to_string(x.size()) +
                     ", expected " + std::to_string(arch_.input_dim));
  }
  Vector feat(arch_.feature_dim());
  std::copy(x.begin(), x.end(), feat.begin());
  std::size_t pos = x.size();
  for (std::size_t k = 1; k <= arch_.time_features; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) * t;
    feat[pos++] = std::sin(angle);
    feat[pos++] = std::cos(angle);
  }
  feat[pos] = t;
  return feat;
}

Vector StudentField::forward(ConstSpan x, double t) const {
  Vector act = features(x, t);
  Vector next;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    next.resize(layer.out);
    affine(layer, act.data(), next.data());
    if (l + 1 < layers_.size()) {
      for (double& z : next) z = silu(z);
    }
    act.swap(next);
  }
  if (!all_finite(act)) throw NumericError("StudentField::forward: non-finite output");
  return act;
}

double StudentField::backward(ConstSpan x, double t, ConstSpan target, double scale) {
  if (target.size() != arch_.input_dim) {
    throw ShapeError("StudentField::backward: target has dimension " +
                     std::to_string(target.size()) + ", expected " +
                     std::to_string(arch_.input_dim));
  }
  // activations[l] is the input of layer l; pre[l] its pre-activation output.
  std::vector<Vector> activations;
  std::vector<Vector> pre;
  activations.reserve(layers_.size() + 1);
  pre.reserve(layers_.size());
  activations.push_back(features(x, t));
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    Vector z(layer.out);
    affine(layer, activations.back().data(), z.data());
    Vector a = z;
    if (l + 1 < layers_.size()) {
      for (double& v : a) v = silu(v);
    }
    pre.push_back(std::move(z));
    activations.push_back(std::move(a));
  }

  const Vector& output = activations.back();
  double loss = 0.0;
  Vector delta(output.size());
  for (std::size_t i = 0; i < output.size(); ++i) {
    const double diff = output[i] - target[i];
    loss += diff * diff;
    delta[i] = 2.0 * scale * diff;
  }

  for (std::size_t l = layers_.size(); l-- > 0;) {
    DenseLayer& layer = layers_[l];
    const Vector& input = activations[l];
    if (!all_finite(delta)) {
      throw NumericError("StudentField::backward: non-finite gradient in layer " + std::to_string(l));
    }
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      layer.grad_bias[o] += d;
      double* grad_row = layer.grad_weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) grad_row[i] += d * input[i];
    }
    if (l == 0) break;
    Vector prev(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      const double* row = layer.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) prev[i] += row[i] * d;
    }
    const Vector& z_prev = pre[l - 1];
    for (std::size_t i = 0; i < prev.size(); ++i) prev[i] *= silu_grad(z_prev[i]);
    delta.swap(prev);
  }
  return loss;
}

void StudentField::adam_step(const AdamConfig& cfg) {
  ++adam_t_;
  const double correction1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam_t_));
  const double correction2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam_t_));
  for (DenseLayer& layer : layers_) {
    adam_update(layer.weights, layer.grad_weights, layer.m_weights, layer.v_weights, cfg,
                correction1, correction2);
    adam_update(layer.bias, layer.grad_bias, layer.m_bias, layer.v_bias, cfg, correction1,
                correction2);
  }
}

void StudentField::zero_grad() {
  for (DenseLayer& layer : layers_) {
    std::fill(layer.grad_weights.begin(), layer.grad_weights.end(), 0.0);
    std::fill(layer.grad_bias.begin(), layer.grad_bias.end(), 0.0);
  }
}

std::size_t StudentField::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

std::pair<std::size_t, std::size_t> StudentField::locate(std::size_t index) const {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const std::size_t n = layers_[l].weights.size() + layers_[l].bias.size();
    if (index < n) return {l, index};
    index -= n;
  }
  throw std::out_of_range("StudentField: parameter index out of range");
}

double StudentField::parameter(std::size_t index) const {
  auto [l, i] = locate(index);
  const DenseLayer& layer = layers_[l];
  return i < layer.weights.size() ? layer.weights[i] : layer.bias[i - layer.weights.size()];
}

void StudentField::set_parameter(std::size_t index, double value) {
  auto [l, i] = locate(index);
  DenseLayer& layer = layers_[l];
  if (i < layer.weights.size()) {
    layer.weights[i] = value;
  } else {
    layer.bias[i - layer.weights.size()] = value;
  }
}

double StudentField::gradient(std::size_t index) const {
  auto [l, i] = locate(index);
  const DenseLayer& layer = layers_[l];
  return i < layer.weights.size() ? layer.grad_weights[i] : layer.grad_bias[i - layer.weights.size()];
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(std::string("checkpoint: missing field '") + key + "' in " + where);
  }
  return obj.at(key);
}

std::size_t require_size(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_unsigned()) {
    throw ParseError(std::string("checkpoint: field '") + key + "' in " + where +
                     " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

std::string checkpoint_to_string(const StudentField& field) {
  const FieldArchitecture& arch = field.architecture();
  json doc;
  doc["version"] = kCheckpointVersion;
  doc["architecture"] = {
      {"input_dim", arch.input_dim},
      {"hidden_dims", arch.hidden_dims},
      {"time_features", arch.time_features},
      {"activation", "silu"},
  };
  json layers = json::array();
  for (const DenseLayer& layer : field.layers()) {
    json rows = json::array();
    for (std::size_t o = 0; o < layer.out; ++o) {
      rows.push_back(std::vector<double>(layer.weights.begin() + o * layer.in,
                                         layer.weights.begin() + (o + 1) * layer.in));
    }
    layers.push_back({{"w", std::move(rows)}, {"b", layer.bias}});
  }
  doc["layers"] = std::move(layers);
  return doc.dump();
}

StudentField checkpoint_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint: malformed JSON (") + e.what() + ")");
  }
  const json& version = require(doc, "version", "document");
  if (!version.is_number_integer() || version.get<int>() != kCheckpointVersion) {
    throw VersionError("checkpoint: unsupported version " + version.dump() + " (expected " +
                       std::to_string(kCheckpointVersion) + ")");
  }
  const json& arch_json = require(doc, "architecture", "document");
  FieldArchitecture arch;
  arch.input_dim = require_size(arch_json, "input_dim", "architecture");
  arch.time_features = require_size(arch_json, "time_features", "architecture");
  const json& hidden = require(arch_json, "hidden_dims", "architecture");
  if (!hidden.is_array()) throw ParseError("checkpoint: 'hidden_dims' must be an array");
  arch.hidden_dims.clear();
  for (const json& h : hidden) {
    if (!h.is_number_unsigned()) throw ParseError("checkpoint: 'hidden_dims' entries must be integers");
    arch.hidden_dims.push_back(h.get<std::size_t>());
  }
  const json& activation = require(arch_json, "activation", "architecture");
  if (activation != "silu") throw ParseError("checkpoint: unsupported activation " + activation.dump());
  try {
    arch.validate();
  } catch (const ShapeError& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }

  const json& layers_json = require(doc, "layers", "document");
  if (!layers_json.is_array()) throw ParseError("checkpoint: 'layers' must be an array");
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < layers_json.size(); ++l) {
    const std::string where = "layers[" + std::to_string(l) + "]";
    const json& w = require(layers_json[l], "w", where.c_str());
    const json& b = require(layers_json[l], "b", where.c_str());
    if (!w.is_array() || w.empty() || !w[0].is_array() || !b.is_array()) {
      throw ParseError("checkpoint: " + where + " has malformed weights");
    }
    DenseLayer layer(w[0].size(), w.size());
    if (b.size() != layer.out) throw ParseError("checkpoint: " + where + " bias length mismatch");
    try {
      for (std::size_t o = 0; o < layer.out; ++o) {
        if (w[o].size() != layer.in) throw ParseError("checkpoint: " + where + " ragged weight rows");
        for (std::size_t i = 0; i < layer.in; ++i) layer.weights[o * layer.in + i] = w[o][i].get<double>();
        layer.bias[o] = b[o].get<double>();
      }
    } catch (const json::type_error& e) {
      throw ParseError("checkpoint: " + where + " contains a non-numeric entry");
    }
    layers.push_back(std::move(layer));
  }
  try {
    return StudentField(std::move(arch), std::move(layers));
  } catch (const ShapeError& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const StudentField& field, const std::filesystem::path& path) {
  // Write-then-rename keeps the previous checkpoint intact if we are interrupted.
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << checkpoint_to_string(field) << '\n';
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

StudentField load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("checkpoint: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_string(buffer.str());
}

}  // namespace ltt
