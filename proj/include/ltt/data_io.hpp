#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ltt/types.hpp"

namespace ltt {

/// Affine map applied at ingestion: stored = (raw - offset) * scale.
struct Normalization {
  double offset = 0.0;
  double scale = 1.0;
};

/// A set of equally shaped samples. Image data is (channels, height, width) with
/// values in [0, 1]; synthetic data is (dim,).
struct Dataset {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<Vector> samples;
  std::vector<int> labels;  // empty when unlabeled
  Normalization normalization;

  std::size_t dim() const noexcept;
  std::size_t size() const noexcept { return samples.size(); }

  /// Mean squared value over every coordinate of every sample.
  double signal_power() const;
  double signal_rms() const;

  /// Samples [first, first + count) as a new dataset.
  Dataset slice(std::size_t first, std::size_t count) const;
};

/// Reads an IDX3 image file (magic 0x00000803, unsigned bytes) and optionally an
/// IDX1 label file (magic 0x00000801). Pixels are scaled by 1/255.
Dataset load_idx(const std::filesystem::path& images,
                 const std::optional<std::filesystem::path>& labels = std::nullopt);

/// Writes 8-bit IDX files. Values are expected in [0, 1] and quantized as round(255 v).
void write_idx(const Dataset& ds, const std::filesystem::path& images,
               const std::optional<std::filesystem::path>& labels = std::nullopt);

/// Keeps the centered height x width window of every image.
Dataset crop_center(const Dataset& ds, std::size_t height, std::size_t width);

/// Box-average pooling by `factor` along height and width.
Dataset downsample(const Dataset& ds, std::size_t factor);

/// n i.i.d. draws of N(mu0, sigma0^2 I) in `dim` dimensions.
Dataset synth_gaussian(std::size_t dim, double mu0, double sigma0, std::size_t n, std::uint64_t seed);

struct MixtureComponent {
  Vector mean;
  double stddev = 1.0;
  double weight = 1.0;
};

/// n draws from an isotropic Gaussian mixture; labels record the component.
Dataset synth_gmm(std::size_t dim, const std::vector<MixtureComponent>& components, std::size_t n,
                  std::uint64_t seed);

/// Header x0..x{d-1}, then one sample per line.
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV

using CsvCell = std::variant<std::string, double, std::int64_t>;
using CsvRow = std::vector<CsvCell>;

/// Shortest text for a double that keeps 17 significant digits; "inf"/"-inf"/"nan"
/// for non-finite values.
std::string format_double(double value);

/// Inverse of format_double (accepts "inf").
double parse_double(const std::string& text);

/// RFC 4180 style CSV with LF line endings.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace ltt
