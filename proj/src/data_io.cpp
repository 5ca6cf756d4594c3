#include "ltt/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "ltt/errors.hpp"
#include "ltt/rng.hpp"

namespace ltt {

namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
// Guards the pixel-count product against overflow and absurd headers.
constexpr std::uint64_t kMaxIdxBytes = std::uint64_t{1} << 34;

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) {
    throw ParseError(path.string() + ": truncated header at offset " + std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

void require_image(const Dataset& ds, const char* op) {
  if (ds.shape.size() != 3) {
    throw ShapeError(std::string(op) + ": dataset '" + ds.name + "' is not (channels, height, width)");
  }
}

}  // namespace

std::size_t Dataset::dim() const noexcept {
  std::size_t d = 1;
  for (std::size_t s : shape) d *= s;
  return shape.empty() ? 0 : d;
}

double Dataset::signal_power() const {
  double acc = 0.0;
  std::size_t count = 0;
  for (const Vector& s : samples) {
    for (double v : s) acc += v * v;
    count += s.size();
  }
  return count == 0 ? 0.0 : acc / static_cast<double>(count);
}

double Dataset::signal_rms() const { return std::sqrt(signal_power()); }

Dataset Dataset::slice(std::size_t first, std::size_t count) const {
  if (first + count > samples.size()) throw ShapeError("Dataset::slice: range exceeds dataset size");
  Dataset out;
  out.name = name;
  out.shape = shape;
  out.normalization = normalization;
  out.samples.assign(samples.begin() + first, samples.begin() + first + count);
  if (!labels.empty()) out.labels.assign(labels.begin() + first, labels.begin() + first + count);
  return out;
}

Dataset load_idx(const std::filesystem::path& images,
                 const std::optional<std::filesystem::path>& labels) {
  const auto bytes = read_file(images);
  const std::uint32_t magic = read_be32(bytes, 0, images);
  if (magic != kIdxImagesMagic) {
    std::ostringstream msg;
    msg << images.string() << ": bad magic at offset 0 (0x" << std::hex << magic
        << ", expected 0x00000803)";
    throw ParseError(msg.str());
  }
  const std::uint64_t count = read_be32(bytes, 4, images);
  const std::uint64_t rows = read_be32(bytes, 8, images);
  const std::uint64_t cols = read_be32(bytes, 12, images);
  const std::uint64_t pixels = rows * cols;
  if (rows == 0 || cols == 0 || pixels > kMaxIdxBytes || count > kMaxIdxBytes / pixels) {
    throw ParseError(images.string() + ": dimension overflow in header at offset 4");
  }
  const std::uint64_t expected = count * pixels;
  const std::uint64_t actual = bytes.size() - 16;
  if (actual < expected) {
    throw ParseError(images.string() + ": truncated pixel data at offset 16: expected " +
                     std::to_string(expected) + " bytes, got " + std::to_string(actual));
  }

  Dataset ds;
  ds.name = images.filename().string();
  ds.shape = {1, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
  ds.normalization = {0.0, 1.0 / 255.0};
  ds.samples.resize(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    Vector& s = ds.samples[n];
    s.resize(pixels);
    const unsigned char* src = bytes.data() + 16 + n * pixels;
    for (std::uint64_t p = 0; p < pixels; ++p) s[p] = src[p] / 255.0;
  }

  if (labels) {
    const auto lbytes = read_file(*labels);
    const std::uint32_t lmagic = read_be32(lbytes, 0, *labels);
    if (lmagic != kIdxLabelsMagic) {
      std::ostringstream msg;
      msg << labels->string() << ": bad magic at offset 0 (0x" << std::hex << lmagic
          << ", expected 0x00000801)";
      throw ParseError(msg.str());
    }
    const std::uint64_t lcount = read_be32(lbytes, 4, *labels);
    if (lcount != count) {
      throw ParseError(labels->string() + ": label count " + std::to_string(lcount) +
                       " at offset 4 does not match image count " + std::to_string(count));
    }
    if (lbytes.size() - 8 < lcount) {
      throw ParseError(labels->string() + ": truncated label data at offset 8: expected " +
                       std::to_string(lcount) + " bytes, got " + std::to_string(lbytes.size() - 8));
    }
    ds.labels.assign(lbytes.begin() + 8, lbytes.begin() + 8 + static_cast<std::ptrdiff_t>(lcount));
  }
  return ds;
}

void write_idx(const Dataset& ds, const std::filesystem::path& images,
               const std::optional<std::filesystem::path>& labels) {
  require_image(ds, "write_idx");
  if (ds.shape[0] != 1) throw ShapeError("write_idx: only single-channel images are supported");
  std::ofstream out(images, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + images.string() + " for writing");
  write_be32(out, kIdxImagesMagic);
  write_be32(out, static_cast<std::uint32_t>(ds.size()));
  write_be32(out, static_cast<std::uint32_t>(ds.shape[1]));
  write_be32(out, static_cast<std::uint32_t>(ds.shape[2]));
  for (const Vector& s : ds.samples) {
    for (double v : s) {
      const double q = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(q)));
    }
  }
  if (labels) {
    std::ofstream lout(*labels, std::ios::binary | std::ios::trunc);
    if (!lout) throw std::runtime_error("cannot open " + labels->string() + " for writing");
    write_be32(lout, kIdxLabelsMagic);
    write_be32(lout, static_cast<std::uint32_t>(ds.labels.size()));
    for (int l : ds.labels) lout.put(static_cast<char>(l));
  }
}

Dataset crop_center(const Dataset& ds, std::size_t height, std::size_t width) {
  require_image(ds, "crop_center");
  const std::size_t channels = ds.shape[0], h = ds.shape[1], w = ds.shape[2];
  if (height > h || width > w || height == 0 || width == 0) {
    throw ShapeError("crop_center: crop larger than image");
  }
  const std::size_t top = (h - height) / 2, left = (w - width) / 2;
  Dataset out = ds;
  out.shape = {channels, height, width};
  for (std::size_t n = 0; n < ds.size(); ++n) {
    const Vector& src = ds.samples[n];
    Vector dst(channels * height * width);
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t r = 0; r < height; ++r)
        for (std::size_t q = 0; q < width; ++q)
          dst[(c * height + r) * width + q] = src[(c * h + top + r) * w + left + q];
    out.samples[n] = std::move(dst);
  }
  return out;
}

Dataset downsample(const Dataset& ds, std::size_t factor) {
  require_image(ds, "downsample");
  const std::size_t channels = ds.shape[0], h = ds.shape[1], w = ds.shape[2];
  if (factor == 0 || h % factor != 0 || w % factor != 0) {
    throw ShapeError("downsample: factor " + std::to_string(factor) + " does not divide " +
                     std::to_string(h) + "x" + std::to_string(w));
  }
  const std::size_t oh = h / factor, ow = w / factor;
  const double inv_area = 1.0 / static_cast<double>(factor * factor);
  Dataset out = ds;
  out.shape = {channels, oh, ow};
  for (std::size_t n = 0; n < ds.size(); ++n) {
    const Vector& src = ds.samples[n];
    Vector dst(channels * oh * ow, 0.0);
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t r = 0; r < h; ++r)
        for (std::size_t q = 0; q < w; ++q)
          dst[(c * oh + r / factor) * ow + q / factor] += src[(c * h + r) * w + q];
    for (double& v : dst) v *= inv_area;
    out.samples[n] = std::move(dst);
  }
  return out;
}

Dataset synth_gaussian(std::size_t dim, double mu0, double sigma0, std::size_t n, std::uint64_t seed) {
  if (dim == 0) throw ShapeError("synth_gaussian: dim must be positive");
  Rng rng = Rng(seed).derive("synth_gaussian");
  Dataset ds;
  ds.name = "gaussian";
  ds.shape = {dim};
  ds.samples.assign(n, Vector(dim));
  for (Vector& s : ds.samples)
    for (double& v : s) v = mu0 + sigma0 * rng.normal();
  return ds;
}

Dataset synth_gmm(std::size_t dim, const std::vector<MixtureComponent>& components, std::size_t n,
                  std::uint64_t seed) {
  if (dim == 0 || components.empty()) throw ShapeError("synth_gmm: need dim > 0 and a component");
  double total = 0.0;
  for (const MixtureComponent& c : components) {
    if (c.mean.size() != dim) throw ShapeError("synth_gmm: component mean has wrong dimension");
    total += c.weight;
  }
  Rng rng = Rng(seed).derive("synth_gmm");
  Dataset ds;
  ds.name = "gmm";
  ds.shape = {dim};
  ds.samples.assign(n, Vector(dim));
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pick = rng.uniform() * total;
    std::size_t k = 0;
    while (k + 1 < components.size() && pick >= components[k].weight) pick -= components[k++].weight;
    ds.labels[i] = static_cast<int>(k);
    for (std::size_t j = 0; j < dim; ++j) {
      ds.samples[i][j] = components[k].mean[j] + components[k].stddev * rng.normal();
    }
  }
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::vector<std::string> header;
  for (std::size_t j = 0; j < ds.dim(); ++j) header.push_back("x" + std::to_string(j));
  std::vector<CsvRow> rows;
  rows.reserve(ds.size());
  for (const Vector& s : ds.samples) rows.emplace_back(s.begin(), s.end());
  write_csv(path, header, rows);
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  Dataset ds;
  ds.name = path.filename().string();
  ds.shape = {table.header.size()};
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw ParseError(path.string() + ": row " + std::to_string(r + 2) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(table.header.size()));
    }
    Vector s(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) s[j] = parse_double(row[j]);
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("not a number: '" + text + "'");
  }
  return value;
}

namespace {

std::string escape_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const CsvCell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return escape_cell(*s);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::to_string(std::get<std::int64_t>(cell));
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << escape_cell(header[j]);
  out << '\n';
  for (const CsvRow& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << cell_text(row[j]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return j;
  }
  throw ParseError("csv: no column named '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(cell));
      cell.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw ParseError(path.string() + ": unterminated quoted cell");
  if (any) {
    record.push_back(std::move(cell));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw ParseError(path.string() + ": missing header row");
  CsvTable table;
  table.header = std::move(records.front());
  table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  return table;
}

}  // namespace ltt
