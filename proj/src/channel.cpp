#include "ltt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ltt/errors.hpp"

namespace ltt {

ComplexVec pack_complex(ConstSpan x) {
  ComplexVec z((x.size() + 1) / 2);
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double im = 2 * k + 1 < x.size() ? x[2 * k + 1] : 0.0;
    z[k] = Complex(x[2 * k], im);
  }
  return z;
}

Vector unpack_complex(const ComplexVec& z, std::size_t original_len) {
  if (original_len > 2 * z.size() || original_len + 1 < 2 * z.size()) {
    throw ShapeError("unpack_complex: " + std::to_string(z.size()) + " complex entries cannot hold " +
                     std::to_string(original_len) + " reals");
  }
  Vector x(original_len);
  for (std::size_t i = 0; i < original_len; ++i) x[i] = i % 2 == 0 ? z[i / 2].real() : z[i / 2].imag();
  return x;
}

Vector awgn(ConstSpan x, double sigma_ch, Rng& rng) {
  if (!(sigma_ch >= 0.0)) throw DomainError("awgn: sigma_ch must be nonnegative");
  Vector y(x.begin(), x.end());
  for (double& v : y) v += sigma_ch * rng.normal();
  return y;
}

Complex draw_cn(Rng& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return Complex(re, im) * std::sqrt(0.5);
}

namespace {

struct ModeStats {
  double alpha;
  double sigma_eff;
  double weight;
};

ModeStats mode_stats(double s, const ChannelParams& p) {
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  const double den = s * s + p.lambda;
  ModeStats m{s * s / den, p.sigma_ch * s / den, s / den};
  if (p.debias) {
    m.weight /= m.alpha;
    m.sigma_eff /= m.alpha;
  }
  return m;
}

std::string describe(const CMatrix& h, const SvdResult& svd) {
  std::ostringstream os;
  os.precision(6);
  os << "H=[";
  for (std::size_t i = 0; i < h.data.size(); ++i) os << (i ? " " : "") << h.data[i];
  os << "] singular values [";
  for (std::size_t i = 0; i < svd.s.size(); ++i) os << (i ? " " : "") << svd.s[i];
  os << "]";
  return os.str();
}

CMatrix draw_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix h(rows, cols);
  for (auto& z : h.data) z = draw_cn(rng);
  return h;
}

ChannelReport equalize_uses(const ComplexVec& x, std::vector<ChannelRealization> realizations,
                            std::vector<std::size_t> use_map, std::size_t n_tx, const ChannelParams& p,
                            const NoiseSchedule& sched, Rng& rng, std::size_t original_len) {
  if (!(p.sigma_ch >= 0.0)) throw DomainError("channel: sigma_ch must be nonnegative");
  if (!(p.lambda >= 0.0)) throw DomainError("channel: lambda must be nonnegative");
  ChannelReport r;
  r.streams = n_tx;
  r.original_len = original_len == 0 ? 2 * x.size() : original_len;
  r.sigma_ch = p.sigma_ch;
  r.lambda = p.lambda;
  r.sigma_max = sched.sigma_max();
  r.debiased = p.debias;
  r.realizations = std::move(realizations);
  r.realization_of_use = std::move(use_map);
  const std::size_t uses = r.uses();
  r.equalized.assign(uses * n_tx, Complex(0.0));
  r.alpha.assign(uses * n_tx, 0.0);
  r.sigma_eff.assign(uses * n_tx, 0.0);
  r.t_star.assign(uses * n_tx, 1.0);

  for (std::size_t u = 0; u < uses; ++u) {
    const ChannelRealization& real = r.realizations[r.realization_of_use[u]];
    const CMatrix& h = real.h;
    std::vector<Complex> xu(n_tx, Complex(0.0));
    for (std::size_t i = 0; i < n_tx; ++i) {
      if (u * n_tx + i < x.size()) xu[i] = x[u * n_tx + i];
    }
    std::vector<Complex> y = ltt::apply(h, xu);
    for (auto& v : y) v += p.sigma_ch * draw_cn(rng);
    const std::vector<Complex> y_rot = apply_adjoint(real.svd.u, y);
    for (std::size_t i = 0; i < n_tx; ++i) {
      const ModeStats m = mode_stats(real.svd.s[i], p);
      const std::size_t k = u * n_tx + i;
      r.equalized[k] = m.weight * y_rot[i];
      r.alpha[k] = m.alpha;
      r.sigma_eff[k] = m.sigma_eff;
      if (real.svd.s[i] > 0.0) {
        if (m.sigma_eff > sched.sigma_max()) {
          throw CalibrationError("channel: effective noise " + std::to_string(m.sigma_eff) + " of mode " +
                                     std::to_string(i) + " exceeds sigma_max; " + describe(h, real.svd),
                                 m.sigma_eff, sched.sigma_max());
        }
        r.t_star[k] = sched.sigma_inv(m.sigma_eff);
      }
    }
  }
  return r;
}

std::size_t use_count(std::size_t symbols, std::size_t n_tx) { return (symbols + n_tx - 1) / n_tx; }

}  // namespace

ChannelReport mimo_equalize(const ComplexVec& x, const CMatrix& h, const ChannelParams& params,
                            const NoiseSchedule& sched, Rng& rng, std::size_t original_len) {
  if (h.rows < h.cols) throw ShapeError("mimo_equalize: needs at least as many receive as transmit antennas");
  std::vector<ChannelRealization> reals{{h, complex_svd(h)}};
  std::vector<std::size_t> use_map(use_count(x.size(), h.cols), 0);
  return equalize_uses(x, std::move(reals), std::move(use_map), h.cols, params, sched, rng, original_len);
}

ChannelReport mimo_equalize(const ComplexVec& x, const std::vector<CMatrix>& per_use,
                            const ChannelParams& params, const NoiseSchedule& sched, Rng& rng,
                            std::size_t original_len) {
  if (per_use.empty()) throw ShapeError("mimo_equalize: no channel matrices");
  const std::size_t n_tx = per_use.front().cols;
  if (per_use.size() != use_count(x.size(), n_tx)) {
    throw ShapeError("mimo_equalize: expected one matrix per channel use (" +
                     std::to_string(use_count(x.size(), n_tx)) + "), got " + std::to_string(per_use.size()));
  }
  std::vector<ChannelRealization> reals;
  std::vector<std::size_t> use_map;
  for (const CMatrix& h : per_use) {
    if (h.cols != n_tx || h.rows != per_use.front().rows || h.rows < h.cols) {
      throw ShapeError("mimo_equalize: channel matrices must share one shape with rows >= cols");
    }
    use_map.push_back(reals.size());
    reals.push_back({h, complex_svd(h)});
  }
  return equalize_uses(x, std::move(reals), std::move(use_map), n_tx, params, sched, rng, original_len);
}

ChannelReport mimo_transmit(const ComplexVec& x, std::size_t n_rx, std::size_t n_tx,
                            const ChannelParams& params, const NoiseSchedule& sched, Rng& rng,
                            std::size_t original_len) {
  if (n_tx == 0 || n_rx < n_tx) throw ShapeError("mimo_transmit: needs 0 < n_tx <= n_rx");
  Rng fading(rng.next_u64());
  Rng noise(rng.next_u64());
  if (!params.fast_fading) return mimo_equalize(x, draw_matrix(n_rx, n_tx, fading), params, sched, noise, original_len);
  std::vector<CMatrix> hs;
  for (std::size_t u = 0; u < use_count(x.size(), n_tx); ++u) hs.push_back(draw_matrix(n_rx, n_tx, fading));
  return mimo_equalize(x, hs, params, sched, noise, original_len);
}

ChannelReport rayleigh_equalize(const ComplexVec& x, const ChannelParams& params,
                                const NoiseSchedule& sched, Rng& rng, std::size_t original_len) {
  return mimo_transmit(x, 1, 1, params, sched, rng, original_len);
}

double report_consistency_error(const ChannelReport& report, const NoiseSchedule& sched) {
  ChannelParams p;
  p.sigma_ch = report.sigma_ch;
  p.lambda = report.lambda;
  p.debias = report.debiased;
  double worst = 0.0;
  for (std::size_t u = 0; u < report.uses(); ++u) {
    const ChannelRealization& real = report.realizations.at(report.realization_of_use[u]);
    const SvdResult fresh = complex_svd(real.h);
    for (std::size_t i = 0; i < report.streams; ++i) {
      const std::size_t k = u * report.streams + i;
      const ModeStats m = mode_stats(fresh.s[i], p);
      const double t = fresh.s[i] > 0.0 ? sched.sigma_inv(m.sigma_eff) : 1.0;
      worst = std::max({worst, std::abs(m.alpha - report.alpha[k]), std::abs(m.sigma_eff - report.sigma_eff[k]),
                        std::abs(t - report.t_star[k])});
    }
  }
  return worst;
}

namespace {

// SVD-domain entries -> original coordinates (x = V x~ per use).
ComplexVec rotate_back(const ChannelReport& r, const ComplexVec& modes) {
  ComplexVec out(modes.size());
  std::vector<Complex> block(r.streams);
  for (std::size_t u = 0; u < r.uses(); ++u) {
    const CMatrix& v = r.realizations[r.realization_of_use[u]].svd.v;
    std::copy_n(modes.begin() + static_cast<std::ptrdiff_t>(u * r.streams), r.streams, block.begin());
    const std::vector<Complex> rotated = ltt::apply(v, block);
    std::copy(rotated.begin(), rotated.end(), out.begin() + static_cast<std::ptrdiff_t>(u * r.streams));
  }
  return out;
}

ComplexVec rotate_forward(const ChannelReport& r, const ComplexVec& values) {
  ComplexVec out(values.size());
  std::vector<Complex> block(r.streams);
  for (std::size_t u = 0; u < r.uses(); ++u) {
    const CMatrix& v = r.realizations[r.realization_of_use[u]].svd.v;
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(u * r.streams), r.streams, block.begin());
    const std::vector<Complex> rotated = apply_adjoint(v, block);
    std::copy(rotated.begin(), rotated.end(), out.begin() + static_cast<std::ptrdiff_t>(u * r.streams));
  }
  return out;
}

Vector to_real(const ComplexVec& z) {
  Vector x(2 * z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

ComplexVec to_complex(ConstSpan x) {
  ComplexVec z(x.size() / 2);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = Complex(x[2 * k], x[2 * k + 1]);
  return z;
}

ComplexVec head(const ComplexVec& z, std::size_t n) { return ComplexVec(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n)); }

}  // namespace

Vector landing_point(const ChannelReport& report) {
  const ComplexVec x = rotate_back(report, report.equalized);
  return unpack_complex(head(x, (report.original_len + 1) / 2), report.original_len);
}

Vector mimo_decode(const ChannelReport& report, const VelocityField& field, Solver solver,
                   std::size_t steps, bool clamp_output) {
  const std::size_t entries = report.equalized.size();
  const std::size_t payload = (report.original_len + 1) / 2;
  if (payload > entries) throw ShapeError("mimo_decode: report holds fewer entries than original_len needs");

  const VelocityField mode_field = [&](ConstSpan state, double t) {
    const ComplexVec x = rotate_back(report, to_complex(state));
    const Vector v = field(unpack_complex(head(x, payload), report.original_len), t);
    ComplexVec vz = pack_complex(v);
    vz.resize(entries, Complex(0.0));
    return to_real(rotate_forward(report, vz));
  };

  Vector landing(2 * entries);
  for (std::size_t k = 0; k < entries; ++k) landing[2 * k] = landing[2 * k + 1] = report.t_star[k];
  const Vector state = integrate_staged(mode_field, to_real(report.equalized), landing, solver, steps);
  const ComplexVec x = rotate_back(report, to_complex(state));
  Vector out = unpack_complex(head(x, payload), report.original_len);
  if (clamp_output) {
    for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

}  // namespace ltt
