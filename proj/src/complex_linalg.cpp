#include "ltt/complex_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltt/errors.hpp"

namespace ltt {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(const std::vector<double>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols != b.rows) throw ShapeError("multiply: inner dimensions differ");
  CMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k)
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

std::vector<Complex> apply(const CMatrix& a, const std::vector<Complex>& x) {
  if (x.size() != a.cols) throw ShapeError("apply: vector length differs from column count");
  std::vector<Complex> y(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) y[i] += a(i, j) * x[j];
  return y;
}

std::vector<Complex> apply_adjoint(const CMatrix& a, const std::vector<Complex>& x) {
  if (x.size() != a.rows) throw ShapeError("apply_adjoint: vector length differs from row count");
  std::vector<Complex> y(a.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) y[j] += std::conj(a(i, j)) * x[i];
  return y;
}

double frobenius(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.data) s += std::norm(z);
  return std::sqrt(s);
}

CMatrix subtract(const CMatrix& a, const CMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("subtract: shapes differ");
  CMatrix c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
  return c;
}

CMatrix SvdResult::reconstruct() const {
  CMatrix us = u;
  for (std::size_t i = 0; i < us.rows; ++i)
    for (std::size_t j = 0; j < us.cols; ++j) us(i, j) *= s[j];
  return multiply(us, adjoint(v));
}

namespace {

void check_finite(const CMatrix& h) {
  for (const auto& z : h.data) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericError("svd: non-finite matrix entry");
  }
}

// Unit vector orthogonal to the unit 2-vector (a, b).
std::pair<Complex, Complex> complement(Complex a, Complex b) { return {-std::conj(b), std::conj(a)}; }

SvdResult svd_1x1(const CMatrix& h) {
  SvdResult r{CMatrix(1, 1), {std::abs(h(0, 0))}, CMatrix::identity(1)};
  r.u(0, 0) = r.s[0] > 0.0 ? h(0, 0) / r.s[0] : Complex(1.0, 0.0);
  return r;
}

// Left vectors from H v_j / s_j, completing an orthonormal basis where s_j is zero.
void fill_left_vectors(const CMatrix& h, SvdResult& r);

SvdResult svd_jacobi(const CMatrix& h) {
  const std::size_t m = h.rows, n = h.cols;
  CMatrix a = h;
  CMatrix v = CMatrix::identity(n);
  const double eps = 1e-15;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(a(i, p));
          beta += std::norm(a(i, q));
          gamma += std::conj(a(i, p)) * a(i, q);
        }
        const double g = std::abs(gamma);
        if (g <= eps * std::sqrt(alpha * beta) || g == 0.0) continue;
        rotated = true;
        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const Complex ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * std::conj(phase) * aq;
          a(i, q) = s * phase * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * std::conj(phase) * vq;
          v(i, q) = s * phase * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, j));
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });
  SvdResult r{CMatrix(m, n), std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    r.s[k] = norms[order[k]];
    for (std::size_t i = 0; i < n; ++i) r.v(i, k) = v(i, order[k]);
  }
  fill_left_vectors(h, r);
  return r;
}

void fill_left_vectors(const CMatrix& h, SvdResult& r) {
  const std::size_t m = h.rows, n = h.cols;
  const double tol = 1e-13 * (r.s.empty() ? 0.0 : r.s[0]);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Complex> col(m);
    if (r.s[k] > tol && r.s[k] > 0.0) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) col[i] += h(i, j) * r.v(j, k);
      for (auto& z : col) z /= r.s[k];
    } else {
      r.s[k] = r.s[k] > tol ? r.s[k] : 0.0;
      // Gram-Schmidt against earlier columns, starting from canonical vectors.
      for (std::size_t e = 0; e < m; ++e) {
        std::fill(col.begin(), col.end(), Complex(0.0));
        col[e] = 1.0;
        for (std::size_t prev = 0; prev < k; ++prev) {
          Complex dot = 0.0;
          for (std::size_t i = 0; i < m; ++i) dot += std::conj(r.u(i, prev)) * col[i];
          for (std::size_t i = 0; i < m; ++i) col[i] -= dot * r.u(i, prev);
        }
        double nrm = 0.0;
        for (const auto& z : col) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm > 1e-6) {
          for (auto& z : col) z /= nrm;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) r.u(i, k) = col[i];
  }
}

}  // namespace

SvdResult complex_svd_2x2(const CMatrix& h) {
  if (h.rows != 2 || h.cols != 2) throw ShapeError("complex_svd_2x2: expects a 2x2 matrix");
  check_finite(h);
  // G = H^H H = [[a, b], [conj(b), d]]
  double a = 0.0, d = 0.0;
  Complex b = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    a += std::norm(h(i, 0));
    d += std::norm(h(i, 1));
    b += std::conj(h(i, 0)) * h(i, 1);
  }
  SvdResult r{CMatrix(2, 2), std::vector<double>(2), CMatrix(2, 2)};
  Complex v1a, v1b;
  if (b == Complex(0.0)) {
    if (a >= d) {
      v1a = 1.0, v1b = 0.0;
    } else {
      v1a = 0.0, v1b = 1.0;
    }
  } else {
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(b));
    const double l1 = mean + rad;
    // Two candidate eigenvectors for l1; keep the better-conditioned one.
    const Complex c1a = b, c1b = l1 - a;
    const Complex c2a = l1 - d, c2b = std::conj(b);
    const double n1 = std::hypot(std::abs(c1a), std::abs(c1b));
    const double n2 = std::hypot(std::abs(c2a), std::abs(c2b));
    if (n1 >= n2) {
      v1a = c1a / n1, v1b = c1b / n1;
    } else {
      v1a = c2a / n2, v1b = c2b / n2;
    }
  }
  const auto [v2a, v2b] = complement(v1a, v1b);
  r.v(0, 0) = v1a, r.v(1, 0) = v1b;
  r.v(0, 1) = v2a, r.v(1, 1) = v2b;

  const Complex hv1_0 = h(0, 0) * v1a + h(0, 1) * v1b;
  const Complex hv1_1 = h(1, 0) * v1a + h(1, 1) * v1b;
  const Complex hv2_0 = h(0, 0) * v2a + h(0, 1) * v2b;
  const Complex hv2_1 = h(1, 0) * v2a + h(1, 1) * v2b;
  const double s1 = std::hypot(std::abs(hv1_0), std::abs(hv1_1));
  r.s[0] = s1;
  Complex u1a, u1b;
  if (s1 > 0.0) {
    u1a = hv1_0 / s1, u1b = hv1_1 / s1;
  } else {
    u1a = 1.0, u1b = 0.0;
  }
  auto [u2a, u2b] = complement(u1a, u1b);
  // u2^H H v2 should be real and nonnegative; absorb its phase into u2.
  const Complex c = std::conj(u2a) * hv2_0 + std::conj(u2b) * hv2_1;
  const double s2 = std::abs(c);
  if (s2 > 0.0) {
    const Complex ph = c / s2;
    u2a *= ph, u2b *= ph;
  }
  r.s[1] = s2;
  r.u(0, 0) = u1a, r.u(1, 0) = u1b;
  r.u(0, 1) = u2a, r.u(1, 1) = u2b;
  return r;
}

SvdResult complex_svd(const CMatrix& h) {
  if (h.rows == 0 || h.cols == 0) throw ShapeError("complex_svd: empty matrix");
  if (h.rows < h.cols) throw ShapeError("complex_svd: expects rows >= cols");
  check_finite(h);
  if (h.rows == 1 && h.cols == 1) return svd_1x1(h);
  if (h.rows == 2 && h.cols == 2) return complex_svd_2x2(h);
  return svd_jacobi(h);
}

}  // namespace ltt
