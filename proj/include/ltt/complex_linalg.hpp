#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ltt {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
struct CMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> data;

  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Complex& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(const std::vector<double>& d);
};

CMatrix multiply(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
std::vector<Complex> apply(const CMatrix& a, const std::vector<Complex>& x);
std::vector<Complex> apply_adjoint(const CMatrix& a, const std::vector<Complex>& x);
double frobenius(const CMatrix& a);
CMatrix subtract(const CMatrix& a, const CMatrix& b);

/// Thin SVD H = U diag(s) V^H with U: rows x cols, V: cols x cols, s descending.
struct SvdResult {
  CMatrix u;
  std::vector<double> s;
  CMatrix v;

  CMatrix reconstruct() const;
};

/// Closed form from the eigen-decomposition of H^H H.
SvdResult complex_svd_2x2(const CMatrix& h);

/// Any rows >= cols. 1x1 and 2x2 use closed forms; larger sizes use one-sided Jacobi.
SvdResult complex_svd(const CMatrix& h);

}  // namespace ltt
