#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfcorr/errors.hpp"

namespace tfcorr {

using Cplx = std::complex<double>;

inline constexpr std::size_t kMaxDim = 8;

// Dense row-major complex matrix, at most 8x8.
class CMatrix {
 public:
  CMatrix() = default;

  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    check_shape(rows, cols);
  }

  CMatrix(std::size_t rows, std::size_t cols, std::vector<Cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_shape(rows, cols);
    if (data_.size() != rows * cols) {
      throw DimensionError("CMatrix: data length " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("CMatrix: non-finite entry");
      }
    }
  }

  // Row-wise literal, e.g. CMatrix{{1, 0}, {0, 1}}.
  CMatrix(std::initializer_list<std::initializer_list<Cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    check_shape(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("CMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diag(std::initializer_list<double> d) {
    return diag(std::vector<double>(d));
  }

  static CMatrix diag(const std::vector<double>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  // |v><v| for a column vector v.
  static CMatrix outer(const std::vector<Cplx>& v) {
    CMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<Cplx>& data() const { return data_; }

  Cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Cplx trace() const {
    Cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  CMatrix& operator+=(const CMatrix& o) {
    require_same_shape(o, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    require_same_shape(o, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CMatrix& operator*=(Cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Cplx s) { return a *= s; }
  friend CMatrix operator*(Cplx s, CMatrix a) { return a *= s; }

 private:
  static void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0 || rows > kMaxDim || cols > kMaxDim) {
      throw DimensionError("CMatrix: shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                           " outside 1..8");
    }
  }
  void require_same_shape(const CMatrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError(std::string(what) + ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Cplx> data_;
};

inline CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Cplx aik = a(i, k);
      if (aik == Cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return mat_mul(a, b); }

inline CMatrix dagger(const CMatrix& a) {
  CMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

inline CMatrix conj(const CMatrix& a) {
  CMatrix t(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(i, j) = std::conj(a(i, j));
  return t;
}

// Kronecker product; a supplies the slow (leading) index.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t r = a.rows() * b.rows();
  const std::size_t c = a.cols() * b.cols();
  if (r > kMaxDim || c > kMaxDim) {
    throw DimensionError("kron: result " + std::to_string(r) + "x" + std::to_string(c) + " exceeds 8x8");
  }
  CMatrix k(r, c);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

// Largest entrywise modulus.
inline double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return max_abs(a - b); }

inline double hermiticity_defect(const CMatrix& a) {
  if (!a.is_square()) return INFINITY;
  return max_abs_diff(a, dagger(a));
}

// Reduced 2x2 matrix of a 4x4 two-qubit operator; keep is 1 (slow factor) or 2.
inline CMatrix partial_trace(const CMatrix& rho, int keep) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("partial_trace: expected 4x4 input");
  if (keep != 1 && keep != 2) throw DomainError("partial_trace: qubit index must be 1 or 2");
  CMatrix r(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (keep == 1) {
          r(i, j) += rho(2 * i + k, 2 * j + k);
        } else {
          r(i, j) += rho(2 * k + i, 2 * k + j);
        }
      }
  return r;
}

struct EigDecomp {
  std::vector<double> eigenvalues;  // descending
  CMatrix eigenvectors;             // column k pairs with eigenvalues[k]
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdClamp = 1e-10;

// Cyclic complex Jacobi. Each rotation removes the phase of the pivot and
// then applies a real Givens rotation in the (p, q) plane.
inline EigDecomp herm_eig(const CMatrix& h) {
  if (!h.is_square()) throw DimensionError("herm_eig: matrix not square");
  if (hermiticity_defect(h) > kHermitianTol) throw DomainError("herm_eig: matrix is not Hermitian");

  const std::size_t n = h.rows();
  CMatrix a = h;
  // Symmetrize so round-off in the input cannot leak into the iteration.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }
  }
  CMatrix v = CMatrix::identity(n);

  double fro = 0.0;
  for (const auto& z : a.data()) fro += std::norm(z);
  const double tol = 1e-13 * std::max(1.0, std::sqrt(fro));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const Cplx phase = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] in the (p, q) plane.
        const Cplx jpp = c;
        const Cplx jpq = s;
        const Cplx jqp = -s * std::conj(phase);
        const Cplx jqq = c * std::conj(phase);

        // A <- A J (columns p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Cplx akp = a(k, p);
          const Cplx akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        // A <- J^dagger A (rows p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Cplx apk = a(p, k);
          const Cplx aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Cplx vkp = v(k, p);
          const Cplx vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  EigDecomp out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

inline CMatrix psd_sqrt(const CMatrix& h) {
  const EigDecomp e = herm_eig(h);
  const std::size_t n = h.rows();
  CMatrix s(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double lam = e.eigenvalues[k];
    if (lam < -kPsdClamp) throw DomainError("psd_sqrt: eigenvalue " + std::to_string(lam) + " is negative");
    lam = std::sqrt(std::max(lam, 0.0));
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        s(i, j) += lam * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
  }
  return s;
}

namespace pauli {
inline CMatrix x() { return CMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline CMatrix y() { return CMatrix{{0.0, Cplx(0, -1)}, {Cplx(0, 1), 0.0}}; }
inline CMatrix z() { return CMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace tfcorr
