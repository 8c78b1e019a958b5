#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "tfcorr/cmatrix.hpp"

namespace tfcorr {

inline constexpr double kStateTol = 1e-10;
inline constexpr double kDegenerateProb = 1e-12;

// Validated two-qubit state: 4x4, Hermitian, unit trace, PSD (all to 1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix mat) : mat_(std::move(mat)) {
    if (mat_.rows() != 4 || mat_.cols() != 4) throw DimensionError("DensityMatrix: expected 4x4");
    if (hermiticity_defect(mat_) > kStateTol) throw DomainError("DensityMatrix: not Hermitian");
    const Cplx tr = mat_.trace();
    if (std::abs(tr - 1.0) > kStateTol) {
      throw DomainError("DensityMatrix: trace " + std::to_string(tr.real()) + " is not 1");
    }
    const double min_eig = herm_eig(mat_).eigenvalues.back();
    if (min_eig < -kStateTol) {
      throw DomainError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
  }

  // Scales a positive, Hermitian operator to unit trace. Returns the trace it removed.
  static std::pair<DensityMatrix, double> normalized(const CMatrix& unnormalized) {
    const double tr = unnormalized.trace().real();
    if (!(tr > kDegenerateProb)) {
      throw DegenerateNormalization("normalization trace " + std::to_string(tr) + " vanishes");
    }
    return {DensityMatrix(unnormalized * Cplx(1.0 / tr)), tr};
  }

  const CMatrix& mat() const { return mat_; }
  Cplx operator()(std::size_t r, std::size_t c) const { return mat_(r, c); }

 private:
  CMatrix mat_;
};

// State produced by a post-selected branch and the probability of that branch.
struct SelectiveOutcome {
  DensityMatrix state;
  double probability;
};

// Lifts a single-qubit operator to the two-qubit space; qubit 1 is the slow factor.
inline CMatrix lift(const CMatrix& op, int qubit) {
  if (op.rows() != 2 || op.cols() != 2) throw DimensionError("lift: expected 2x2 operator");
  if (qubit == 1) return kron(op, CMatrix::identity(2));
  if (qubit == 2) return kron(CMatrix::identity(2), op);
  throw DomainError("lift: qubit index must be 1 or 2");
}

}  // namespace tfcorr
