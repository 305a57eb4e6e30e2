// Dense complex linear algebra for the small matrices (<= 16x16) that carry
// states, process matrices and superoperators: Hermitian eigendecomposition,
// inversion with condition guard, trace norm/distance, tensor products.
#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmk {

using cxd = std::complex<double>;

// Central record of the numerical tolerances used by public operations.
// Hermiticity is an absolute entrywise bound; the rest are residual or
// spectral thresholds.
struct ToleranceProfile {
  double hermiticity = 1e-12;
  double eig_residual = 1e-10;
  double inverse_residual = 1e-9;
  double condition_bound = 1e12;
  double density_trace = 1e-10;
  double density_min_eig = 1e-10;
  double cp_min_eig = 1e-9;
  double detection = 1e-6;
};

// Thrown when a subprocess matrix cannot be inverted (singular or above the
// configured condition bound). Carries the 1-norm condition estimate.
class NonInvertibleSubprocess : public std::runtime_error {
 public:
  NonInvertibleSubprocess(const std::string& what, double cond)
      : std::runtime_error(what), cond_(cond) {}
  double condition_estimate() const noexcept { return cond_; }

 private:
  double cond_;
};

class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("ComplexMatrix: nonpositive shape");
  }
  ComplexMatrix(int rows, int cols, std::initializer_list<cxd> entries);

  static ComplexMatrix identity(int n);
  static ComplexMatrix zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cxd& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const cxd& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<cxd>& entries() const noexcept { return a_; }
  std::vector<cxd>& entries() noexcept { return a_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  cxd trace() const;
  double max_abs() const;                  // entrywise max modulus
  double one_norm() const;                 // max column absolute sum
  double hermiticity_defect() const;       // max |A - A†| entrywise
  bool is_hermitian(double tol = 1e-12) const { return square() && hermiticity_defect() <= tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cxd s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cxd s) { return a *= s; }
  friend ComplexMatrix operator*(cxd s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  int rows_, cols_;
  std::vector<cxd> a_;
};

// max |A - B| entrywise; shapes must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Hilbert-Schmidt inner product tr(A† B).
cxd hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out one tensor factor of a (d_first*d_second) square matrix.
// which = 0 traces the first factor, which = 1 the second.
ComplexMatrix partial_trace(const ComplexMatrix& m, int d_first, int d_second, int which);

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // unitary, columns are eigenvectors
};

// Cyclic Jacobi eigendecomposition of a Hermitian matrix: A = V diag(w) V†.
EigResult eig_hermitian(const ComplexMatrix& a, double herm_tol = 1e-12);

// Gauss-Jordan inverse with partial pivoting. Throws NonInvertibleSubprocess
// when singular or when the 1-norm condition estimate exceeds the bound.
ComplexMatrix inverse(const ComplexMatrix& a, double condition_bound = 1e12);

// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm_hermitian(const ComplexMatrix& a);

class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const ToleranceProfile& tol = {});

  // |psi><psi| from an amplitude vector (normalized internally).
  static DensityMatrix pure(const std::vector<cxd>& ket);
  static DensityMatrix maximally_mixed(int d);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

double trace_distance(const ComplexMatrix& r1, const ComplexMatrix& r2);
double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

}  // namespace nmk
