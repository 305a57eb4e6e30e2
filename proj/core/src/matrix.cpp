#include "nmk/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nmk {

ComplexMatrix::ComplexMatrix(int rows, int cols, std::initializer_list<cxd> entries)
    : ComplexMatrix(rows, cols) {
  if (entries.size() != a_.size())
    throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
  std::copy(entries.begin(), entries.end(), a_.begin());
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
  return m;
}

cxd ComplexMatrix::trace() const {
  if (!square()) throw std::invalid_argument("trace: matrix not square");
  cxd t = 0.0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cxd& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::one_norm() const {
  double best = 0.0;
  for (int j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double ComplexMatrix::hermiticity_defect() const {
  if (!square()) throw std::invalid_argument("hermiticity_defect: matrix not square");
  double m = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cxd s) {
  for (cxd& v : a_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const cxd aik = a(i, k);
      if (aik == cxd(0.0)) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

cxd hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  cxd s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += std::conj(a(i, j)) * b(i, j);
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cxd aij = a(i, j);
      if (aij == cxd(0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int d_first, int d_second, int which) {
  if (m.rows() != d_first * d_second || !m.square())
    throw std::invalid_argument("partial_trace: shape mismatch");
  if (which == 0) {
    ComplexMatrix out(d_second, d_second);
    for (int k = 0; k < d_second; ++k)
      for (int l = 0; l < d_second; ++l)
        for (int i = 0; i < d_first; ++i)
          out(k, l) += m(i * d_second + k, i * d_second + l);
    return out;
  }
  if (which == 1) {
    ComplexMatrix out(d_first, d_first);
    for (int i = 0; i < d_first; ++i)
      for (int j = 0; j < d_first; ++j)
        for (int k = 0; k < d_second; ++k)
          out(i, j) += m(i * d_second + k, j * d_second + k);
    return out;
  }
  throw std::invalid_argument("partial_trace: which must be 0 or 1");
}

namespace {

// One cyclic Jacobi sweep: annihilate every off-diagonal pair (p,q) in turn.
// A complex rotation is a phase alignment of column q followed by a real
// plane rotation; the accumulated V stays unitary by construction.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
  const cxd apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cxd phase = apq / mag;  // a(p,q) = mag * phase
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = 0.5 * std::atan2(2.0 * mag, app - aqq);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const int n = a.rows();

  // Column transform: R has R(p,p)=c, R(p,q)=-s, R(q,p)=conj(phase)*s,
  // R(q,q)=conj(phase)*c. Apply A <- R† A R, V <- V R.
  const cxd rqp = std::conj(phase) * s;
  const cxd rqq = std::conj(phase) * c;
  for (int i = 0; i < n; ++i) {
    const cxd aip = a(i, p), aiq = a(i, q);
    a(i, p) = aip * c + aiq * rqp;
    a(i, q) = -aip * s + aiq * rqq;
  }
  for (int j = 0; j < n; ++j) {
    const cxd apj = a(p, j), aqj = a(q, j);
    a(p, j) = c * apj + std::conj(rqp) * aqj;
    a(q, j) = -s * apj + std::conj(rqq) * aqj;
  }
  for (int i = 0; i < n; ++i) {
    const cxd vip = v(i, p), viq = v(i, q);
    v(i, p) = vip * c + viq * rqp;
    v(i, q) = -vip * s + viq * rqq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigResult eig_hermitian(const ComplexMatrix& a, double herm_tol) {
  if (!a.square()) throw std::invalid_argument("eig_hermitian: matrix not square");
  if (a.hermiticity_defect() > herm_tol)
    throw std::invalid_argument("eig_hermitian: matrix not Hermitian within tolerance");

  const int n = a.rows();
  ComplexMatrix w = a;
  // Symmetrize once so roundoff asymmetry cannot leak into the iteration.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const cxd m = 0.5 * (w(i, j) + std::conj(w(j, i)));
      w(i, j) = m;
      w(j, i) = std::conj(m);
    }
    w(i, i) = w(i, i).real();
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(w.max_abs(), 1e-300);
  const double stop = 1e-15 * scale * n;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(w) <= stop) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(w(p, q)) > stop / (n * n)) jacobi_rotate(w, v, p, q);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = w(i, i).real();
  std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] > diag[y]; });

  EigResult r;
  r.values.resize(n);
  r.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    r.values[k] = diag[order[k]];
    for (int i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
  }
  return r;
}

ComplexMatrix inverse(const ComplexMatrix& a, double condition_bound) {
  if (!a.square()) throw std::invalid_argument("inverse: matrix not square");
  const int n = a.rows();
  ComplexMatrix m = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  const double norm_a = a.one_norm();

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(m(col, col));
    for (int i = col + 1; i < n; ++i) {
      const double v = std::abs(m(i, col));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-300 * std::max(1.0, norm_a))
      throw NonInvertibleSubprocess("inverse: singular matrix",
                                    std::numeric_limits<double>::infinity());
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const cxd d = m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const cxd f = m(i, col);
      if (f == cxd(0.0)) continue;
      for (int j = 0; j < n; ++j) {
        m(i, j) -= f * m(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }

  const double cond = norm_a * inv.one_norm();
  if (cond > condition_bound)
    throw NonInvertibleSubprocess(
        "inverse: condition estimate " + std::to_string(cond) + " exceeds bound", cond);
  return inv;
}

double trace_norm_hermitian(const ComplexMatrix& a) {
  const EigResult e = eig_hermitian(a, 1e-9);
  double s = 0.0;
  for (double w : e.values) s += std::abs(w);
  return s;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const ToleranceProfile& tol) : m_(std::move(m)) {
  if (!m_.square() ) throw std::invalid_argument("DensityMatrix: matrix not square");
  if (m_.hermiticity_defect() > tol.hermiticity * 100)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(m_.trace() - cxd(1.0)) > tol.density_trace)
    throw std::invalid_argument("DensityMatrix: trace not 1");
  const EigResult e = eig_hermitian(m_, tol.hermiticity * 100);
  if (e.values.back() < -tol.density_min_eig)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(e.values.back()));
}

DensityMatrix DensityMatrix::pure(const std::vector<cxd>& ket) {
  const int d = static_cast<int>(ket.size());
  double n2 = 0.0;
  for (const cxd& v : ket) n2 += std::norm(v);
  if (n2 <= 0.0) throw std::invalid_argument("pure: zero vector");
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = ket[i] * std::conj(ket[j]) / n2;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  ComplexMatrix m = ComplexMatrix::identity(d);
  m *= cxd(1.0 / d);
  return DensityMatrix(std::move(m));
}

double trace_distance(const ComplexMatrix& r1, const ComplexMatrix& r2) {
  if (r1.rows() != r2.rows() || r1.cols() != r2.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  return 0.5 * trace_norm_hermitian(r1 - r2);
}

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  return trace_distance(r1.matrix(), r2.matrix());
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const EigResult er = eig_hermitian(rho, 1e-9);
  const int d = rho.rows();
  ComplexMatrix sq(d, d);
  for (int k = 0; k < d; ++k) {
    const double w = std::max(er.values[k], 0.0);
    const double sw = std::sqrt(w);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        sq(i, j) += sw * er.vectors(i, k) * std::conj(er.vectors(j, k));
  }
  const ComplexMatrix inner = sq * sigma * sq;
  const EigResult ei = eig_hermitian(inner, 1e-8);
  double t = 0.0;
  for (double w : ei.values) t += std::sqrt(std::max(w, 0.0));
  return t * t;
}

}  // namespace nmk
