#include "nmk/process.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace nmk {

namespace {

ComplexMatrix unit2(int a, int b) {
  ComplexMatrix e(2, 2);
  e(a, b) = 1.0;
  return e;
}

OperatorBasis make_single_qubit_m() {
  OperatorBasis b;
  b.label = BasisLabel::SingleQubitM;
  b.dim = 2;
  ComplexMatrix M1 = ComplexMatrix::identity(2);
  ComplexMatrix M2(2, 2, {0.0, 1.0, 1.0, 0.0});   // X
  ComplexMatrix M3(2, 2, {0.0, -1.0, 1.0, 0.0});  // -iY
  ComplexMatrix M4(2, 2, {1.0, 0.0, 0.0, -1.0});  // Z
  b.elements = {M1, M2, M3, M4};
  b.chi_scale = 1.0;  // hs-norm sqrt(2) = sqrt(d)
  return b;
}

OperatorBasis make_two_qubit_e() {
  OperatorBasis b;
  b.label = BasisLabel::TwoQubitE;
  b.dim = 4;
  b.elements.reserve(16);
  for (int m = 0; m < 16; ++m) {
    const int s = m & 1, r = (m >> 1) & 1, l = (m >> 2) & 1, h = (m >> 3) & 1;
    b.elements.push_back(kron(unit2(h, r), unit2(l, s)));
  }
  b.chi_scale = 2.0;  // hs-norm 1, rescaled to sqrt(4)
  return b;
}

int dim_from_chi_size(int n) {
  if (n == 4) return 2;
  if (n == 16) return 4;
  throw std::invalid_argument("process: unsupported chi dimension " + std::to_string(n));
}

}  // namespace

const OperatorBasis& OperatorBasis::single_qubit_m() {
  static const OperatorBasis b = make_single_qubit_m();
  return b;
}

const OperatorBasis& OperatorBasis::two_qubit_e() {
  static const OperatorBasis b = make_two_qubit_e();
  return b;
}

const OperatorBasis& OperatorBasis::for_dim(int d) {
  if (d == 2) return single_qubit_m();
  if (d == 4) return two_qubit_e();
  throw std::invalid_argument("process: unsupported dimension " + std::to_string(d));
}

double negative_eigenvalue_sum(const ComplexMatrix& hermitian, double tol) {
  const EigResult e = eig_hermitian(hermitian, 1e-8);
  double s = 0.0;
  for (double w : e.values)
    if (w < -tol) s += -w;
  return s;
}

ComplexMatrix superop_from_chi(int d, const ComplexMatrix& chi) {
  const OperatorBasis& basis = OperatorBasis::for_dim(d);
  const int n = d * d;
  if (chi.rows() != n || chi.cols() != n)
    throw std::invalid_argument("superop_from_chi: chi shape mismatch");
  ComplexMatrix s(n, n);
  const double f = basis.chi_scale * basis.chi_scale;
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      const cxd coeff = chi(m, k) * f;
      if (coeff == cxd(0.0)) continue;
      const ComplexMatrix term = kron(basis.elements[k].conjugate(), basis.elements[m]);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) += coeff * term(i, j);
    }
  }
  return s;
}

ComplexMatrix chi_from_superop(int d, const ComplexMatrix& superop) {
  const OperatorBasis& basis = OperatorBasis::for_dim(d);
  const int n = d * d;
  if (superop.rows() != n || superop.cols() != n)
    throw std::invalid_argument("chi_from_superop: shape mismatch");
  ComplexMatrix chi(n, n);
  // S = sum chi_mn (scale^2) kron(conj(e_n), e_m); the raw elements have
  // squared HS norm d/scale^2, so the extraction divides by d^2/scale^2.
  const double f = basis.chi_scale * basis.chi_scale;
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const ComplexMatrix term = kron(basis.elements[k].conjugate(), basis.elements[m]);
      chi(m, k) = hs_inner(term, superop) * f / (static_cast<double>(d) * d);
    }
  return chi;
}

ComplexMatrix choi_from_superop(int d, const ComplexMatrix& superop) {
  const int n = d * d;
  ComplexMatrix j(n, n);
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          j(i * d + k, jj * d + l) = superop(k + d * l, i + d * jj);
  return j;
}

ComplexMatrix superop_from_choi(int d, const ComplexMatrix& choi) {
  const int n = d * d;
  ComplexMatrix s(n, n);
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          s(k + d * l, i + d * jj) = choi(i * d + k, jj * d + l);
  return s;
}

ComplexMatrix apply_choi(const ComplexMatrix& choi, const ComplexMatrix& rho) {
  const int d = rho.rows();
  if (!rho.square() || choi.rows() != d * d || choi.cols() != d * d)
    throw std::invalid_argument("apply_choi: shape mismatch");
  const ComplexMatrix lifted = kron(rho.transpose(), ComplexMatrix::identity(d)) * choi;
  return partial_trace(lifted, d, d, 0);
}

ProcessRep ProcessRep::identity(int d) {
  return from_superop(d, ComplexMatrix::identity(d * d));
}

ProcessRep ProcessRep::from_chi(const ComplexMatrix& chi) {
  ProcessRep p;
  p.dim = dim_from_chi_size(chi.rows());
  p.basis = OperatorBasis::for_dim(p.dim).label;
  p.chi = chi;
  p.superop = superop_from_chi(p.dim, chi);
  p.choi = choi_from_superop(p.dim, p.superop);
  return p;
}

ProcessRep ProcessRep::from_superop(int d, const ComplexMatrix& superop) {
  ProcessRep p;
  p.dim = d;
  p.basis = OperatorBasis::for_dim(d).label;
  p.superop = superop;
  p.chi = chi_from_superop(d, superop);
  p.choi = choi_from_superop(d, superop);
  return p;
}

ProcessRep ProcessRep::from_choi(int d, const ComplexMatrix& choi) {
  return from_superop(d, superop_from_choi(d, choi));
}

ComplexMatrix apply(const ProcessRep& p, const ComplexMatrix& rho) {
  const int d = p.dim;
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("apply: state dimension mismatch");
  ComplexMatrix out(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      cxd acc = 0.0;
      for (int i = 0; i < d; ++i)
        for (int jj = 0; jj < d; ++jj)
          acc += p.superop(k + d * l, i + d * jj) * rho(i, jj);
      out(k, l) = acc;
    }
  return out;
}

ComplexMatrix apply(const ProcessRep& p, const DensityMatrix& rho) {
  return apply(p, rho.matrix());
}

ProcessRep compose(const ProcessRep& p2, const ProcessRep& p1) {
  if (p2.dim != p1.dim) throw std::invalid_argument("compose: dimension mismatch");
  return ProcessRep::from_superop(p1.dim, p2.superop * p1.superop);
}

ProcessRep intermediate(const ProcessRep& p_t2, const ProcessRep& p_t1, double condition_bound) {
  if (p_t2.dim != p_t1.dim) throw std::invalid_argument("intermediate: dimension mismatch");
  const ComplexMatrix inv = inverse(p_t1.superop, condition_bound);
  return ProcessRep::from_superop(p_t1.dim, p_t2.superop * inv);
}

CpReport cp_report(const ProcessRep& p, double tol) {
  if (p.chi.hermiticity_defect() > 1e-8)
    throw std::invalid_argument("cp_report: chi not Hermitian");
  const EigResult e = eig_hermitian(p.chi, 1e-8);
  CpReport r;
  r.min_eigenvalue = e.values.back();
  r.is_cp = r.min_eigenvalue >= -tol;
  r.negative_sum = 0.0;
  for (double w : e.values)
    if (w < -tol) r.negative_sum += -w;
  return r;
}

std::string to_json_string(const ProcessRep& p) {
  nlohmann::json j;
  j["dim"] = p.dim;
  j["basis_label"] = p.basis == BasisLabel::SingleQubitM ? "SingleQubitM" : "TwoQubitE";
  const int n = p.dim * p.dim;
  std::vector<std::vector<double>> re(n, std::vector<double>(n));
  std::vector<std::vector<double>> im(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      re[i][k] = p.chi(i, k).real();
      im[i][k] = p.chi(i, k).imag();
    }
  j["chi_re"] = re;
  j["chi_im"] = im;
  return j.dump();
}

ProcessRep process_rep_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int d = j.at("dim").get<int>();
  const std::string label = j.at("basis_label").get<std::string>();
  const std::string expected = d == 2 ? "SingleQubitM" : "TwoQubitE";
  if (label != expected)
    throw std::invalid_argument("process_rep_from_json: basis_label does not match dim");
  const auto re = j.at("chi_re").get<std::vector<std::vector<double>>>();
  const auto im = j.at("chi_im").get<std::vector<std::vector<double>>>();
  const int n = d * d;
  if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n)
    throw std::invalid_argument("process_rep_from_json: chi shape mismatch");
  ComplexMatrix chi(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[i].size()) != n || static_cast<int>(im[i].size()) != n)
      throw std::invalid_argument("process_rep_from_json: chi row shape mismatch");
    for (int k = 0; k < n; ++k) chi(i, k) = cxd(re[i][k], im[i][k]);
  }
  return ProcessRep::from_chi(chi);
}

}  // namespace nmk
