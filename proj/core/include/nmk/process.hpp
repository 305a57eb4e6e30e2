// Representations of quantum operations: chi matrix over a fixed operator
// basis, Choi matrix, and superoperator, with conversions, composition,
// intermediate-map extraction and CP testing.
//
// Conventions:
//  - vec() stacks columns; vec(A X B) = (B^T kron A) vec(X).
//  - Choi is input-first and unnormalized: J = sum_ij |i><j| (x) Phi(|i><j|),
//    so tr J = d * tr(chi) for trace-preserving maps.
//  - chi is expressed over basis operators rescaled to Hilbert-Schmidt norm
//    sqrt(d). The single-qubit basis (I, X, -iY, Z) already has norm sqrt(2);
//    the two-qubit matrix units |h><r| (x) |l><s| carry scale 2. Under this
//    convention a trace-preserving map has tr(chi) = 1 in either basis and
//    the literal dephasing process matrices of the models are reproduced.
#pragma once

#include <string>
#include <vector>

#include "nmk/matrix.hpp"

namespace nmk {

enum class BasisLabel { SingleQubitM, TwoQubitE };

class OperatorBasis {
 public:
  BasisLabel label;
  int dim;                              // system dimension d
  std::vector<ComplexMatrix> elements;  // the d^2 basis operators, paper order
  double chi_scale;                     // sqrt(d) / hs-norm of each element

  // (M1, M2, M3, M4) = (I, X, -iY, Z).
  static const OperatorBasis& single_qubit_m();
  // 16 matrix units |h><r| (x) |l><s| with m = s + 2r + 4l + 8h + 1.
  static const OperatorBasis& two_qubit_e();
  static const OperatorBasis& for_dim(int d);
};

struct CpReport {
  bool is_cp;
  double min_eigenvalue;
  double negative_sum;  // sum |lambda| over eigenvalues < -tol
};

// Sum of |lambda| over eigenvalues of a Hermitian matrix below -tol.
double negative_eigenvalue_sum(const ComplexMatrix& hermitian, double tol = 0.0);

class ProcessRep {
 public:
  int dim;  // system dimension d (2 or 4)
  BasisLabel basis;
  ComplexMatrix chi;      // d^2 x d^2
  ComplexMatrix choi;     // d^2 x d^2
  ComplexMatrix superop;  // d^2 x d^2 acting on vec(rho)

  static ProcessRep identity(int d);
  static ProcessRep from_chi(const ComplexMatrix& chi);
  static ProcessRep from_superop(int d, const ComplexMatrix& superop);
  static ProcessRep from_choi(int d, const ComplexMatrix& choi);
};

ComplexMatrix apply(const ProcessRep& p, const ComplexMatrix& rho);
ComplexMatrix apply(const ProcessRep& p, const DensityMatrix& rho);

// Map composition: result acts as p2 after p1 (superoperator product).
ProcessRep compose(const ProcessRep& p2, const ProcessRep& p1);

// The linear map L with superop(p_t2) = superop(L) * superop(p_t1).
// Throws NonInvertibleSubprocess when p_t1 is not invertible.
ProcessRep intermediate(const ProcessRep& p_t2, const ProcessRep& p_t1,
                        double condition_bound = 1e12);

CpReport cp_report(const ProcessRep& p, double tol = 1e-9);

// Standalone conversions between the three representations (basis chosen by
// dimension: 2 -> SingleQubitM, 4 -> TwoQubitE).
ComplexMatrix superop_from_chi(int d, const ComplexMatrix& chi);
ComplexMatrix chi_from_superop(int d, const ComplexMatrix& superop);
ComplexMatrix choi_from_superop(int d, const ComplexMatrix& superop);
ComplexMatrix superop_from_choi(int d, const ComplexMatrix& choi);

// Apply a map given by its (input-first, unnormalized) Choi matrix:
// Phi(rho) = Tr_in[(rho^T (x) I) J].
ComplexMatrix apply_choi(const ComplexMatrix& choi, const ComplexMatrix& rho);

// JSON document {dim, basis_label, chi_re[][], chi_im[][]}; loading
// recomputes choi and superop from chi.
std::string to_json_string(const ProcessRep& p);
ProcessRep process_rep_from_json(const std::string& text);

}  // namespace nmk
