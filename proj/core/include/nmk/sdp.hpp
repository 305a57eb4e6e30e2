// Small-scale dense semidefinite programming: minimize a real linear
// functional of Hermitian matrix variables subject to affine PSD constraints.
//
// The solver is a primal-dual interior-point method with Nesterov-Todd
// scaling on the homogeneous self-dual embedding. Complex Hermitian cones
// are handled through the real-symmetric embedding
//     X = S + iK  ->  [[S, -K], [K, S]],
// which is PSD exactly when X is; its eigenvalues are those of X doubled in
// multiplicity, and objective bookkeeping compensates with a factor 1/2 by
// evaluating the objective on the complex side.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nmk/matrix.hpp"

namespace nmk::sdp {

enum class SolveStatus { Optimal, Infeasible, MaxIterations };

struct SolverOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iterations = 200;
  double infeasibility_ratio = 1e-9;  // declare Infeasible when tau/kappa drops below
  double step_fraction = 0.99;        // fraction of the step to the cone boundary
  bool verbose = false;
  std::ostream* log = nullptr;  // trace stream (iteration, gap, residuals)
};

// A Hermiticity-preserving linear map between Hermitian matrix spaces, given
// by its action on vectorized (column-stacked) matrices.
struct LinearMap {
  enum class Kind { Identity, Trace, General };
  Kind kind = Kind::Identity;
  int in_dim = 0;        // input matrices are in_dim x in_dim
  int out_dim = 0;       // output matrices are out_dim x out_dim
  ComplexMatrix action;  // (out_dim^2 x in_dim^2), used when kind == General

  static LinearMap identity(int d);
  static LinearMap trace(int d);
  static LinearMap general(int in_dim, int out_dim, ComplexMatrix action);

  ComplexMatrix operator()(const ComplexMatrix& x) const;
};

// One PSD constraint block: sum_v maps[v](X_v) + offset >= 0.
struct ConstraintBlock {
  int dim = 0;  // block is dim x dim Hermitian
  std::vector<std::pair<int, LinearMap>> terms;  // (variable index, map)
  ComplexMatrix offset;
};

struct SdpProblem {
  std::vector<std::pair<std::string, int>> variables;  // (name, dimension)
  std::vector<ComplexMatrix> objective;  // C_v per variable; value = sum Re tr(C_v X_v)
  std::vector<ConstraintBlock> constraints;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::MaxIterations;
  double primal_value = 0.0;
  std::vector<ComplexMatrix> values;  // one Hermitian matrix per variable
  double gap = 0.0;                   // |primal - dual| at termination
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  SolverOptions options_used;  // tolerances recorded for reproducibility
};

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {});

}  // namespace nmk::sdp
