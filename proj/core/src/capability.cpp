#include "nmk/capability.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nmk {

namespace {

std::string status_name(sdp::SolveStatus s) {
  switch (s) {
    case sdp::SolveStatus::Optimal:
      return "Optimal";
    case sdp::SolveStatus::Infeasible:
      return "Infeasible";
    case sdp::SolveStatus::MaxIterations:
      return "MaxIterations";
  }
  return "?";
}

void require_optimal(const sdp::SdpSolution& s, const char* what) {
  if (s.status != sdp::SolveStatus::Optimal) {
    std::ostringstream msg;
    msg << what << ": solver returned " << status_name(s.status) << " after " << s.iterations
        << " iterations (gap " << s.gap << ", primal residual " << s.primal_residual
        << ", dual residual " << s.dual_residual << ")";
    throw std::runtime_error(msg.str());
  }
}

// Choi application rho~ = Tr_in[(rho^T (x) I) J] as a vec-superoperator on J.
sdp::LinearMap choi_apply_map(const DensityMatrix& rho_t1) {
  const int d = rho_t1.dim();
  const int D = d * d;
  ComplexMatrix action(d * d, D * D);
  const ComplexMatrix& rho = rho_t1.matrix();
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          action(k + d * l, (i * d + k) + D * (j * d + l)) = rho(j, i);
  return sdp::LinearMap::general(D, d, std::move(action));
}

sdp::SdpProblem witness_problem(const std::vector<const DensityMatrix*>& t1_states,
                                const std::vector<const DensityMatrix*>& t2_states) {
  const int d = t1_states[0]->dim();
  const int D = d * d;
  sdp::SdpProblem p;
  p.variables = {{"lambda_choi", D}};

  ComplexMatrix objective(D, D);
  for (const DensityMatrix* rho : t1_states) {
    const ComplexMatrix c = kron(rho->matrix().transpose(), ComplexMatrix::identity(d));
    objective += c;
  }
  p.objective = {objective};

  sdp::ConstraintBlock cp;
  cp.dim = D;
  cp.terms.emplace_back(0, sdp::LinearMap::identity(D));
  cp.offset = ComplexMatrix::zero(D, D);
  p.constraints.push_back(cp);

  for (size_t s = 0; s < t1_states.size(); ++s) {
    sdp::ConstraintBlock dom;
    dom.dim = d;
    dom.terms.emplace_back(0, choi_apply_map(*t1_states[s]));
    dom.offset = ComplexMatrix::zero(d, d) - t2_states[s]->matrix();
    p.constraints.push_back(dom);
  }
  return p;
}

WitnessResult run_witness(const std::vector<const DensityMatrix*>& t1_states,
                          const std::vector<const DensityMatrix*>& t2_states,
                          const sdp::SolverOptions& opts) {
  const int d = t1_states[0]->dim();
  for (const DensityMatrix* r : t1_states)
    if (r->dim() != d) throw std::invalid_argument("witness: dimension mismatch");
  for (const DensityMatrix* r : t2_states)
    if (r->dim() != d) throw std::invalid_argument("witness: dimension mismatch");

  const sdp::SdpSolution sol = sdp::solve(witness_problem(t1_states, t2_states), opts);
  require_optimal(sol, "witness");

  WitnessResult w;
  w.value = sol.primal_value;
  w.threshold = static_cast<double>(t1_states.size());
  w.violated = w.value > w.threshold + kDetectionTol;
  w.lambda_tilde = sol.values[0];
  w.gap = sol.gap;
  return w;
}

}  // namespace

RobustnessResult robustness(const ProcessRep& lam, const sdp::SolverOptions& opts) {
  if (lam.chi.hermiticity_defect() > 1e-8)
    throw std::invalid_argument("robustness: chi is not Hermitian");
  if (std::abs(lam.chi.trace() - cxd(1.0)) > 1e-8)
    throw std::invalid_argument("robustness: chi must have unit trace (trace-preserving map)");

  const int D = lam.dim * lam.dim;
  sdp::SdpProblem p;
  p.variables = {{"chi_cp", D}};
  p.objective = {ComplexMatrix::identity(D)};

  sdp::ConstraintBlock psd;
  psd.dim = D;
  psd.terms.emplace_back(0, sdp::LinearMap::identity(D));
  psd.offset = ComplexMatrix::zero(D, D);

  sdp::ConstraintBlock dominate;
  dominate.dim = D;
  dominate.terms.emplace_back(0, sdp::LinearMap::identity(D));
  dominate.offset = ComplexMatrix::zero(D, D) - lam.chi;

  sdp::ConstraintBlock unit_trace;
  unit_trace.dim = 1;
  unit_trace.terms.emplace_back(0, sdp::LinearMap::trace(D));
  unit_trace.offset = ComplexMatrix(1, 1, {-1.0});

  p.constraints = {psd, dominate, unit_trace};

  const sdp::SdpSolution sol = sdp::solve(p, opts);
  require_optimal(sol, "robustness");

  RobustnessResult r;
  r.beta = std::max(0.0, sol.primal_value - 1.0);
  r.oracle_beta = negative_eigenvalue_sum(lam.chi);
  r.agreement = std::abs(r.beta - r.oracle_beta);
  r.gap = sol.gap;
  r.iterations = sol.iterations;
  r.chi_cp_witness = ProcessRep::from_chi(sol.values[0] * cxd(1.0 / (1.0 + r.beta)));
  return r;
}

bool identify(const ProcessRep& lam, const sdp::SolverOptions& opts, double detection_tol) {
  return robustness(lam, opts).beta > detection_tol;
}

WitnessResult witness_two(const DensityMatrix& rho_a_t1, const DensityMatrix& rho_b_t1,
                          const DensityMatrix& rho_a_t2, const DensityMatrix& rho_b_t2,
                          const sdp::SolverOptions& opts) {
  return run_witness({&rho_a_t1, &rho_b_t1}, {&rho_a_t2, &rho_b_t2}, opts);
}

WitnessResult witness_one(const DensityMatrix& rho_a_t1, const DensityMatrix& rho_a_t2,
                          const sdp::SolverOptions& opts) {
  return run_witness({&rho_a_t1}, {&rho_a_t2}, opts);
}

std::string to_json_string(const RobustnessResult& r) {
  nlohmann::json j;
  j["beta"] = r.beta;
  j["oracle_beta"] = r.oracle_beta;
  j["gap"] = r.gap;
  return j.dump();
}

std::string to_json_string(const WitnessResult& r) {
  nlohmann::json j;
  j["value"] = r.value;
  j["threshold"] = r.threshold;
  j["violated"] = r.violated;
  return j.dump();
}

}  // namespace nmk
