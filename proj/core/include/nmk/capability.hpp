// Robustness of a non-CP intermediate process (the quantity beta solving
// min tr(chi~) - 1 over CP chi~ dominating the intermediate map) and the
// tomography-free witness kernel W over CP replacement maps.
#pragma once

#include <string>

#include "nmk/matrix.hpp"
#include "nmk/process.hpp"
#include "nmk/sdp.hpp"

namespace nmk {

struct RobustnessResult {
  double beta = 0.0;           // SDP optimum, >= 0
  ProcessRep chi_cp_witness;   // optimal chi~ rescaled by 1/(1+beta)
  double oracle_beta = 0.0;    // negative-eigenvalue sum of chi
  double agreement = 0.0;      // |beta - oracle_beta|
  double gap = 0.0;
  int iterations = 0;
};

struct WitnessResult {
  double value = 0.0;
  double threshold = 0.0;  // 2 for the two-state kernel, 1 for one-state
  bool violated = false;
  ComplexMatrix lambda_tilde;  // Choi matrix of the optimal replacement map
  double gap = 0.0;
};

// detection_tol separates detected non-CP mass from solver noise.
inline constexpr double kDetectionTol = 1e-6;

// beta for a trace-one Hermiticity-preserving intermediate map.
RobustnessResult robustness(const ProcessRep& lam, const sdp::SolverOptions& opts = {});

// true iff robustness(lam).beta exceeds the detection tolerance.
bool identify(const ProcessRep& lam, const sdp::SolverOptions& opts = {},
              double detection_tol = kDetectionTol);

// Witness kernel over two evolved state pairs: the minimum of
// tr(rho~A) + tr(rho~B) over CP maps whose outputs dominate the t2 states.
WitnessResult witness_two(const DensityMatrix& rho_a_t1, const DensityMatrix& rho_b_t1,
                          const DensityMatrix& rho_a_t2, const DensityMatrix& rho_b_t2,
                          const sdp::SolverOptions& opts = {});

// Single-state variant with threshold 1.
WitnessResult witness_one(const DensityMatrix& rho_a_t1, const DensityMatrix& rho_a_t2,
                          const sdp::SolverOptions& opts = {});

std::string to_json_string(const RobustnessResult& r);
std::string to_json_string(const WitnessResult& r);

}  // namespace nmk
