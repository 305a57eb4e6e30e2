#include <doctest.h>

#include <random>
#include <sstream>

#include "nmk/process.hpp"
#include "nmk/sdp.hpp"
#include "test_util.hpp"

using namespace nmk;
using sdp::LinearMap;
using sdp::SdpProblem;
using sdp::SdpSolution;
using sdp::SolveStatus;

namespace {

ComplexMatrix dephasing_chi(cxd k) {
  ComplexMatrix chi(4, 4);
  chi(0, 0) = (2.0 + k + std::conj(k)) / 4.0;
  chi(0, 3) = (k - std::conj(k)) / 4.0;
  chi(3, 0) = (std::conj(k) - k) / 4.0;
  chi(3, 3) = (2.0 - k - std::conj(k)) / 4.0;
  return chi;
}

// min tr X s.t. X >= 0, X >= lower  (optimum: trace of positive part
// when lower commutes; used with diagonal fixtures)
SdpProblem dominate_problem(const ComplexMatrix& lower) {
  const int d = lower.rows();
  SdpProblem p;
  p.variables = {{"x", d}};
  p.objective = {ComplexMatrix::identity(d)};
  sdp::ConstraintBlock psd;
  psd.dim = d;
  psd.terms.emplace_back(0, LinearMap::identity(d));
  psd.offset = ComplexMatrix::zero(d, d);
  sdp::ConstraintBlock dom;
  dom.dim = d;
  dom.terms.emplace_back(0, LinearMap::identity(d));
  dom.offset = ComplexMatrix::zero(d, d) - lower;
  p.constraints = {psd, dom};
  return p;
}

// The robustness program: min tr X s.t. X >= 0, X - lam >= 0, tr X >= 1.
SdpProblem robustness_problem(const ComplexMatrix& lam) {
  SdpProblem p = dominate_problem(lam);
  sdp::ConstraintBlock tr;
  tr.dim = 1;
  tr.terms.emplace_back(0, LinearMap::trace(lam.rows()));
  tr.offset = ComplexMatrix(1, 1, {-1.0});
  p.constraints.push_back(tr);
  return p;
}

}  // namespace

TEST_CASE("commuting diagonal fixture: min tr X, X >= 0, X >= diag(-1,2)") {
  ComplexMatrix lower(2, 2, {-1.0, 0.0, 0.0, 2.0});
  const SdpSolution s = sdp::solve(dominate_problem(lower));
  REQUIRE(s.status == SolveStatus::Optimal);
  // independent oracle for commuting constraints: sum_i max(0, lower_ii)
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) expected += std::max(0.0, lower(i, i).real());
  CHECK(s.primal_value == doctest::Approx(expected).epsilon(1e-7));
  // the reported optimizer is feasible and not below the true optimum
  CHECK(s.primal_value >= expected - 1e-7);
  const EigResult e = eig_hermitian(s.values[0] - lower, 1e-6);
  CHECK(e.values.back() >= -1e-6);
}

TEST_CASE("PSD dominance fixture: min tr X, X >= A with A PSD") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 3;
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = testutil::randn_c(rng);
    const ComplexMatrix a = g * g.adjoint();
    const SdpSolution s = sdp::solve(dominate_problem(a));
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.primal_value == doctest::Approx(a.trace().real()).epsilon(1e-6));
  }
}

TEST_CASE("robustness fixture: ratio-1.5 dephasing intermediate has value 1.25") {
  const ComplexMatrix lam = dephasing_chi(1.5);
  const SdpSolution s = sdp::solve(robustness_problem(lam));
  REQUIRE(s.status == SolveStatus::Optimal);
  // oracle: 1 + sum of |negative eigenvalues| of lam
  const double oracle = 1.0 + negative_eigenvalue_sum(lam);
  CHECK(oracle == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(s.primal_value == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(s.gap <= 1e-6);
}

TEST_CASE("embedding self-test: complex-Hermitian data against the eigenvalue oracle") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 4;
    const ProcessRep lam = testutil::random_tp_intermediate(d, rng);
    const SdpSolution s = sdp::solve(robustness_problem(lam.chi));
    REQUIRE(s.status == SolveStatus::Optimal);
    const double oracle = 1.0 + negative_eigenvalue_sum(lam.chi);
    CHECK(s.primal_value == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("objective scaling by c > 0 scales the optimum by c") {
  const ComplexMatrix lam = dephasing_chi(cxd(1.1, 0.9));
  SdpProblem p = robustness_problem(lam);
  const SdpSolution s1 = sdp::solve(p);
  p.objective[0] *= cxd(3.0);
  const SdpSolution s3 = sdp::solve(p);
  REQUIRE(s1.status == SolveStatus::Optimal);
  REQUIRE(s3.status == SolveStatus::Optimal);
  CHECK(s3.primal_value == doctest::Approx(3.0 * s1.primal_value).epsilon(1e-9));
}

TEST_CASE("infeasible problem is certified") {
  // x >= 1 and -x >= 0 cannot both hold
  SdpProblem p;
  p.variables = {{"x", 1}};
  p.objective = {ComplexMatrix(1, 1, {1.0})};
  sdp::ConstraintBlock lo;
  lo.dim = 1;
  lo.terms.emplace_back(0, LinearMap::identity(1));
  lo.offset = ComplexMatrix(1, 1, {-1.0});
  sdp::ConstraintBlock hi;
  hi.dim = 1;
  ComplexMatrix neg(1, 1, {-1.0});
  hi.terms.emplace_back(0, LinearMap::general(1, 1, neg));
  hi.offset = ComplexMatrix(1, 1, {0.0});
  p.constraints = {lo, hi};
  const SdpSolution s = sdp::solve(p);
  CHECK(s.status == SolveStatus::Infeasible);
}

TEST_CASE("deterministic given fixed options") {
  const ComplexMatrix lam = dephasing_chi(cxd(0.4, 1.3));
  const SdpSolution a = sdp::solve(robustness_problem(lam));
  const SdpSolution b = sdp::solve(robustness_problem(lam));
  CHECK(a.primal_value == b.primal_value);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("verbose trace log writes to the provided stream") {
  std::ostringstream log;
  sdp::SolverOptions opts;
  opts.verbose = true;
  opts.log = &log;
  const SdpSolution s = sdp::solve(dominate_problem(ComplexMatrix::identity(2)), opts);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(log.str().find("iter") != std::string::npos);
  CHECK(log.str().find("gap") != std::string::npos);
}

TEST_CASE("solution records the options used") {
  sdp::SolverOptions opts;
  opts.gap_tol = 1e-9;
  const SdpSolution s = sdp::solve(dominate_problem(ComplexMatrix::identity(2)), opts);
  CHECK(s.options_used.gap_tol == 1e-9);
  CHECK(s.options_used.max_iterations == 200);
}
