#include <doctest.h>

#include <random>

#include "nmk/matrix.hpp"
#include "nmk/process.hpp"
#include "test_util.hpp"

using namespace nmk;

namespace {
const cxd I(0.0, 1.0);
}

TEST_CASE("eig_hermitian on closed-form fixtures") {
  SUBCASE("2x2 symmetric") {
    ComplexMatrix a(2, 2, {2.0, 1.0, 1.0, 2.0});
    const EigResult e = eig_hermitian(a);
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("4x4 identity") {
    const EigResult e = eig_hermitian(ComplexMatrix::identity(4));
    for (double w : e.values) CHECK(w == doctest::Approx(1.0));
  }
  SUBCASE("diagonal readoff with r = 1.5") {
    const double r = 1.5;
    ComplexMatrix a(2, 2, {(1.0 + r) / 2.0, 0.0, 0.0, (1.0 - r) / 2.0});
    const EigResult e = eig_hermitian(a);
    CHECK(e.values[0] == doctest::Approx(1.25));
    CHECK(e.values[1] == doctest::Approx(-0.25));
  }
  SUBCASE("non-Hermitian input rejected") {
    ComplexMatrix a(2, 2, {0.0, 1.0, 2.0, 0.0});
    CHECK_THROWS_AS(eig_hermitian(a), std::invalid_argument);
  }
}

TEST_CASE("eig_hermitian reconstruction on 200 random Hermitian matrices") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 15);  // up to 16
    const ComplexMatrix a = testutil::random_hermitian(d, rng);
    const EigResult e = eig_hermitian(a, 1e-10);
    // A = V diag(w) V^dag
    ComplexMatrix rec(d, d);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          rec(i, j) += e.values[k] * e.vectors(i, k) * std::conj(e.vectors(j, k));
    CHECK(max_abs_diff(rec, a) <= 1e-10 * std::max(1.0, a.max_abs()));
    const ComplexMatrix vtv = e.vectors.adjoint() * e.vectors;
    CHECK(max_abs_diff(vtv, ComplexMatrix::identity(d)) <= 1e-10);
    for (int k = 1; k < d; ++k) CHECK(e.values[k - 1] >= e.values[k]);
  }
}

TEST_CASE("trace_distance fixtures") {
  const DensityMatrix plus = DensityMatrix::pure({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  const DensityMatrix minus = DensityMatrix::pure({1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)});
  const DensityMatrix h = DensityMatrix::pure({1.0, 0.0});
  CHECK(trace_distance(plus, minus) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(plus, plus) == doctest::Approx(0.0));
  CHECK(trace_distance(DensityMatrix::maximally_mixed(2), h) == doctest::Approx(0.5));
  CHECK(trace_distance(plus, h) == doctest::Approx(trace_distance(h, plus)));
}

TEST_CASE("trace_distance triangle inequality and contraction") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 4;
    const DensityMatrix a = testutil::random_density(d, rng);
    const DensityMatrix b = testutil::random_density(d, rng);
    const DensityMatrix c = testutil::random_density(d, rng);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);

    const ProcessRep phi = testutil::random_cptp(d, rng);
    const double before = trace_distance(a, b);
    const double after = trace_distance(apply(phi, a), apply(phi, b));
    CHECK(after <= before + 1e-10);
  }
}

TEST_CASE("kron fixtures") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(max_abs_diff(kron(i2, i2), ComplexMatrix::identity(4)) == 0.0);

  ComplexMatrix x(2, 2, {0.0, 1.0, 1.0, 0.0});
  const ComplexMatrix xi = kron(x, i2);
  ComplexMatrix expected(4, 4);
  expected(0, 2) = 1.0;
  expected(1, 3) = 1.0;
  expected(2, 0) = 1.0;
  expected(3, 1) = 1.0;
  CHECK(max_abs_diff(xi, expected) == 0.0);

  ComplexMatrix hh(2, 2, {1.0, 0.0, 0.0, 0.0});
  ComplexMatrix vv(2, 2, {0.0, 0.0, 0.0, 1.0});
  const ComplexMatrix hv = kron(hh, vv);
  ComplexMatrix expected2(4, 4);
  expected2(1, 1) = 1.0;  // |HV><HV|
  CHECK(max_abs_diff(hv, expected2) == 0.0);
}

TEST_CASE("inverse fixtures and condition guard") {
  ComplexMatrix a(2, 2, {1.0, 0.0, 0.0, 0.5});
  const ComplexMatrix ainv = inverse(a);
  CHECK(ainv(0, 0).real() == doctest::Approx(1.0));
  CHECK(ainv(1, 1).real() == doctest::Approx(2.0));

  const ComplexMatrix id = ComplexMatrix::identity(3);
  CHECK(max_abs_diff(inverse(id), id) <= 1e-14);

  ComplexMatrix bad(2, 2, {1.0, 0.0, 0.0, 1e-15});
  CHECK_THROWS_AS(inverse(bad), NonInvertibleSubprocess);
  try {
    inverse(bad);
  } catch (const NonInvertibleSubprocess& e) {
    CHECK(e.condition_estimate() > 1e12);
  }

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 7);
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = testutil::randn_c(rng);
    const ComplexMatrix ginv = inverse(g);
    CHECK(max_abs_diff(g * ginv, ComplexMatrix::identity(d)) <= 1e-9);
  }
}

TEST_CASE("partial_trace over either factor") {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = testutil::random_hermitian(2, rng);
  const ComplexMatrix b = testutil::random_hermitian(3, rng);
  const ComplexMatrix ab = kron(a, b);
  const ComplexMatrix ta = partial_trace(ab, 2, 3, 0);
  const ComplexMatrix tb = partial_trace(ab, 2, 3, 1);
  CHECK(max_abs_diff(ta, b * a.trace()) <= 1e-12);
  CHECK(max_abs_diff(tb, a * b.trace()) <= 1e-12);
}

TEST_CASE("DensityMatrix validation") {
  ComplexMatrix not_unit(2, 2, {0.7, 0.0, 0.0, 0.7});
  CHECK_THROWS_AS(DensityMatrix{not_unit}, std::invalid_argument);
  ComplexMatrix neg(2, 2, {1.5, 0.0, 0.0, -0.5});
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  CHECK_NOTHROW(DensityMatrix::pure({0.6, cxd(0.0, 0.8)}));
}

TEST_CASE("fidelity sanity") {
  const DensityMatrix h = DensityMatrix::pure({1.0, 0.0});
  const DensityMatrix v = DensityMatrix::pure({0.0, 1.0});
  CHECK(fidelity(h.matrix(), h.matrix()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(h.matrix(), v.matrix()) == doctest::Approx(0.0).epsilon(1e-10));
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(fidelity(h.matrix(), mixed.matrix()) == doctest::Approx(0.5).epsilon(1e-10));
}
