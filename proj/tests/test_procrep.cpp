#include <doctest.h>

#include <random>

#include "nmk/matrix.hpp"
#include "nmk/process.hpp"
#include "test_util.hpp"

using namespace nmk;

namespace {

// Single-qubit dephasing process matrix in the (I, X, -iY, Z) basis:
// 1/4 [[2+k+k*, 0, 0, k-k*], [0,0,0,0], [0,0,0,0], [k*-k, 0, 0, 2-k-k*]].
ComplexMatrix dephasing_chi(cxd k) {
  ComplexMatrix chi(4, 4);
  chi(0, 0) = (2.0 + k + std::conj(k)) / 4.0;
  chi(0, 3) = (k - std::conj(k)) / 4.0;
  chi(3, 0) = (std::conj(k) - k) / 4.0;
  chi(3, 3) = (2.0 - k - std::conj(k)) / 4.0;
  return chi;
}

DensityMatrix plus_state() {
  return DensityMatrix::pure({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
}

}  // namespace

TEST_CASE("operator bases match the fixed conventions") {
  const OperatorBasis& m = OperatorBasis::single_qubit_m();
  CHECK(m.elements.size() == 4);
  CHECK(max_abs_diff(m.elements[0], ComplexMatrix::identity(2)) == 0.0);
  CHECK(m.elements[1](0, 1) == cxd(1.0));
  CHECK(m.elements[2](0, 1) == cxd(-1.0));  // -iY
  CHECK(m.elements[2](1, 0) == cxd(1.0));
  CHECK(m.elements[3](1, 1) == cxd(-1.0));

  const OperatorBasis& e = OperatorBasis::two_qubit_e();
  CHECK(e.elements.size() == 16);
  // m = s + 2r + 4l + 8h + 1: the element is |h><r| (x) |l><s|
  for (int idx = 0; idx < 16; ++idx) {
    const int s = idx & 1, r = (idx >> 1) & 1, l = (idx >> 2) & 1, h = (idx >> 3) & 1;
    const ComplexMatrix& em = e.elements[idx];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const bool hit = a == 2 * h + l && b == 2 * r + s;
        CHECK(em(a, b) == cxd(hit ? 1.0 : 0.0));
      }
  }
  // Hilbert-Schmidt orthogonality within each basis
  for (size_t a = 0; a < m.elements.size(); ++a)
    for (size_t b = 0; b < m.elements.size(); ++b) {
      const cxd ip = hs_inner(m.elements[a], m.elements[b]);
      CHECK(std::abs(ip - (a == b ? cxd(2.0) : cxd(0.0))) < 1e-14);
    }
  for (size_t a = 0; a < e.elements.size(); ++a)
    for (size_t b = 0; b < e.elements.size(); ++b) {
      const cxd ip = hs_inner(e.elements[a], e.elements[b]);
      CHECK(std::abs(ip - (a == b ? cxd(1.0) : cxd(0.0))) < 1e-14);
    }
}

TEST_CASE("identity map representations") {
  const ProcessRep id2 = ProcessRep::identity(2);
  ComplexMatrix expected(4, 4);
  expected(0, 0) = 1.0;
  CHECK(max_abs_diff(id2.chi, expected) <= 1e-12);
  CHECK(max_abs_diff(id2.superop, ComplexMatrix::identity(4)) <= 1e-12);

  // chi of Eq. (17) form with k = 1 is the identity map
  const ProcessRep p = ProcessRep::from_chi(dephasing_chi(1.0));
  CHECK(max_abs_diff(p.superop, ComplexMatrix::identity(4)) <= 1e-12);
}

TEST_CASE("apply on dephasing fixtures") {
  const DensityMatrix plus = plus_state();
  const ProcessRep id2 = ProcessRep::identity(2);
  CHECK(max_abs_diff(apply(id2, plus), plus.matrix()) <= 1e-12);

  const ProcessRep full = ProcessRep::from_chi(dephasing_chi(0.0));
  const ComplexMatrix out = apply(full, plus);
  CHECK(max_abs_diff(out, DensityMatrix::maximally_mixed(2).matrix()) <= 1e-12);

  const ProcessRep half = ProcessRep::from_chi(dephasing_chi(0.5));
  ComplexMatrix expected(2, 2, {0.5, 0.25, 0.25, 0.5});
  CHECK(max_abs_diff(apply(half, plus), expected) <= 1e-12);

  CHECK_THROWS_AS(apply(half, DensityMatrix::maximally_mixed(4)), std::invalid_argument);
}

TEST_CASE("compose fixtures") {
  const ProcessRep p = ProcessRep::from_chi(dephasing_chi(cxd(0.3, 0.2)));
  const ProcessRep c = compose(ProcessRep::identity(2), p);
  CHECK(max_abs_diff(c.chi, p.chi) <= 1e-12);

  const ProcessRep a = ProcessRep::from_chi(dephasing_chi(0.8));
  const ProcessRep ratio = ProcessRep::from_chi(dephasing_chi(0.5));
  const ProcessRep ab = compose(ratio, a);
  CHECK(max_abs_diff(ab.chi, dephasing_chi(0.4)) <= 1e-12);

  ComplexMatrix zchi(4, 4);
  zchi(3, 3) = 1.0;  // rho -> Z rho Z
  const ProcessRep z = ProcessRep::from_chi(zchi);
  const ProcessRep zz = compose(z, z);
  CHECK(max_abs_diff(zz.superop, ComplexMatrix::identity(4)) <= 1e-12);
}

TEST_CASE("intermediate map fixtures") {
  const ProcessRep p1 = ProcessRep::from_chi(dephasing_chi(0.4));
  const ProcessRep same = intermediate(p1, p1);
  CHECK(max_abs_diff(same.superop, ComplexMatrix::identity(4)) <= 1e-10);

  const ProcessRep p2 = ProcessRep::from_chi(dephasing_chi(0.6));
  const ProcessRep lam = intermediate(p2, p1);
  CHECK(max_abs_diff(lam.chi, dephasing_chi(1.5)) <= 1e-10);
  const EigResult e = eig_hermitian(lam.chi, 1e-9);
  CHECK(e.values.front() == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(e.values.back() == doctest::Approx(-0.25).epsilon(1e-9));

  const ProcessRep lam2 = intermediate(ProcessRep::from_chi(dephasing_chi(0.4)),
                                       ProcessRep::from_chi(dephasing_chi(0.8)));
  CHECK(cp_report(lam2).is_cp);

  // vanishing kappa(t1) factors are not invertible
  const ProcessRep dead = ProcessRep::from_chi(dephasing_chi(0.0));
  CHECK_THROWS_AS(intermediate(p2, dead), NonInvertibleSubprocess);
}

TEST_CASE("cp_report fixtures") {
  const CpReport id_rep = cp_report(ProcessRep::identity(2));
  CHECK(id_rep.is_cp);
  CHECK(id_rep.negative_sum == doctest::Approx(0.0));

  const ProcessRep lam = ProcessRep::from_chi(dephasing_chi(1.5));
  const CpReport r = cp_report(lam);
  CHECK(!r.is_cp);
  CHECK(r.negative_sum == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(r.min_eigenvalue == doctest::Approx(-0.25).epsilon(1e-10));

  for (double k : {0.0, 0.3, 0.999, 1.0}) {
    CHECK(cp_report(ProcessRep::from_chi(dephasing_chi(k))).is_cp);
  }
}

TEST_CASE("Eq.17 family negative sum is max(0, (|k|-1)/2)") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> mag(0.0, 2.5);
  std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = mag(rng), t = ph(rng);
    const cxd k = std::polar(a, t);
    const ProcessRep p = ProcessRep::from_chi(dephasing_chi(k));
    const CpReport r = cp_report(p, 0.0);
    CHECK(r.negative_sum == doctest::Approx(std::max(0.0, (a - 1.0) / 2.0)).epsilon(1e-10));
  }
}

TEST_CASE("conversion round trips and normalization identities") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 4;
    const ProcessRep p = testutil::random_cptp(d, rng);

    // chi -> superop -> chi and choi -> superop -> choi are identities
    CHECK(max_abs_diff(chi_from_superop(d, superop_from_chi(d, p.chi)), p.chi) <= 1e-10);
    CHECK(max_abs_diff(choi_from_superop(d, superop_from_choi(d, p.choi)), p.choi) <= 1e-10);

    // trace-preserving: tr(choi)/d = tr(chi) = 1
    CHECK(std::abs(p.chi.trace() - cxd(1.0)) <= 1e-9);
    CHECK(std::abs(p.choi.trace() / static_cast<double>(d) - cxd(1.0)) <= 1e-9);

    // sum_mn chi_mn Bn' Bm = I for TP maps (B the sqrt(d)-normalized basis)
    const OperatorBasis& basis = OperatorBasis::for_dim(d);
    ComplexMatrix acc(d, d);
    for (int mm = 0; mm < d * d; ++mm)
      for (int nn = 0; nn < d * d; ++nn) {
        const cxd coeff = p.chi(mm, nn) * basis.chi_scale * basis.chi_scale;
        if (coeff == cxd(0.0)) continue;
        const ComplexMatrix term = basis.elements[nn].adjoint() * basis.elements[mm];
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) acc(i, j) += coeff * term(i, j);
      }
    CHECK(max_abs_diff(acc, ComplexMatrix::identity(d)) <= 1e-9);

    // chi and choi have identical eigenvalue signs (choi = d * chi spectrum)
    const EigResult echi = eig_hermitian(p.chi, 1e-8);
    const EigResult echoi = eig_hermitian(p.choi, 1e-8);
    for (size_t k = 0; k < echi.values.size(); ++k)
      CHECK(echoi.values[k] == doctest::Approx(d * echi.values[k]).epsilon(1e-8));
  }
}

TEST_CASE("intermediate reconstruction over random invertible TP pairs") {
  std::mt19937_64 rng(2024);
  int done = 0;
  while (done < 100) {
    const int d = done % 2 == 0 ? 2 : 4;
    const ProcessRep p1 = testutil::random_cptp(d, rng);
    const ProcessRep p2 = testutil::random_cptp(d, rng);
    ProcessRep lam = ProcessRep::identity(d);
    try {
      lam = intermediate(p2, p1, 1e10);
    } catch (const NonInvertibleSubprocess&) {
      continue;
    }
    const ComplexMatrix recon = lam.superop * p1.superop;
    CHECK(max_abs_diff(recon, p2.superop) <= 1e-9);
    ++done;
  }
}

TEST_CASE("choi application rule") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 4;
    const ProcessRep p = testutil::random_cptp(d, rng);
    const DensityMatrix rho = testutil::random_density(d, rng);
    CHECK(max_abs_diff(apply_choi(p.choi, rho.matrix()), apply(p, rho)) <= 1e-10);
  }
}

TEST_CASE("ProcessRep JSON round trip") {
  std::mt19937_64 rng(15);
  for (int d : {2, 4}) {
    const ProcessRep p = testutil::random_cptp(d, rng);
    const ProcessRep q = process_rep_from_json(to_json_string(p));
    CHECK(q.dim == d);
    CHECK(max_abs_diff(q.chi, p.chi) <= 1e-12);
    CHECK(max_abs_diff(q.superop, p.superop) <= 1e-10);
  }
  CHECK_THROWS(process_rep_from_json("{\"dim\": 2, \"basis_label\": \"TwoQubitE\", "
                                     "\"chi_re\": [], \"chi_im\": []}"));
}
