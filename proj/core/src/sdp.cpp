#include "nmk/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace nmk::sdp {

namespace {

// ---------------------------------------------------------------------------
// Dense real symmetric helpers (row-major, n <= ~70).

using Vec = std::vector<double>;

void mat_mul(int n, const double* a, const double* b, double* c) {
  for (int i = 0; i < n; ++i) {
    double* ci = c + i * n;
    std::fill(ci, ci + n, 0.0);
    const double* ai = a + i * n;
    for (int k = 0; k < n; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b + k * n;
      for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
}

void mat_mul_bt(int n, const double* a, const double* b, double* c) {
  // c = a * b^T
  for (int i = 0; i < n; ++i) {
    const double* ai = a + i * n;
    double* ci = c + i * n;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + j * n;
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += ai[k] * bj[k];
      ci[j] = s;
    }
  }
}

void mat_mul_at(int n, const double* a, const double* b, double* c) {
  // c = a^T * b
  for (int i = 0; i < n; ++i) {
    double* ci = c + i * n;
    std::fill(ci, ci + n, 0.0);
  }
  for (int k = 0; k < n; ++k) {
    const double* ak = a + k * n;
    const double* bk = b + k * n;
    for (int i = 0; i < n; ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* ci = c + i * n;
      for (int j = 0; j < n; ++j) ci[j] += aki * bk[j];
    }
  }
}

// out = g * m * g^T (m symmetric); tmp must hold n*n.
void congruence(int n, const double* g, const double* m, double* tmp, double* out) {
  mat_mul(n, g, m, tmp);
  mat_mul_bt(n, tmp, g, out);
}

// out = g^T * m * g.
void congruence_t(int n, const double* g, const double* m, double* tmp, double* out) {
  mat_mul_at(n, g, m, tmp);
  mat_mul(n, tmp, g, out);
}

double dense_inner(int n, const double* a, const double* b) {
  double s = 0.0;
  for (int k = 0; k < n * n; ++k) s += a[k] * b[k];
  return s;
}

double fro_norm(int n, const double* a) { return std::sqrt(dense_inner(n, a, a)); }

// Cyclic Jacobi for real symmetric matrices; eigenvalues ascendingly unsorted
// (we never need an order here). V accumulates rotations when non-null.
void sym_eig(int n, Vec a, Vec& w, Vec* vecs) {
  if (vecs) {
    vecs->assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) (*vecs)[i * n + i] = 1.0;
  }
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double stop = std::max(scale, 1e-300) * 1e-15 * n;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (std::sqrt(2.0 * off) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= stop / (n * n)) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int i = 0; i < n; ++i) {
          const double aip = a[i * n + p], aiq = a[i * n + q];
          a[i * n + p] = c * aip + s * aiq;
          a[i * n + q] = -s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = a[p * n + j], aqj = a[q * n + j];
          a[p * n + j] = c * apj + s * aqj;
          a[q * n + j] = -s * apj + c * aqj;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        if (vecs) {
          for (int i = 0; i < n; ++i) {
            const double vip = (*vecs)[i * n + p], viq = (*vecs)[i * n + q];
            (*vecs)[i * n + p] = c * vip + s * viq;
            (*vecs)[i * n + q] = -s * vip + c * viq;
          }
        }
      }
    }
  }
  w.resize(n);
  for (int i = 0; i < n; ++i) w[i] = a[i * n + i];
}

double min_eigenvalue(int n, const Vec& a) {
  Vec w;
  sym_eig(n, a, w, nullptr);
  return *std::min_element(w.begin(), w.end());
}

// Cholesky with diagonal ridge retries; returns false if hopeless.
bool cholesky(int n, Vec a, Vec& l) {
  double diag_max = 0.0;
  for (int i = 0; i < n; ++i) diag_max = std::max(diag_max, std::abs(a[i * n + i]));
  for (int attempt = 0; attempt < 4; ++attempt) {
    Vec m = a;
    if (attempt > 0) {
      const double ridge = diag_max * std::pow(10.0, attempt - 14.0);
      for (int i = 0; i < n; ++i) m[i * n + i] += ridge;
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = m[i * n + j];
        for (int k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
        if (i == j) {
          if (s <= 0.0) {
            ok = false;
            break;
          }
          m[i * n + i] = std::sqrt(s);
        } else {
          m[i * n + j] = s / m[j * n + j];
        }
      }
    }
    if (ok) {
      l = std::move(m);
      return true;
    }
  }
  return false;
}

void chol_solve(int n, const Vec& l, const double* b, double* x) {
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i * n + k] * x[k];
    x[i] = s / l[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * x[k];
    x[i] = s / l[i * n + i];
  }
}

// ---------------------------------------------------------------------------
// Sparse symmetric matrices (upper-triangle entry list).

struct Sparse {
  std::vector<int> r, c;
  Vec v;
  void add(int rr, int cc, double vv) {
    if (vv == 0.0) return;
    r.push_back(rr);
    c.push_back(cc);
    v.push_back(vv);
  }
  bool empty() const { return v.empty(); }
};

void sparse_add_to(const Sparse& f, double coeff, int n, double* dense) {
  for (size_t k = 0; k < f.v.size(); ++k) {
    const double x = coeff * f.v[k];
    dense[f.r[k] * n + f.c[k]] += x;
    if (f.r[k] != f.c[k]) dense[f.c[k] * n + f.r[k]] += x;
  }
}

double sparse_inner(const Sparse& f, int n, const double* dense) {
  double s = 0.0;
  for (size_t k = 0; k < f.v.size(); ++k) {
    const double x = f.v[k] * dense[f.r[k] * n + f.c[k]];
    s += f.r[k] == f.c[k] ? x : 2.0 * x;
  }
  return s;
}

// U = Winv * F * Winv for sparse F, via rank-1 pieces of Winv columns.
void sparse_congruence(const Sparse& f, int n, const Vec& winv, double* u) {
  std::fill(u, u + n * n, 0.0);
  for (size_t k = 0; k < f.v.size(); ++k) {
    const int a = f.r[k], b = f.c[k];
    const double x = f.v[k];
    const double* wa = winv.data() + a * n;  // symmetric: row = column
    const double* wb = winv.data() + b * n;
    if (a == b) {
      for (int i = 0; i < n; ++i) {
        const double wax = x * wa[i];
        for (int j = 0; j < n; ++j) u[i * n + j] += wax * wb[j];
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const double wax = x * wa[i], wbx = x * wb[i];
        for (int j = 0; j < n; ++j) u[i * n + j] += wax * wb[j] + wbx * wa[j];
      }
    }
  }
}

// Real-symmetric embedding [[S, -K], [K, S]] of a complex Hermitian matrix.
Sparse embed_sparse(const ComplexMatrix& h) {
  const int k = h.rows();
  Sparse f;
  for (int a = 0; a < k; ++a) {
    const double d = h(a, a).real();
    f.add(a, a, d);
    f.add(k + a, k + a, d);
    for (int b = a + 1; b < k; ++b) {
      const double re = h(a, b).real(), im = h(a, b).imag();
      if (re != 0.0) {
        f.add(a, b, re);
        f.add(k + a, k + b, re);
      }
      if (im != 0.0) {
        f.add(a, k + b, -im);
        f.add(b, k + a, im);
      }
    }
  }
  return f;
}

Vec embed_dense(const ComplexMatrix& h) {
  const int k = h.rows();
  const int n = 2 * k;
  Vec d(static_cast<size_t>(n) * n, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const double re = h(a, b).real(), im = h(a, b).imag();
      d[a * n + b] = re;
      d[(k + a) * n + (k + b)] = re;
      d[a * n + (k + b)] = -im;
      d[(k + a) * n + b] = im;
    }
  return d;
}

// Orthonormal Hermitian basis element i of a D x D space, as a matrix.
// Order: diagonals first, then (real, imag) pairs over a < b.
ComplexMatrix hermitian_basis_element(int D, int i) {
  ComplexMatrix h(D, D);
  if (i < D) {
    h(i, i) = 1.0;
    return h;
  }
  int k = i - D;
  const int pair = k / 2;
  const bool imag = k % 2 == 1;
  // recover (a, b) with a < b from the pair index
  int a = 0, rem = pair;
  while (rem >= D - 1 - a) {
    rem -= D - 1 - a;
    ++a;
  }
  const int b = a + 1 + rem;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (!imag) {
    h(a, b) = inv_sqrt2;
    h(b, a) = inv_sqrt2;
  } else {
    h(a, b) = cxd(0.0, inv_sqrt2);
    h(b, a) = cxd(0.0, -inv_sqrt2);
  }
  return h;
}

struct BlockData {
  int n = 0;                    // embedded size
  std::vector<Sparse> F;       // one per global parameter
  Vec F0;                       // dense embedded offset
  double f0_norm = 0.0;
};

struct BlockState {
  int n = 0;
  Vec s, z;
  // NT scaling pieces
  Vec G, Ginv, Winv;
  Vec lam;          // eigenvalues of R z R (squared scaled point)
  Vec lam_quarter;  // lam^{1/4}
  // per-phase buffers
  Vec ds, dz, ds_hat, dz_hat;
  Vec rp;  // primal residual
  Vec t1, t2, t3;  // scratch
};

}  // namespace

LinearMap LinearMap::identity(int d) {
  LinearMap m;
  m.kind = Kind::Identity;
  m.in_dim = d;
  m.out_dim = d;
  return m;
}

LinearMap LinearMap::trace(int d) {
  LinearMap m;
  m.kind = Kind::Trace;
  m.in_dim = d;
  m.out_dim = 1;
  return m;
}

LinearMap LinearMap::general(int in_dim, int out_dim, ComplexMatrix action) {
  if (action.rows() != out_dim * out_dim || action.cols() != in_dim * in_dim)
    throw std::invalid_argument("LinearMap: action must be out^2 x in^2");
  LinearMap m;
  m.kind = Kind::General;
  m.in_dim = in_dim;
  m.out_dim = out_dim;
  m.action = std::move(action);
  return m;
}

ComplexMatrix LinearMap::operator()(const ComplexMatrix& x) const {
  if (x.rows() != in_dim || x.cols() != in_dim)
    throw std::invalid_argument("LinearMap: input shape mismatch");
  switch (kind) {
    case Kind::Identity:
      return x;
    case Kind::Trace: {
      ComplexMatrix out(1, 1);
      out(0, 0) = x.trace();
      return out;
    }
    case Kind::General: {
      ComplexMatrix out(out_dim, out_dim);
      for (int k = 0; k < out_dim; ++k)
        for (int l = 0; l < out_dim; ++l) {
          cxd acc = 0.0;
          for (int i = 0; i < in_dim; ++i)
            for (int j = 0; j < in_dim; ++j)
              acc += action(k + out_dim * l, i + in_dim * j) * x(i, j);
          out(k, l) = acc;
        }
      return out;
    }
  }
  throw std::logic_error("LinearMap: bad kind");
}

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts) {
  // --- problem validation and real parametrization -------------------------
  const int nvars = static_cast<int>(p.variables.size());
  if (nvars == 0) throw std::invalid_argument("sdp::solve: no variables");
  if (static_cast<int>(p.objective.size()) != nvars)
    throw std::invalid_argument("sdp::solve: objective count mismatch");
  if (p.constraints.empty()) throw std::invalid_argument("sdp::solve: no constraints");

  std::vector<int> var_dim(nvars), var_offset(nvars);
  int m = 0;
  for (int v = 0; v < nvars; ++v) {
    var_dim[v] = p.variables[v].second;
    if (var_dim[v] <= 0) throw std::invalid_argument("sdp::solve: bad variable dimension");
    var_offset[v] = m;
    m += var_dim[v] * var_dim[v];
  }

  // objective vector over the orthonormal Hermitian parameter basis
  Vec c(m, 0.0);
  for (int v = 0; v < nvars; ++v) {
    const ComplexMatrix& C = p.objective[v];
    if (C.rows() != var_dim[v] || C.cols() != var_dim[v])
      throw std::invalid_argument("sdp::solve: objective shape mismatch");
    const int D = var_dim[v];
    for (int i = 0; i < D * D; ++i) {
      const ComplexMatrix h = hermitian_basis_element(D, i);
      c[var_offset[v] + i] = hs_inner(h, C).real();  // = Re tr(C h), h Hermitian
    }
  }

  // embedded constraint data
  const int nblocks = static_cast<int>(p.constraints.size());
  std::vector<BlockData> blocks(nblocks);
  for (int j = 0; j < nblocks; ++j) {
    const ConstraintBlock& cb = p.constraints[j];
    if (cb.dim <= 0) throw std::invalid_argument("sdp::solve: bad block dimension");
    BlockData& bd = blocks[j];
    bd.n = 2 * cb.dim;
    bd.F.resize(m);
    if (cb.offset.rows() != cb.dim || cb.offset.cols() != cb.dim)
      throw std::invalid_argument("sdp::solve: offset shape mismatch");
    if (cb.offset.hermiticity_defect() > 1e-9)
      throw std::invalid_argument("sdp::solve: offset not Hermitian");
    bd.F0 = embed_dense(cb.offset);
    bd.f0_norm = fro_norm(bd.n, bd.F0.data());
    for (const auto& [v, map] : cb.terms) {
      if (v < 0 || v >= nvars) throw std::invalid_argument("sdp::solve: bad variable index");
      if (map.in_dim != var_dim[v] || map.out_dim != cb.dim)
        throw std::invalid_argument("sdp::solve: map shape mismatch");
      const int D = var_dim[v];
      for (int i = 0; i < D * D; ++i) {
        const ComplexMatrix h = hermitian_basis_element(D, i);
        const ComplexMatrix out = map(h);
        if (out.hermiticity_defect() > 1e-9)
          throw std::invalid_argument("sdp::solve: map is not Hermiticity-preserving");
        const Sparse f = embed_sparse(out);
        Sparse& dst = bd.F[var_offset[v] + i];
        if (dst.empty()) {
          dst = f;
        } else {
          for (size_t k = 0; k < f.v.size(); ++k) dst.add(f.r[k], f.c[k], f.v[k]);
        }
      }
    }
  }

  // --- interior-point state -------------------------------------------------
  Vec x(m, 0.0);
  double tau = 1.0, kappa = 1.0;
  std::vector<BlockState> st(nblocks);
  int total_dim = 0;
  for (int j = 0; j < nblocks; ++j) {
    const int n = blocks[j].n;
    st[j].n = n;
    st[j].s.assign(static_cast<size_t>(n) * n, 0.0);
    st[j].z.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      st[j].s[i * n + i] = 1.0;
      st[j].z[i * n + i] = 1.0;
    }
    total_dim += n;
  }
  const double mu_denom = total_dim + 1;
  const double c_norm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));

  SdpSolution sol;
  sol.options_used = opts;

  auto extract_values = [&](double scale) {
    sol.values.clear();
    for (int v = 0; v < nvars; ++v) {
      const int D = var_dim[v];
      ComplexMatrix X(D, D);
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      int i = var_offset[v];
      for (int a = 0; a < D; ++a) X(a, a) = x[i++] * scale;
      for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b) {
          const double re = x[i++] * scale * inv_sqrt2;
          const double im = x[i++] * scale * inv_sqrt2;
          X(a, b) += cxd(re, im);
          X(b, a) += cxd(re, -im);
        }
      sol.values.push_back(std::move(X));
    }
  };

  Vec rd(m), u(m), g(m), rhs1(m), a1(m), a2(m), dx(m), dx_aff(m);
  Vec M(static_cast<size_t>(m) * m), L;
  double dtau = 0.0, dkappa = 0.0, dtau_aff = 0.0, dkappa_aff = 0.0;

  int iter = 0;
  int stalls = 0;
  for (; iter < opts.max_iterations; ++iter) {
    // residuals
    double pres = 0.0;
    for (int j = 0; j < nblocks; ++j) {
      BlockState& b = st[j];
      const int n = b.n;
      b.rp.assign(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < m; ++i)
        if (!blocks[j].F[i].empty()) sparse_add_to(blocks[j].F[i], x[i], n, b.rp.data());
      for (int k = 0; k < n * n; ++k) b.rp[k] += tau * blocks[j].F0[k] - b.s[k];
      pres = std::max(pres, fro_norm(n, b.rp.data()) / (tau * (1.0 + blocks[j].f0_norm)));
    }
    std::fill(rd.begin(), rd.end(), 0.0);
    double f0z = 0.0;
    for (int j = 0; j < nblocks; ++j) {
      for (int i = 0; i < m; ++i)
        if (!blocks[j].F[i].empty()) rd[i] += sparse_inner(blocks[j].F[i], st[j].n, st[j].z.data());
      f0z += dense_inner(st[j].n, blocks[j].F0.data(), st[j].z.data());
    }
    const double cx = std::inner_product(c.begin(), c.end(), x.begin(), 0.0);
    for (int i = 0; i < m; ++i) rd[i] -= c[i] * tau;
    const double dres =
        std::sqrt(std::inner_product(rd.begin(), rd.end(), rd.begin(), 0.0)) /
        (tau * (1.0 + c_norm));
    const double rg = cx + f0z + kappa;

    double sz = 0.0;
    for (int j = 0; j < nblocks; ++j) sz += dense_inner(st[j].n, st[j].s.data(), st[j].z.data());
    const double mu = (sz + tau * kappa) / mu_denom;

    const double pobj = cx / tau;
    const double dobj = -f0z / tau;
    const double gap_rel = std::abs(pobj - dobj) / std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));

    if (opts.verbose && opts.log)
      (*opts.log) << "iter " << iter << " mu " << mu << " pres " << pres << " dres " << dres
                  << " gap " << pobj - dobj << " tau " << tau << " kappa " << kappa << "\n";

    if (pres <= opts.feas_tol && dres <= opts.feas_tol && gap_rel <= opts.gap_tol) {
      sol.status = SolveStatus::Optimal;
      sol.primal_value = pobj;
      sol.gap = std::abs(pobj - dobj);
      sol.primal_residual = pres;
      sol.dual_residual = dres;
      sol.iterations = iter;
      extract_values(1.0 / tau);
      return sol;
    }
    if (tau < opts.infeasibility_ratio * kappa) {
      sol.status = SolveStatus::Infeasible;
      sol.primal_value = std::numeric_limits<double>::quiet_NaN();
      sol.gap = std::abs(pobj - dobj);
      sol.primal_residual = pres;
      sol.dual_residual = dres;
      sol.iterations = iter;
      return sol;
    }

    // --- NT scaling per block ----------------------------------------------
    bool scaling_ok = true;
    for (int j = 0; j < nblocks && scaling_ok; ++j) {
      BlockState& b = st[j];
      const int n = b.n;
      Vec w, Q;
      sym_eig(n, b.s, w, &Q);
      Vec R(static_cast<size_t>(n) * n, 0.0), Rinv(static_cast<size_t>(n) * n, 0.0);
      for (int k = 0; k < n; ++k) {
        const double wk = std::max(w[k], 1e-280);
        const double sq = std::sqrt(wk);
        for (int i = 0; i < n; ++i)
          for (int jj = 0; jj < n; ++jj) {
            R[i * n + jj] += Q[i * n + k] * sq * Q[jj * n + k];
            Rinv[i * n + jj] += Q[i * n + k] / sq * Q[jj * n + k];
          }
      }
      b.t1.resize(static_cast<size_t>(n) * n);
      b.t2.resize(static_cast<size_t>(n) * n);
      b.t3.resize(static_cast<size_t>(n) * n);
      congruence(n, R.data(), b.z.data(), b.t1.data(), b.t2.data());  // R z R
      Vec lam, Q2;
      sym_eig(n, b.t2, lam, &Q2);
      b.lam = lam;
      b.lam_quarter.resize(n);
      for (int k = 0; k < n; ++k) {
        if (lam[k] <= 0.0) b.lam[k] = 1e-280;
        b.lam_quarter[k] = std::pow(b.lam[k], 0.25);
      }
      // G = R Q2 lam^{-1/4};  Ginv = lam^{1/4} Q2^T Rinv
      b.G.assign(static_cast<size_t>(n) * n, 0.0);
      mat_mul(n, R.data(), Q2.data(), b.t1.data());
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) b.G[i * n + k] = b.t1[i * n + k] / b.lam_quarter[k];
      b.Ginv.assign(static_cast<size_t>(n) * n, 0.0);
      mat_mul_at(n, Q2.data(), Rinv.data(), b.t1.data());
      for (int k = 0; k < n; ++k)
        for (int jj = 0; jj < n; ++jj) b.Ginv[k * n + jj] = b.lam_quarter[k] * b.t1[k * n + jj];
      // Winv = Ginv^T Ginv
      b.Winv.resize(static_cast<size_t>(n) * n);
      mat_mul_at(n, b.Ginv.data(), b.Ginv.data(), b.Winv.data());
    }
    if (!scaling_ok) break;

    // --- Schur complement (fixed for both phases) ---------------------------
    std::fill(M.begin(), M.end(), 0.0);
    std::fill(g.begin(), g.end(), 0.0);
    double gamma = 0.0;
    for (int j = 0; j < nblocks; ++j) {
      BlockState& b = st[j];
      const int n = b.n;
      Vec U(static_cast<size_t>(n) * n);
      for (int k = 0; k < m; ++k) {
        if (blocks[j].F[k].empty()) continue;
        sparse_congruence(blocks[j].F[k], n, b.Winv, U.data());
        for (int i = 0; i <= k; ++i) {
          if (blocks[j].F[i].empty()) continue;
          M[static_cast<size_t>(i) * m + k] += sparse_inner(blocks[j].F[i], n, U.data());
        }
      }
      // U0 = Winv F0 Winv
      congruence(n, b.Winv.data(), blocks[j].F0.data(), b.t1.data(), b.t2.data());
      for (int i = 0; i < m; ++i)
        if (!blocks[j].F[i].empty()) g[i] += sparse_inner(blocks[j].F[i], n, b.t2.data());
      gamma += dense_inner(n, blocks[j].F0.data(), b.t2.data());
    }
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < i; ++k) M[static_cast<size_t>(i) * m + k] = M[static_cast<size_t>(k) * m + i];
    if (!cholesky(m, M, L)) {
      sol.status = SolveStatus::MaxIterations;
      break;
    }

    // --- two-phase direction computation ------------------------------------
    auto compute_direction = [&](bool corrector, double sigma_mu, Vec* out_dx, double* out_dtau,
                                 double* out_dkappa) {
      // complementarity RHS per block (in scaled space), then C = G Rc G^T.
      for (int j = 0; j < nblocks; ++j) {
        BlockState& b = st[j];
        const int n = b.n;
        Vec rc(static_cast<size_t>(n) * n, 0.0);
        if (!corrector) {
          for (int a = 0; a < n; ++a)
            rc[a * n + a] = (sigma_mu - b.lam[a]) / std::sqrt(b.lam[a]);
        } else {
          for (int a = 0; a < n; ++a)
            for (int bb = 0; bb < n; ++bb) {
              double corr = 0.0;
              for (int k = 0; k < n; ++k)
                corr += b.ds_hat[a * n + k] * b.dz_hat[k * n + bb] +
                        b.dz_hat[a * n + k] * b.ds_hat[k * n + bb];
              corr *= 0.5;
              const double target = (a == bb ? sigma_mu - b.lam[a] : 0.0) - corr;
              rc[a * n + bb] = 2.0 * target / (std::sqrt(b.lam[a]) + std::sqrt(b.lam[bb]));
            }
        }
        congruence(n, b.G.data(), rc.data(), b.t1.data(), b.t3.data());  // t3 = C_j
        // V_j = Winv (C_j - rp) Winv -> t2
        for (int k = 0; k < n * n; ++k) b.t3[k] -= b.rp[k];
        congruence(n, b.Winv.data(), b.t3.data(), b.t1.data(), b.t2.data());
      }
      const double rct = corrector ? sigma_mu - tau * kappa - dtau_aff * dkappa_aff
                                   : sigma_mu - tau * kappa;
      std::fill(u.begin(), u.end(), 0.0);
      double eta = 0.0;
      for (int j = 0; j < nblocks; ++j) {
        for (int i = 0; i < m; ++i)
          if (!blocks[j].F[i].empty())
            u[i] += sparse_inner(blocks[j].F[i], st[j].n, st[j].t2.data());
        eta += dense_inner(st[j].n, blocks[j].F0.data(), st[j].t2.data());
      }
      for (int i = 0; i < m; ++i) rhs1[i] = u[i] + rd[i];
      chol_solve(m, L, rhs1.data(), a1.data());
      for (int i = 0; i < m; ++i) rhs1[i] = g[i] + c[i];
      chol_solve(m, L, rhs1.data(), a2.data());
      double gmc_a1 = 0.0, gmc_a2 = 0.0;
      for (int i = 0; i < m; ++i) {
        gmc_a1 += (g[i] - c[i]) * a1[i];
        gmc_a2 += (g[i] - c[i]) * a2[i];
      }
      const double denom = gamma + kappa / tau - gmc_a2;
      const double rhs2 = rct / tau + rg + eta;
      const double dt = (rhs2 - gmc_a1) / denom;
      for (int i = 0; i < m; ++i) (*out_dx)[i] = a1[i] - a2[i] * dt;
      *out_dtau = dt;
      *out_dkappa = (rct - kappa * dt) / tau;
      // block directions
      for (int j = 0; j < nblocks; ++j) {
        BlockState& b = st[j];
        const int n = b.n;
        // B = P(dx) + F0 dtau  -> t1
        std::fill(b.t1.begin(), b.t1.end(), 0.0);
        for (int i = 0; i < m; ++i)
          if (!blocks[j].F[i].empty()) sparse_add_to(blocks[j].F[i], (*out_dx)[i], n, b.t1.data());
        for (int k = 0; k < n * n; ++k) b.t1[k] += blocks[j].F0[k] * dt;
        b.ds.resize(static_cast<size_t>(n) * n);
        for (int k = 0; k < n * n; ++k) b.ds[k] = b.t1[k] + b.rp[k];
        // dz = V - Winv B Winv
        b.dz.resize(static_cast<size_t>(n) * n);
        congruence(n, b.Winv.data(), b.t1.data(), b.t3.data(), b.dz.data());
        for (int k = 0; k < n * n; ++k) b.dz[k] = b.t2[k] - b.dz[k];
        // scaled directions (used for line search and the corrector)
        b.ds_hat.resize(static_cast<size_t>(n) * n);
        b.dz_hat.resize(static_cast<size_t>(n) * n);
        congruence(n, b.Ginv.data(), b.ds.data(), b.t1.data(), b.ds_hat.data());
        congruence_t(n, b.G.data(), b.dz.data(), b.t1.data(), b.dz_hat.data());
      }
    };

    auto max_step = [&](double dt, double dk) {
      double alpha = 1.0;
      if (dt < 0.0) alpha = std::min(alpha, -opts.step_fraction * tau / dt);
      if (dk < 0.0) alpha = std::min(alpha, -opts.step_fraction * kappa / dk);
      for (int j = 0; j < nblocks; ++j) {
        BlockState& b = st[j];
        const int n = b.n;
        // s + a ds >= 0 iff I + a Lam^{-1/4} ds_hat Lam^{-1/4} >= 0
        Vec scaled(static_cast<size_t>(n) * n);
        for (int a = 0; a < n; ++a)
          for (int bb = 0; bb < n; ++bb)
            scaled[a * n + bb] = b.ds_hat[a * n + bb] / (b.lam_quarter[a] * b.lam_quarter[bb]);
        double lm = min_eigenvalue(n, scaled);
        if (lm < 0.0) alpha = std::min(alpha, -opts.step_fraction / lm);
        for (int a = 0; a < n; ++a)
          for (int bb = 0; bb < n; ++bb)
            scaled[a * n + bb] = b.dz_hat[a * n + bb] / (b.lam_quarter[a] * b.lam_quarter[bb]);
        lm = min_eigenvalue(n, scaled);
        if (lm < 0.0) alpha = std::min(alpha, -opts.step_fraction / lm);
      }
      return alpha;
    };

    // affine (predictor) phase
    compute_direction(false, 0.0, &dx_aff, &dtau_aff, &dkappa_aff);
    const double alpha_aff = max_step(dtau_aff, dkappa_aff);
    double sz_aff = (tau + alpha_aff * dtau_aff) * (kappa + alpha_aff * dkappa_aff);
    for (int j = 0; j < nblocks; ++j) {
      BlockState& b = st[j];
      const int n = b.n;
      // <s + a ds, z + a dz> computed in the scaled space
      double acc = 0.0;
      for (int a = 0; a < n; ++a) {
        acc += (std::sqrt(b.lam[a]) + alpha_aff * b.ds_hat[a * n + a]) *
               (std::sqrt(b.lam[a]) + alpha_aff * b.dz_hat[a * n + a]);
        for (int bb = 0; bb < n; ++bb)
          if (bb != a)
            acc += alpha_aff * b.ds_hat[a * n + bb] * alpha_aff * b.dz_hat[bb * n + a];
      }
      sz_aff += acc;
    }
    const double mu_aff = sz_aff / mu_denom;
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
    sigma = std::min(std::max(sigma, 1e-8), 1.0);

    // corrector (combined) phase
    compute_direction(true, sigma * mu, &dx, &dtau, &dkappa);
    const double alpha = max_step(dtau, dkappa);

    if (alpha < 1e-7) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }

    for (int i = 0; i < m; ++i) x[i] += alpha * dx[i];
    tau += alpha * dtau;
    kappa += alpha * dkappa;
    for (int j = 0; j < nblocks; ++j) {
      BlockState& b = st[j];
      for (size_t k = 0; k < b.s.size(); ++k) {
        b.s[k] += alpha * b.ds[k];
        b.z[k] += alpha * b.dz[k];
      }
    }
  }

  // max iterations (or stall): report the current rescaled iterate
  sol.status = SolveStatus::MaxIterations;
  sol.iterations = iter;
  {
    double f0z = 0.0;
    for (int j = 0; j < nblocks; ++j)
      f0z += dense_inner(st[j].n, blocks[j].F0.data(), st[j].z.data());
    const double cx = std::inner_product(c.begin(), c.end(), x.begin(), 0.0);
    sol.primal_value = cx / tau;
    sol.gap = std::abs(cx / tau + f0z / tau);
  }
  extract_values(1.0 / tau);
  return sol;
}

}  // namespace nmk::sdp
