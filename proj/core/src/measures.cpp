#include "nmk/measures.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "nmk/capability.hpp"
#include "nmk/states.hpp"

namespace nmk {

namespace {

std::vector<double> uniform_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

std::vector<double> insert_midpoints(const std::vector<double>& g) {
  std::vector<double> out;
  out.reserve(2 * g.size() - 1);
  for (size_t i = 0; i + 1 < g.size(); ++i) {
    out.push_back(g[i]);
    out.push_back(0.5 * (g[i] + g[i + 1]));
  }
  out.push_back(g.back());
  return out;
}

// Halve the step until the value changes by < rel_tol relative (or the point
// cap is reached). The evaluator sees the whole grid each stage; midpoint
// insertion preserves earlier points so per-point caches stay warm.
template <typename F>
std::pair<double, std::vector<double>> refine(const std::vector<double>& start, F&& value_on_grid,
                                              const MeasureOptions& opts) {
  std::vector<double> grid = start;
  double value = value_on_grid(grid);
  while (static_cast<int>(grid.size()) * 2 - 1 <= opts.max_points) {
    std::vector<double> next = insert_midpoints(grid);
    const double next_value = value_on_grid(next);
    const bool converged =
        std::abs(next_value - value) <= opts.rel_tol * std::max(std::abs(next_value), 1e-9);
    grid = std::move(next);
    value = next_value;
    if (converged) break;
  }
  return {value, grid};
}

}  // namespace

DynamicsFamily single_photon_family(const SinglePhotonModel& m, double t_max, int points) {
  validate(m);
  if (t_max <= 0.0) throw std::invalid_argument("single_photon_family: t_max must be positive");
  DynamicsFamily f;
  f.evaluator = [m](double t) { return chi_single(kappa_single(m, t)); };
  f.t_max = t_max;
  f.grid = uniform_grid(0.0, t_max, points);
  return f;
}

DynamicsFamily two_photon_family(const TwoPhotonModel& m, double t_max, int points) {
  validate(m);
  if (t_max <= 0.0) t_max = 2.0 * m.switchover;
  DynamicsFamily f;
  f.evaluator = [m](double t) {
    const Schedule s = schedule_at(m, t);
    return chi_two(m, s.tau1, s.tau2);
  };
  f.t_max = t_max;
  f.grid = uniform_grid(0.0, t_max, points);
  return f;
}

DynamicsFamily two_photon_local_family(const TwoPhotonModel& m, double t_max, int points) {
  validate(m);
  if (t_max <= 0.0) t_max = 2.0 * m.switchover;
  DynamicsFamily f;
  f.evaluator = [m](double t) { return chi_local(m, schedule_at(m, t).tau1); };
  f.t_max = t_max;
  f.grid = uniform_grid(0.0, t_max, points);
  return f;
}

MeasureReport n_beta(const DynamicsFamily& f, double t2, const MeasureOptions& opts) {
  if (t2 <= 0.0 || t2 > f.t_max) throw std::invalid_argument("n_beta: t2 outside the domain");
  const ProcessRep total = f.evaluator(t2);
  std::map<double, double> cache;  // division point -> beta (NaN when excluded)
  int excluded = 0;

  auto beta_at = [&](double t) {
    const auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    double b;
    try {
      const ProcessRep lam = intermediate(total, f.evaluator(t));
      b = robustness(lam, opts.solver).beta;
    } catch (const NonInvertibleSubprocess&) {
      b = std::numeric_limits<double>::quiet_NaN();
      ++excluded;
    }
    cache.emplace(t, b);
    return b;
  };

  auto quadrature = [&](const std::vector<double>& grid) {
    double acc = 0.0;
    double prev_t = grid[0];
    double prev_b = beta_at(grid[0]);
    for (size_t i = 1; i < grid.size(); ++i) {
      const double b = beta_at(grid[i]);
      if (!std::isnan(b)) {
        if (!std::isnan(prev_b)) acc += 0.5 * (b + prev_b) * (grid[i] - prev_t);
        prev_t = grid[i];
        prev_b = b;
      }
    }
    return acc;
  };

  const int start_points = std::max(9, static_cast<int>(f.grid.size()) / 4 + 1);
  const auto [value, grid] = refine(uniform_grid(0.0, t2, start_points), quadrature, opts);

  MeasureReport r;
  r.kind = MeasureKind::NBeta;
  r.value = value;
  r.grid_size = static_cast<int>(grid.size());
  std::ostringstream note;
  note << "trapezoid over " << grid.size() << " division points";
  if (excluded > 0) note << "; " << excluded << " non-invertible points excluded";
  r.discretization_note = note.str();
  return r;
}

std::vector<std::pair<double, double>> d_trace_dynamics(const DynamicsFamily& f,
                                                        const DensityMatrix& rho1,
                                                        const DensityMatrix& rho2) {
  std::vector<std::pair<double, double>> series;
  series.reserve(f.grid.size());
  for (double t : f.grid) {
    const ProcessRep p = f.evaluator(t);
    series.emplace_back(t, trace_distance(apply(p, rho1), apply(p, rho2)));
  }
  return series;
}

double d_closed_form(const TwoPhotonModel& m, double tau1, double tau2) {
  if (tau1 < 0.0 || tau2 < 0.0) throw std::invalid_argument("d_closed_form: negative time");
  const double dn2c = m.delta_n * m.delta_n * m.C;
  return std::exp(-0.5 * dn2c *
                  (tau1 * tau1 + tau2 * tau2 - 2.0 * std::abs(m.K) * tau1 * tau2));
}

MeasureReport n_blp(const DynamicsFamily& f, const DensityMatrix& rho1, const DensityMatrix& rho2,
                    const MeasureOptions& opts) {
  std::map<double, double> cache;
  auto d_at = [&](double t) {
    const auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    const ProcessRep p = f.evaluator(t);
    const double d = trace_distance(apply(p, rho1), apply(p, rho2));
    cache.emplace(t, d);
    return d;
  };
  auto positive_increments = [&](const std::vector<double>& grid) {
    double acc = 0.0;
    double prev = d_at(grid[0]);
    for (size_t i = 1; i < grid.size(); ++i) {
      const double d = d_at(grid[i]);
      if (d > prev) acc += d - prev;
      prev = d;
    }
    return acc;
  };
  const auto [value, grid] = refine(f.grid, positive_increments, opts);

  MeasureReport r;
  r.kind = MeasureKind::NBlp;
  r.value = value;
  r.grid_size = static_cast<int>(grid.size());
  std::ostringstream note;
  note << "positive trace-distance increments over " << grid.size() << " points";
  r.discretization_note = note.str();
  return r;
}

PairSearchResult blp_pair_search(const DynamicsFamily& f, int bloch_grid,
                                 const MeasureOptions& opts) {
  const int dim = f.evaluator(0.0).dim;
  PairSearchResult best;
  best.report.kind = MeasureKind::NBlp;
  best.report.value = -1.0;

  auto consider = [&](const std::string& l1, const std::string& l2, const DensityMatrix& r1,
                      const DensityMatrix& r2) {
    const MeasureReport rep = n_blp(f, r1, r2, opts);
    if (rep.value > best.report.value) {
      best.label1 = l1;
      best.label2 = l2;
      best.report = rep;
    }
  };

  if (dim == 2) {
    for (int i = 0; i < bloch_grid; ++i) {
      const double theta = M_PI * (i + 0.5) / bloch_grid;
      for (int j = 0; j < bloch_grid; ++j) {
        const double phi = 2.0 * M_PI * j / bloch_grid;
        const cxd amp1 = std::cos(theta / 2.0);
        const cxd amp2 = std::polar(std::sin(theta / 2.0), phi);
        // antipodal partner
        const cxd bmp1 = std::sin(theta / 2.0);
        const cxd bmp2 = std::polar(-std::cos(theta / 2.0), phi);
        std::ostringstream l1, l2;
        l1 << "bloch(" << theta << "," << phi << ")";
        l2 << "bloch(" << M_PI - theta << "," << phi << "+pi)";
        consider(l1.str(), l2.str(), DensityMatrix::pure({amp1, amp2}),
                 DensityMatrix::pure({bmp1, bmp2}));
      }
    }
  } else {
    for (const auto& [a, b] : table_two_pairs()) consider(a, b, state_2q(a), state_2q(b));
  }
  return best;
}

MeasureReport n_rhp(const DynamicsFamily& f, const MeasureOptions& opts) {
  const int dim = f.evaluator(0.0).dim;
  std::map<double, ProcessRep> cache;
  int excluded = 0;
  auto proc_at = [&](double t) -> const ProcessRep& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, f.evaluator(t)).first;
    return it->second;
  };
  auto accumulate = [&](const std::vector<double>& grid) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      try {
        const ProcessRep lam = intermediate(proc_at(grid[i + 1]), proc_at(grid[i]));
        acc += std::max(0.0, trace_norm_hermitian(lam.choi) / dim - 1.0);
      } catch (const NonInvertibleSubprocess&) {
        ++excluded;
      }
    }
    return acc;
  };
  const auto [value, grid] = refine(f.grid, accumulate, opts);

  MeasureReport r;
  r.kind = MeasureKind::NRhp;
  r.value = value;
  r.grid_size = static_cast<int>(grid.size());
  std::ostringstream note;
  note << "eps = grid step (" << grid.size() << " points); integral truncated at t_max = "
       << f.t_max;
  if (excluded > 0) note << "; " << excluded << " non-invertible steps excluded";
  r.discretization_note = note.str();
  return r;
}

void write_series_csv(std::ostream& os, const std::vector<std::pair<double, double>>& series) {
  os << "t_lambda0,value\n";
  os.precision(12);
  for (const auto& [t, v] : series) os << t << "," << v << "\n";
}

}  // namespace nmk
