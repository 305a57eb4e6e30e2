#include "nmk/dephasing.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace nmk {

namespace {
const cxd im(0.0, 1.0);
}

Schedule schedule_at(const TwoPhotonModel& m, double t) {
  if (t < 0.0) throw std::invalid_argument("schedule_at: negative time");
  Schedule s;
  s.tau1 = std::min(t, m.switchover);
  s.tau2 = std::max(0.0, t - m.switchover);
  return s;
}

void validate(const SinglePhotonModel& m) {
  if (m.peaks.empty()) throw std::invalid_argument("SinglePhotonModel: no peaks");
  double wsum = 0.0;
  for (const SpectrumPeak& p : m.peaks) {
    if (p.weight <= 0.0 || p.weight > 1.0)
      throw std::invalid_argument("SinglePhotonModel: peak weight out of (0,1]");
    if (p.width <= 0.0) throw std::invalid_argument("SinglePhotonModel: nonpositive width");
    wsum += p.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("SinglePhotonModel: peak weights must sum to 1");
  if (m.delta_n == 0.0) throw std::invalid_argument("SinglePhotonModel: delta_n must be nonzero");
}

void validate(const TwoPhotonModel& m) {
  if (std::abs(m.K) > 1.0) throw std::invalid_argument("TwoPhotonModel: |K| > 1");
  if (m.C <= 0.0) throw std::invalid_argument("TwoPhotonModel: C must be positive");
  if (m.delta_n == 0.0) throw std::invalid_argument("TwoPhotonModel: delta_n must be nonzero");
  if (m.switchover <= 0.0) throw std::invalid_argument("TwoPhotonModel: switchover must be positive");
}

cxd kappa_single(const SinglePhotonModel& m, double t) {
  validate(m);
  if (t < 0.0) throw std::invalid_argument("kappa_single: negative time");
  cxd k = 0.0;
  for (const SpectrumPeak& p : m.peaks) {
    const double arg = p.width * m.delta_n * t;
    k += p.weight * std::exp(im * p.center * m.delta_n * t - 0.5 * arg * arg);
  }
  return k;
}

ProcessRep chi_single(cxd kappa) {
  if (std::abs(kappa) > 1.0 + 1e-12)
    throw std::invalid_argument("chi_single: |kappa| exceeds 1");
  ComplexMatrix chi(4, 4);
  chi(0, 0) = (2.0 + kappa + std::conj(kappa)) / 4.0;
  chi(0, 3) = (kappa - std::conj(kappa)) / 4.0;
  chi(3, 0) = (std::conj(kappa) - kappa) / 4.0;
  chi(3, 3) = (2.0 - kappa - std::conj(kappa)) / 4.0;
  return ProcessRep::from_chi(chi);
}

cxd g_joint(const TwoPhotonModel& m, double tau1, double tau2) {
  validate(m);
  const double dn = m.delta_n;
  const cxd expo = 0.5 * (im * m.omega0 * dn * (tau1 + tau2) -
                          m.C * dn * dn * (tau1 * tau1 + tau2 * tau2 + 2.0 * m.K * tau1 * tau2));
  return std::exp(expo);
}

ProcessRep chi_two(const TwoPhotonModel& m, double tau1, double tau2) {
  if (tau1 < 0.0 || tau2 < 0.0) throw std::invalid_argument("chi_two: negative active time");
  const cxd k1 = g_joint(m, tau1, 0.0);
  const cxd k2 = g_joint(m, 0.0, tau2);
  const cxd k12 = g_joint(m, tau1, tau2);
  const cxd l12 = g_joint(m, tau1, -tau2);

  // 1/4 [[A, Z1, B], [Z1', Z2, Z1'], [B', Z1, A]] with the 6x6 A and B
  // blocks carrying the decoherence functions at their corner entries.
  ComplexMatrix chi(16, 16);
  auto put = [&chi](int r, int c, cxd v) {
    chi(r, c) = v / 4.0;
    if (r != c) chi(c, r) = std::conj(v) / 4.0;
  };
  put(0, 0, 1.0);
  put(5, 5, 1.0);
  put(0, 5, k2);
  put(10, 10, 1.0);
  put(15, 15, 1.0);
  put(10, 15, k2);
  put(0, 10, k1);
  put(5, 15, k1);
  put(0, 15, k12);
  put(5, 10, l12);
  return ProcessRep::from_chi(chi);
}

ProcessRep chi_local(const TwoPhotonModel& m, double tau1) {
  if (tau1 < 0.0) throw std::invalid_argument("chi_local: negative active time");
  const cxd k1 = g_joint(m, tau1, 0.0);

  // 1/2 [[1,0,0,k1],[0,0,0,0],[0,0,0,0],[k1*,0,0,1]] over the single-qubit
  // matrix units |h><r| (m = r + 2h + 1), converted to the M basis.
  ComplexMatrix chi_units(4, 4);
  chi_units(0, 0) = 0.5;
  chi_units(0, 3) = 0.5 * k1;
  chi_units(3, 0) = 0.5 * std::conj(k1);
  chi_units(3, 3) = 0.5;

  std::vector<ComplexMatrix> units;
  for (int idx = 0; idx < 4; ++idx) {
    const int r = idx & 1, h = (idx >> 1) & 1;
    ComplexMatrix u(2, 2);
    u(h, r) = 1.0;
    units.push_back(u);
  }
  const double scale2 = 2.0;  // elements have HS norm 1, rescaled to sqrt(2)
  ComplexMatrix superop(4, 4);
  for (int mm = 0; mm < 4; ++mm)
    for (int nn = 0; nn < 4; ++nn) {
      const cxd coeff = chi_units(mm, nn) * scale2;
      if (coeff == cxd(0.0)) continue;
      const ComplexMatrix term = kron(units[nn].conjugate(), units[mm]);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) superop(i, j) += coeff * term(i, j);
    }
  return ProcessRep::from_superop(2, superop);
}

namespace {

std::map<std::string, TwoPhotonModel> make_two_photon_presets() {
  // fitted frequency-correlation conditions (I)-(IV)
  std::map<std::string, TwoPhotonModel> p;
  p["cond_I"] = TwoPhotonModel{-0.9174, 389.7235, 0.1799, 0.0233, 0.0444, 199.0};
  p["cond_II"] = TwoPhotonModel{-0.6655, 389.7692, 0.5181, 0.1950, 0.0156, 199.0};
  p["cond_III"] = TwoPhotonModel{-0.5564, 389.7436, 0.7305, 0.3844, 0.0115, 199.0};
  p["cond_IV"] = TwoPhotonModel{-0.1645, 390.0128, 1.8885, 2.5760, 0.0045, 199.0};
  return p;
}

std::map<std::string, SinglePhotonModel> make_single_photon_presets() {
  std::map<std::string, SinglePhotonModel> p;
  p["single_gauss"] = SinglePhotonModel{{{1.0, 0.6, 0.12}}, 1.0};
  p["single_twopeak"] = SinglePhotonModel{{{0.5, -0.5, 0.05}, {0.5, 0.5, 0.05}}, 1.0};
  return p;
}

}  // namespace

bool is_two_photon_preset(const std::string& name) {
  static const auto presets = make_two_photon_presets();
  return presets.count(name) > 0;
}

bool is_single_photon_preset(const std::string& name) {
  static const auto presets = make_single_photon_presets();
  return presets.count(name) > 0;
}

const TwoPhotonModel& two_photon_preset(const std::string& name) {
  static const auto presets = make_two_photon_presets();
  const auto it = presets.find(name);
  if (it == presets.end())
    throw std::invalid_argument("two_photon_preset: unknown preset '" + name + "'");
  return it->second;
}

const SinglePhotonModel& single_photon_preset(const std::string& name) {
  static const auto presets = make_single_photon_presets();
  const auto it = presets.find(name);
  if (it == presets.end())
    throw std::invalid_argument("single_photon_preset: unknown preset '" + name + "'");
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, model] : make_two_photon_presets()) names.push_back(name);
  for (const auto& [name, model] : make_single_photon_presets()) names.push_back(name);
  return names;
}

}  // namespace nmk
