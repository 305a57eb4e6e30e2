// Closed-form dephasing models: single-photon cavity dephasing with a
// Gaussian-mixture frequency spectrum, and the two-photon
// correlated-environment dephasing with the sequential quartz-plate schedule.
//
// The time axis is effective path difference in units of lambda0 = 780 nm;
// the Table-III-style parameters (K, omega0, delta, C, delta_n) are
// dimensionless fit parameters in these units.
#pragma once

#include <string>
#include <vector>

#include "nmk/matrix.hpp"
#include "nmk/process.hpp"

namespace nmk {

struct SpectrumPeak {
  double weight;  // in (0, 1]; weights over a spectrum sum to 1
  double center;  // angular-frequency units after scaling
  double width;   // standard deviation, > 0
};

struct SinglePhotonModel {
  std::vector<SpectrumPeak> peaks;
  double delta_n = 1.0;  // n_V - n_H, nonzero
};

struct TwoPhotonModel {
  double K;           // frequency correlation, |K| <= 1
  double omega0;      // pump center frequency; enters phases only
  double delta_fwhm;  // pump spectral FWHM (nm)
  double C;           // single-photon frequency variance
  double delta_n;     // birefringence contrast
  double switchover = 199.0;  // T1: QP1 active span in lambda0 units
};

// Sequential plate schedule: QP1 runs first, QP2 after the switchover.
struct Schedule {
  double tau1;
  double tau2;
};
Schedule schedule_at(const TwoPhotonModel& m, double t);

void validate(const SinglePhotonModel& m);
void validate(const TwoPhotonModel& m);

// Decoherence factor sum_k w_k exp(i c_k dn t - sigma_k^2 dn^2 t^2 / 2),
// the closed-form Fourier transform of the Gaussian-mixture spectrum.
cxd kappa_single(const SinglePhotonModel& m, double t);

// Single-qubit dephasing process matrix for a decoherence factor kappa,
// |kappa| <= 1.
ProcessRep chi_single(cxd kappa);

// Fourier transform of the joint two-photon frequency distribution:
// G(t1, t2) = exp((i omega0 dn (t1+t2) - C dn^2 (t1^2+t2^2+2K t1 t2)) / 2).
cxd g_joint(const TwoPhotonModel& m, double tau1, double tau2);

// Two-qubit correlated dephasing process matrix assembled from
// kappa1 = G(t1,0), kappa2 = G(0,t2), kappa12 = G(t1,t2), Lambda12 = G(t1,-t2).
ProcessRep chi_two(const TwoPhotonModel& m, double tau1, double tau2);

// Local (single-photon marginal) dynamics with kappa1 = G(tau1, 0).
ProcessRep chi_local(const TwoPhotonModel& m, double tau1);

// Built-in model presets. Two-photon: cond_I..cond_IV (Table-III-style fit
// parameters). Single-photon: single_gauss (one Gaussian peak, monotone
// decoherence) and single_twopeak (two equal peaks with a coherence revival).
bool is_two_photon_preset(const std::string& name);
bool is_single_photon_preset(const std::string& name);
const TwoPhotonModel& two_photon_preset(const std::string& name);
const SinglePhotonModel& single_photon_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace nmk
