// Non-Markovianity measures over a dynamics family: accumulated robustness
// of the intermediate maps, trace-distance revival accounting, and the
// short-interval Choi trace-norm measure.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nmk/dephasing.hpp"
#include "nmk/matrix.hpp"
#include "nmk/process.hpp"
#include "nmk/sdp.hpp"

namespace nmk {

struct DynamicsFamily {
  std::function<ProcessRep(double)> evaluator;  // total map from 0 to t
  double t_max = 0.0;
  std::vector<double> grid;  // strictly increasing sample times in [0, t_max]
};

DynamicsFamily single_photon_family(const SinglePhotonModel& m, double t_max, int points = 65);
// t_max <= 0 selects the full two-plate evolution 2 * switchover.
DynamicsFamily two_photon_family(const TwoPhotonModel& m, double t_max = -1.0, int points = 65);
DynamicsFamily two_photon_local_family(const TwoPhotonModel& m, double t_max = -1.0,
                                       int points = 65);

enum class MeasureKind { NBeta, NBlp, NRhp };

struct MeasureReport {
  MeasureKind kind;
  double value = 0.0;
  int grid_size = 0;
  std::string discretization_note;
};

struct MeasureOptions {
  double rel_tol = 1e-3;  // grid-refinement stop on relative change
  int max_points = 1025;  // refinement cap (2^10 intervals)
  sdp::SolverOptions solver;
};

// Trapezoidal quadrature of the robustness of the intermediate map from each
// division point t to t2; non-invertible division points are excluded and
// flagged in the note.
MeasureReport n_beta(const DynamicsFamily& f, double t2, const MeasureOptions& opts = {});

// Trace-distance trajectory of an evolving state pair on the family grid.
std::vector<std::pair<double, double>> d_trace_dynamics(const DynamicsFamily& f,
                                                        const DensityMatrix& rho1,
                                                        const DensityMatrix& rho2);

// Closed-form trace distance of the Bell pair under the two-photon model:
// exp[-dn^2 C (t1^2 + t2^2 - 2|K| t1 t2) / 2].
double d_closed_form(const TwoPhotonModel& m, double tau1, double tau2);

// Sum of positive trace-distance increments over the (refined) grid.
MeasureReport n_blp(const DynamicsFamily& f, const DensityMatrix& rho1,
                    const DensityMatrix& rho2, const MeasureOptions& opts = {});

struct PairSearchResult {
  std::string label1, label2;
  MeasureReport report;
};

// Exhaustive evaluation over a configured grid of initial-state pairs:
// antipodal Bloch pairs for one qubit (bloch_grid x bloch_grid angles), the
// Bell + product catalog for two qubits. Returns the maximizer found (a
// lower bound on the BLP measure).
PairSearchResult blp_pair_search(const DynamicsFamily& f, int bloch_grid = 12,
                                 const MeasureOptions& opts = {});

// Accumulated excess Choi trace norm of the grid-step intermediate maps.
MeasureReport n_rhp(const DynamicsFamily& f, const MeasureOptions& opts = {});

// CSV with header "t_lambda0,value".
void write_series_csv(std::ostream& os, const std::vector<std::pair<double, double>>& series);

}  // namespace nmk
