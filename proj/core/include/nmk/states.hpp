// Polarization state catalog: cardinal single-qubit states, Bell states and
// the entangled S states, plus the state-pair tables used by the witness
// scans.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nmk/matrix.hpp"

namespace nmk {

// |H>, |V>, |+>, |->, |R> = (|H>+i|V>)/sqrt2, |L> = (|H>-i|V>)/sqrt2
std::vector<cxd> ket(const std::string& label);

// Single-qubit density matrix from one of H, V, +, -, R, L.
DensityMatrix state_1q(const std::string& label);

// Two-qubit density matrix: product labels ("HH", "H+", "RR", ...), Bell
// states ("phi+", "phi-", "psi+", "psi-") and entangled "S1".."S4".
DensityMatrix state_2q(const std::string& label);

// The 15 single-qubit witness pairs, catalog order.
const std::vector<std::pair<std::string, std::string>>& table_one_pairs();

// The 24 two-qubit witness pairs, catalog order.
const std::vector<std::pair<std::string, std::string>>& table_two_pairs();

}  // namespace nmk
