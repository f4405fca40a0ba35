#pragma once

#include <string>

#include "json.hpp"

#include "qcmc/circuit.hpp"
#include "qcmc/hamiltonian.hpp"
#include "qcmc/noise.hpp"
#include "qcmc/summation.hpp"

namespace qcmc {

using json = nlohmann::json;

// {"n": 4, "terms": [{"coeff": -1.0, "pauli": "YXYI"}, ...]}
json hamiltonian_to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const json& j);

// {"type": "fermi-hubbard", "sites": 3, "J": 2, "U": 4} or
// {"type": "heisenberg", "sites": 6, "J": 1, "h": 1}.
LatticeSpec lattice_from_json(const json& j);
json lattice_to_json(const LatticeSpec& s);

json formula_to_json(const FormulaSpec& f);

// {"default_two_qubit": {"model": "depolarizing", "p": 3e-4},
//  "single_qubit": {...}, "s1_noise_sites": 14,
//  "overrides": [{"location": 5, "rates": {"XX": 0.01}}]}
// A channel is {"model": "depolarizing", "p": ...} or {"rates": {...}}.
NoiseModel noise_from_json(const json& j);
json noise_to_json(const NoiseModel& m);

// Product-state literal ("+-0"), or {"occupied": [1, 4, 5], "qubits": 6}
// for Hubbard orbitals (occupied -> "+", empty -> "-").
StateSpec state_from_json(const json& j, int n);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qcmc
