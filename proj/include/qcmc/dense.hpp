#pragma once

#include <Eigen/Dense>

#include "qcmc/hamiltonian.hpp"
#include "qcmc/product_formula.hpp"

namespace qcmc {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Dense helpers for system registers of at most this many qubits.
constexpr int kDenseMaxQubits = 12;

// Basis index bit (a-1) carries qubit a.
Mat to_matrix(const PauliString& p);
Mat to_matrix(const PauliSum& s);
Mat hamiltonian_matrix(const Hamiltonian& h);
Mat rotation_matrix(const Rotation& r);
Mat sequence_matrix(const RotationSequence& s, int n);
// e^{-i H t} for Hermitian H.
Mat expm_hermitian(const Mat& H, double t);
Vec basis_vector(const BasisState& s);

}  // namespace qcmc
