#include "qcmc/dense.hpp"

#include <bit>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qcmc {

namespace {

void check_size(int n) {
  if (n > kDenseMaxQubits) throw std::invalid_argument("dense matrices capped at " + std::to_string(kDenseMaxQubits) + " qubits");
}

}  // namespace

Mat to_matrix(const PauliString& p) {
  check_size(p.n());
  const Eigen::Index dim = Eigen::Index(1) << p.n();
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const int base = p.phase_exp() + std::popcount(x & z);
  Mat m = Mat::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    int e = base + 2 * std::popcount(z & static_cast<std::uint64_t>(j));
    m(static_cast<Eigen::Index>(static_cast<std::uint64_t>(j) ^ x), j) = i_pow(e);
  }
  return m;
}

Mat to_matrix(const PauliSum& s) {
  check_size(s.n());
  const Eigen::Index dim = Eigen::Index(1) << s.n();
  Mat m = Mat::Zero(dim, dim);
  for (const auto& [p, c] : s.terms()) m += c * to_matrix(p);
  return m;
}

Mat hamiltonian_matrix(const Hamiltonian& h) { return to_matrix(h.as_sum()); }

Mat rotation_matrix(const Rotation& r) {
  const Eigen::Index dim = Eigen::Index(1) << r.axis.n();
  return std::cos(r.angle) * Mat::Identity(dim, dim) - cplx(0.0, std::sin(r.angle)) * to_matrix(r.axis);
}

Mat sequence_matrix(const RotationSequence& s, int n) {
  check_size(n);
  const Eigen::Index dim = Eigen::Index(1) << n;
  Mat m = Mat::Identity(dim, dim);
  for (const auto& r : s.rotations) m = rotation_matrix(r) * m;
  return m;
}

Mat expm_hermitian(const Mat& H, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Vec phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Vec basis_vector(const BasisState& s) {
  check_size(s.n());
  Vec v = Vec::Zero(Eigen::Index(1) << s.n());
  v(static_cast<Eigen::Index>(s.index())) = 1.0;
  return v;
}

}  // namespace qcmc
