#pragma once

// Independent reference implementations used only by the tests. Nothing in
// here calls into the library's own matrix helpers.

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat single(char op) {
  Mat m(2, 2);
  const cplx i(0, 1);
  switch (op) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad op");
  }
  return m;
}

// Literal without phase prefix; qubit 1 is the least significant bit, so the
// Kronecker product runs from the last character down to the first.
inline Mat kron_literal(const std::string& ops) {
  Mat m = Mat::Identity(1, 1);
  for (char c : ops) {
    Mat next = Eigen::kroneckerProduct(single(c), m).eval();
    m = next;
  }
  return m;
}

inline Mat expm(const Mat& a) { return a.exp(); }

// Fermionic annihilation operators on n modes built from explicit
// occupation-number matrices: mode q corresponds to bit q-1 and the sign is
// (-1)^{number of occupied modes before q}.
inline std::vector<Mat> annihilators(int n) {
  const int dim = 1 << n;
  std::vector<Mat> c;
  for (int q = 0; q < n; ++q) {
    Mat m = Mat::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
      if (!((s >> q) & 1)) continue;
      int before = 0;
      for (int k = 0; k < q; ++k) before += (s >> k) & 1;
      m(s ^ (1 << q), s) = (before % 2) ? -1.0 : 1.0;
    }
    c.push_back(m);
  }
  return c;
}

inline std::string random_literal(int n, std::mt19937_64& g) {
  static const char ops[] = "IXYZ";
  std::string s;
  for (int a = 0; a < n; ++a) s += ops[g() % 4];
  return s;
}

inline double spectral_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace oracle
