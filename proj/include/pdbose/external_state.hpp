#pragma once

// Reduced external density operator of the Mott state after tracing out the
// internal degrees of freedom. The operator lives on the N! permuted-Mott
// indices; its matrix there is assembled from products of internal overlaps:
// the coefficient of |x_pi><x_tau| is (1/N!) prod_k S(tau^-1(k), pi^-1(k)),
// which is Hermitian and positive semidefinite by construction.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tensor_basis.hpp"

namespace pdbose {

struct ExternalState {
  int N = 0;
  std::vector<std::uint64_t> support;  // flat index of x_pi, pi in lex order
  Eigen::MatrixXcd R;                  // N! x N! density matrix on the support
  double gamma = 0.0;                  // tr R^2
};

inline ExternalState reduced_external_state(const Eigen::MatrixXcd& S, const TensorSpace& ts) {
  if (ts.N != ts.L)
    throw std::invalid_argument("reduced_external_state: Mott filling requires N == L");
  if (S.rows() != ts.N || S.cols() != ts.N)
    throw std::invalid_argument("reduced_external_state: overlap matrix must be N x N");

  const auto nf = ts.perms.size();
  const int N = ts.N;
  ExternalState ext;
  ext.N = N;
  ext.support.reserve(nf);
  std::vector<int> mott(N);
  for (int k = 0; k < N; ++k) mott[k] = k + 1;
  for (std::size_t a = 0; a < nf; ++a)
    ext.support.push_back(permute_sites_flat(ts.perm_inv[a], mott, ts.L));

  ext.R.resize(nf, nf);
  const double inv_nf = 1.0 / static_cast<double>(nf);
  for (std::size_t a = 0; a < nf; ++a) {
    const auto& pia = ts.perm_inv[a];
    for (std::size_t b = 0; b < nf; ++b) {
      const auto& taub = ts.perm_inv[b];
      std::complex<double> prod = 1.0;
      for (int k = 0; k < N; ++k) prod *= S(taub[k], pia[k]);
      ext.R(a, b) = inv_nf * prod;
    }
  }
  ext.gamma = ext.R.squaredNorm();  // tr R^2 for Hermitian R
  return ext;
}

// Ryser's formula; used on the entrywise |S|^2 matrix, whose permanent over
// N! equals the purity of the reduced state.
inline double ryser_permanent(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw std::invalid_argument("ryser_permanent: square matrix required");
  if (n == 0) return 1.0;
  if (n > 24) throw std::invalid_argument("ryser_permanent: n too large");
  double total = 0.0;
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
      double rowsum = 0.0;
      for (int j = 0; j < n; ++j)
        if (mask & (1u << j)) rowsum += A(i, j);
      prod *= rowsum;
    }
    const int bits = __builtin_popcount(mask);
    total += (((n - bits) % 2) ? -1.0 : 1.0) * prod;
  }
  return total;
}

inline double purity_from_overlaps(const Eigen::MatrixXcd& S) {
  const int n = static_cast<int>(S.rows());
  Eigen::MatrixXd A = S.cwiseAbs2();
  double nf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  return ryser_permanent(A) / nf;
}

}  // namespace pdbose
