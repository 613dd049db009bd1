#pragma once

// Few-body observables inside a sector block. Two families:
//  - explicit density correlators N_i N_j, diagonal in the tensor basis and
//    therefore diagonal in the Young basis with orbit-wise integer entries;
//  - the operator-averaged squared matrix elements of k-body observables,
//    which reduce to Frobenius norms of products of reshaped eigenvectors
//    times the squared subset count C(N,k)^2.
// The averaged quantities admit exact contraction identities (through the
// reduced block projector) that avoid touching all pairs; both routes are
// implemented and cross-checked in the tests.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hubbard.hpp"
#include "tensor_basis.hpp"
#include "young_block.hpp"

namespace pdbose {

// Squared matrix elements of an observable in a sector eigenbasis. Either an
// explicit density correlator N_i N_j (sites stored) or the operator average
// over an orthonormal basis of k-body observables (order stored).
struct ObservableMatrix {
  enum class Kind { Explicit, OperatorAveraged };
  Partition lambda;
  Eigen::MatrixXd M;
  Kind kind = Kind::Explicit;
  int site_i = 0;
  int site_j = 0;
  int korder = 0;
};

inline std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// Young-basis representation of N_i N_j (sites 1..L): diagonal with entries
// n_i * n_j of each vector's orbit occupations.
inline Eigen::VectorXd correlator_diag_young(const YoungBasisBlock& block, const TensorSpace& ts,
                                             int site_i, int site_j) {
  if (site_i < 1 || site_i > ts.L || site_j < 1 || site_j > ts.L)
    throw std::invalid_argument("correlator_diag_young: site out of range");
  Eigen::VectorXd diag(block.dim());
  for (int m = 0; m < block.dim(); ++m) {
    const auto& occ = ts.orbit_occ[ts.orbit_of[block.vectors[m].terms.front().first]];
    diag(m) = static_cast<double>(occ[site_i - 1]) * occ[site_j - 1];
  }
  return diag;
}

// Rotation of a Young-diagonal observable into the eigenbasis (unsquared
// matrix elements; the time-domain evolution needs these raw).
inline Eigen::MatrixXd correlator_eigen(const Eigen::VectorXd& diag_young,
                                        const SectorSpectrum& sp) {
  Eigen::MatrixXd scaled = diag_young.asDiagonal() * sp.eigvecs;
  return sp.eigvecs.transpose() * scaled;
}

// |(N_i N_j)_{ab}|^2 in the sector eigenbasis.
inline ObservableMatrix density_correlator_elements(int site_i, int site_j,
                                                    const SectorSpectrum& sp,
                                                    const YoungBasisBlock& block,
                                                    const TensorSpace& ts) {
  ObservableMatrix out;
  out.lambda = block.lambda;
  out.kind = ObservableMatrix::Kind::Explicit;
  out.site_i = site_i;
  out.site_j = site_j;
  Eigen::MatrixXd raw = correlator_eigen(correlator_diag_young(block, ts, site_i, site_j), sp);
  out.M = raw.cwiseProduct(raw);
  return out;
}

namespace detail {

// Stacked reshape of eigenvectors alpha0..alpha0+t-1: row block j holds the
// dA x dB matrix of eigenstate alpha0+j (A side = first k slots).
inline Eigen::MatrixXd stacked_reshapes(const SectorSpectrum& sp, const YoungBasisBlock& block,
                                        int dA, int dB, int alpha0, int t) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<long>(t) * dA, dB);
  for (int m = 0; m < block.dim(); ++m) {
    for (const auto& [idx, amp] : block.vectors[m].terms) {
      const long a = static_cast<long>(idx % static_cast<std::uint64_t>(dA));
      const long b = static_cast<long>(idx / static_cast<std::uint64_t>(dA));
      for (int j = 0; j < t; ++j) {
        const double c = sp.eigvecs(m, alpha0 + j);
        if (c != 0.0) S(static_cast<long>(j) * dA + a, b) += c * amp;
      }
    }
  }
  return S;
}

inline void split_dims(const YoungBasisBlock& block, int k, int& dA, int& dB) {
  if (k < 1 || k >= block.N)
    throw std::invalid_argument("subsystem split: need 1 <= k < N");
  dA = static_cast<int>(pow_u64(block.L, k));
  dB = static_cast<int>(pow_u64(block.L, block.N - k));
}

}  // namespace detail

// Full matrix of averaged squared k-body matrix elements,
//   B(a,b) = C(N,k)^2 * || M_a M_b^T ||_F^2 ,
// diagonal included. Tiled so memory stays bounded at the largest sectors.
inline Eigen::MatrixXd kbody_avg_sq_matrix(const SectorSpectrum& sp, const YoungBasisBlock& block,
                                           int k, int tile = 64) {
  int dA, dB;
  detail::split_dims(block, k, dA, dB);
  const int d = block.dim();
  const double c2 = static_cast<double>(binom(block.N, k) * binom(block.N, k));
  Eigen::MatrixXd B(d, d);
  for (int I = 0; I < d; I += tile) {
    const int tI = std::min(tile, d - I);
    Eigen::MatrixXd SI = detail::stacked_reshapes(sp, block, dA, dB, I, tI);
    for (int J = 0; J <= I; J += tile) {
      const int tJ = std::min(tile, d - J);
      Eigen::MatrixXd SJ = (J == I) ? SI : detail::stacked_reshapes(sp, block, dA, dB, J, tJ);
      Eigen::MatrixXd P(static_cast<long>(tI) * dA, static_cast<long>(tJ) * dA);
      P.noalias() = SI * SJ.transpose();
      for (int i = 0; i < tI; ++i)
        for (int j = 0; j < tJ; ++j) {
          if (J == I && j > i) continue;
          const double val =
              c2 * P.block(static_cast<long>(i) * dA, static_cast<long>(j) * dA, dA, dA)
                       .squaredNorm();
          B(I + i, J + j) = val;
          B(J + j, I + i) = val;
        }
    }
  }
  return B;
}

// Operator average over an orthonormal Hermitian basis of k-body observables,
// wrapped with provenance. Diagonal entries are present; fluctuation sums
// exclude them downstream.
inline ObservableMatrix averaged_offdiagonal(const SectorSpectrum& sp,
                                             const YoungBasisBlock& block, int k,
                                             int tile = 64) {
  ObservableMatrix out;
  out.lambda = block.lambda;
  out.kind = ObservableMatrix::Kind::OperatorAveraged;
  out.korder = k;
  out.M = kbody_avg_sq_matrix(sp, block, k, tile);
  return out;
}

// Diagonal only: C(N,k)^2 * || M_a M_a^T ||_F^2 per eigenstate.
inline Eigen::VectorXd kbody_avg_sq_diag(const SectorSpectrum& sp, const YoungBasisBlock& block,
                                         int k, int tile = 64) {
  int dA, dB;
  detail::split_dims(block, k, dA, dB);
  const int d = block.dim();
  const double c2 = static_cast<double>(binom(block.N, k) * binom(block.N, k));
  Eigen::VectorXd diag(d);
  for (int I = 0; I < d; I += tile) {
    const int tI = std::min(tile, d - I);
    Eigen::MatrixXd SI = detail::stacked_reshapes(sp, block, dA, dB, I, tI);
    for (int i = 0; i < tI; ++i) {
      auto Mi = SI.middleRows(static_cast<long>(i) * dA, dA);
      Eigen::MatrixXd G(dA, dA);
      G.noalias() = Mi * Mi.transpose();
      diag(I + i) = c2 * G.squaredNorm();
    }
  }
  return diag;
}

// Reduced Gram of the whole block: Q = sum_m tr_A |m><m|, a dB x dB matrix.
// Independent of J/U; its squared norm times C(N,k)^2 equals the sum of the
// full averaged matrix over all pairs including the diagonal.
inline Eigen::MatrixXd block_reduced_gram(const YoungBasisBlock& block, int k) {
  int dA, dB;
  detail::split_dims(block, k, dA, dB);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dB, dB);
  std::vector<std::vector<std::pair<long, double>>> rows(dA);
  for (const auto& v : block.vectors) {
    for (auto& r : rows) r.clear();
    for (const auto& [idx, amp] : v.terms)
      rows[idx % static_cast<std::uint64_t>(dA)].emplace_back(
          static_cast<long>(idx / static_cast<std::uint64_t>(dA)), amp);
    for (const auto& r : rows)
      for (const auto& [b1, a1] : r)
        for (const auto& [b2, a2] : r) Q(b1, b2) += a1 * a2;
  }
  return Q;
}

inline double kbody_avg_sq_total(const YoungBasisBlock& block, int k) {
  const double c2 = static_cast<double>(binom(block.N, k) * binom(block.N, k));
  return c2 * block_reduced_gram(block, k).squaredNorm();
}

// Pure-state off-diagonal contraction: for weights w_a >= 0,
//   sum_{a != b} w_a w_b B(a,b)
//     = C^2 ( || sum_a w_a M_a^T M_a ||_F^2 - sum_a w_a^2 ||M_a M_a^T||_F^2 ),
// evaluated with one accumulated Gram instead of all pairs.
inline double kbody_avg_sq_pure_weighted(const SectorSpectrum& sp, const YoungBasisBlock& block,
                                         int k, const Eigen::VectorXd& w, int tile = 64) {
  int dA, dB;
  detail::split_dims(block, k, dA, dB);
  const int d = block.dim();
  if (w.size() != d) throw std::invalid_argument("kbody_avg_sq_pure_weighted: weight size");
  const double c2 = static_cast<double>(binom(block.N, k) * binom(block.N, k));
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(dB, dB);
  double diag_term = 0.0;
  for (int I = 0; I < d; I += tile) {
    const int tI = std::min(tile, d - I);
    Eigen::MatrixXd SI = detail::stacked_reshapes(sp, block, dA, dB, I, tI);
    Eigen::MatrixXd SIw = SI;
    for (int i = 0; i < tI; ++i) {
      const double wv = w(I + i);
      auto Mi = SI.middleRows(static_cast<long>(i) * dA, dA);
      Eigen::MatrixXd G(dA, dA);
      G.noalias() = Mi * Mi.transpose();
      diag_term += wv * wv * G.squaredNorm();
      SIw.middleRows(static_cast<long>(i) * dA, dA) *= std::sqrt(wv);
    }
    W.noalias() += SIw.transpose() * SIw;
  }
  return c2 * (W.squaredNorm() - diag_term);
}

// Band profile of a nonnegative matrix: per row, treat the entries as an
// unnormalized distribution over the column index and take the RMS offset
// from the row's own index, then average over rows with nonzero weight.
// The offset from the row index (rather than the distribution mean) is what
// makes a single neighbor pair report width 1 instead of 0. An optional
// energy list switches the offset to E_b - E_a.
struct BandProfile {
  double W = 0.0;
  std::vector<double> per_alpha_sigma;  // one entry per row with nonzero weight
  bool all_zero = false;
};

inline BandProfile bandwidth_profile(const Eigen::MatrixXd& M,
                                     const Eigen::VectorXd* energies = nullptr) {
  const int d = static_cast<int>(M.rows());
  if (M.cols() != d) throw std::invalid_argument("bandwidth_profile: square matrix required");
  if (energies && energies->size() != d)
    throw std::invalid_argument("bandwidth_profile: energy list size mismatch");
  BandProfile out;
  double acc = 0.0;
  for (int a = 0; a < d; ++a) {
    double wsum = 0.0, msum = 0.0;
    for (int b = 0; b < d; ++b) {
      const double f = M(a, b);
      if (f < 0) throw std::invalid_argument("bandwidth_profile: negative entry");
      const double off = energies ? ((*energies)(b) - (*energies)(a))
                                  : static_cast<double>(b - a);
      wsum += f;
      msum += f * off * off;
    }
    if (wsum > 0) {
      const double sigma = std::sqrt(msum / wsum);
      out.per_alpha_sigma.push_back(sigma);
      acc += sigma;
    }
  }
  if (out.per_alpha_sigma.empty()) {
    out.all_zero = true;
    return out;
  }
  out.W = acc / static_cast<double>(out.per_alpha_sigma.size());
  return out;
}

// Off-diagonal band profile of an observable matrix: the diagonal is removed
// before the row distributions are formed.
inline BandProfile bandwidth(const ObservableMatrix& om,
                             const Eigen::VectorXd* energies = nullptr) {
  Eigen::MatrixXd M = om.M;
  M.diagonal().setZero();
  return bandwidth_profile(M, energies);
}

// Mean off-diagonal weight per eigenstate: sum_{a != b} M(a,b) / d.
inline double offdiag_strength(const Eigen::MatrixXd& M) {
  const int d = static_cast<int>(M.rows());
  return (M.sum() - M.diagonal().sum()) / static_cast<double>(d);
}

inline double strength(const ObservableMatrix& om) { return offdiag_strength(om.M); }

}  // namespace pdbose
