#pragma once

// Sector decomposition of the reduced Mott state. Because the state commutes
// with every permutation, it is block diagonal over sectors with nu_lam equal
// copies per sector; projecting onto the single constructed block and
// reweighting by nu_lam therefore captures the sector exactly. Only block
// vectors built from the Mott orbit can overlap the state, so the block-basis
// matrix of rho is compressed to a nu x nu core.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

#include "external_state.hpp"
#include "hubbard.hpp"
#include "partition.hpp"
#include "tensor_basis.hpp"
#include "young_block.hpp"

namespace pdbose {

struct SectorState {
  Partition lambda;
  double p = 0.0;            // sector weight p_lam
  Eigen::MatrixXcd rho;      // d x d in the eigenbasis, unit trace (empty when p ~ 0)
  double gamma_lambda = 0.0; // tr[(rho^lam)^2]
  double ipr = 0.0;          // sum_alpha |rho^lam_aa|^2 at this J/U
};

// Evaluation of the Mott-orbit block vectors on the permuted-Mott support:
// rows identify which block vectors carry the state, U holds their values at
// the support indices (nu x N!).
struct MottSectorBasis {
  Partition lambda;
  std::vector<int> rows;
  Eigen::MatrixXd U;
};

inline MottSectorBasis make_mott_sector_basis(const YoungBasisBlock& block, const TensorSpace& ts,
                                              const std::vector<std::uint64_t>& support) {
  MottSectorBasis mb;
  mb.lambda = block.lambda;
  const auto mott_orbit = ts.orbit_of[ts.mott_index()];
  for (int m = 0; m < block.dim(); ++m)
    if (ts.orbit_of[block.vectors[m].terms.front().first] == mott_orbit) mb.rows.push_back(m);
  mb.U.resize(static_cast<int>(mb.rows.size()), static_cast<int>(support.size()));
  for (std::size_t r = 0; r < mb.rows.size(); ++r)
    for (std::size_t a = 0; a < support.size(); ++a)
      mb.U(r, a) = block.vectors[mb.rows[r]].at(support[a]);
  return mb;
}

// J/U-independent sector data: weight, purity, and the compressed block-basis
// core of rho (nu x nu).
struct SectorWeights {
  Partition lambda;
  double p = 0.0;
  double gamma_lambda = 0.0;
  Eigen::MatrixXcd core;     // <lam,m| rho |lam,n> on the Mott rows
  std::vector<int> rows;
};

inline SectorWeights compute_sector_weights(const ExternalState& ext, const MottSectorBasis& mb) {
  SectorWeights w;
  w.lambda = mb.lambda;
  w.rows = mb.rows;
  const auto nu = static_cast<double>(count_standard_tableaux(mb.lambda));
  const Eigen::MatrixXcd Uc = mb.U.cast<std::complex<double>>();
  w.core = Uc * ext.R * Uc.transpose();
  w.p = nu * w.core.trace().real();
  if (w.p > 1e-14) {
    const Eigen::MatrixXcd scaled = (nu / w.p) * w.core;
    w.gamma_lambda = (scaled * scaled).trace().real();
  }
  return w;
}

// Diagonal of rho^lam in the eigenbasis of one spectrum.
inline Eigen::VectorXd sector_rho_diagonal(const SectorWeights& w, const SectorSpectrum& sp) {
  const int d = static_cast<int>(sp.eigvecs.rows());
  const int nu = static_cast<int>(w.rows.size());
  Eigen::VectorXd diag(d);
  if (w.p <= 1e-14) {
    diag.setZero();
    return diag;
  }
  Eigen::MatrixXcd Csub(nu, d);
  for (int r = 0; r < nu; ++r)
    Csub.row(r) = sp.eigvecs.row(w.rows[r]).cast<std::complex<double>>();
  const Eigen::MatrixXcd rot =
      ((static_cast<double>(count_standard_tableaux(w.lambda)) / w.p) * w.core) * Csub;
  for (int a = 0; a < d; ++a)
    diag(a) = (Csub.col(a).transpose() * rot.col(a))(0, 0).real();
  return diag;
}

inline double ipr_from_diagonal(const Eigen::VectorXd& diag) {
  double s = 0;
  for (int i = 0; i < diag.size(); ++i) s += diag(i) * diag(i);
  return s;
}

// Full rho^lam in the eigenbasis (d x d complex).
inline Eigen::MatrixXcd sector_rho_eigen(const SectorWeights& w, const SectorSpectrum& sp) {
  const int d = static_cast<int>(sp.eigvecs.rows());
  const int nu = static_cast<int>(w.rows.size());
  if (w.p <= 1e-14) return Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd Csub(nu, d);
  for (int r = 0; r < nu; ++r)
    Csub.row(r) = sp.eigvecs.row(w.rows[r]).cast<std::complex<double>>();
  const Eigen::MatrixXcd scaled =
      (static_cast<double>(count_standard_tableaux(w.lambda)) / w.p) * w.core;
  return Csub.transpose() * scaled * Csub;
}

inline std::vector<SectorState> sector_decompose(const ExternalState& ext,
                                                 const std::vector<MottSectorBasis>& bases,
                                                 const std::vector<SectorSpectrum>& spectra) {
  if (bases.size() != spectra.size())
    throw std::invalid_argument("sector_decompose: bases/spectra length mismatch");
  std::vector<SectorState> out;
  double psum = 0.0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (!(bases[i].lambda == spectra[i].lambda))
      throw std::invalid_argument("sector_decompose: sector order mismatch");
    auto w = compute_sector_weights(ext, bases[i]);
    SectorState st;
    st.lambda = w.lambda;
    st.p = w.p;
    st.gamma_lambda = w.gamma_lambda;
    if (w.p > 1e-14) {
      st.rho = sector_rho_eigen(w, spectra[i]);
      st.ipr = ipr_from_diagonal(st.rho.diagonal().real());
    }
    psum += st.p;
    out.push_back(std::move(st));
  }
  if (std::abs(psum - 1.0) > 1e-8)
    throw std::runtime_error("sector_decompose: sector weights sum to " + std::to_string(psum) +
                             "; basis incomplete");
  return out;
}

}  // namespace pdbose
