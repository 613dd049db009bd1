#pragma once

// Bose-Hubbard chain with hard walls: first-quantized action on the external
// tensor space, restriction to Young-basis blocks, dense diagonalization via
// LAPACK, and an independent second-quantized oracle for the bosonic sector.

#include <Eigen/Dense>
#include <lapacke.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "tensor_basis.hpp"
#include "young_block.hpp"

namespace pdbose {

struct HubbardParams {
  double J = 1.0;
  double U = 1.0;
  int L = 0;
  int N = 0;

  void validate() const {
    if (L < 2 || N < 1) throw std::invalid_argument("HubbardParams: L >= 2, N >= 1");
  }
};

// H = -J sum_slots (left+right hop) + (U/2) sum_i n_i(n_i-1).
inline SparseVec apply_hamiltonian(const HubbardParams& par, const SparseVec& v) {
  par.validate();
  SparseVec out;
  out.terms.reserve(v.terms.size() * (2 * par.N + 1));
  std::vector<int> occ(par.L);
  for (const auto& [idx, amp] : v.terms) {
    const auto sites = decode_flat(idx, par.L, par.N);
    std::fill(occ.begin(), occ.end(), 0);
    for (int s : sites) occ[s - 1]++;
    long w = 0;
    for (int n : occ) w += static_cast<long>(n) * (n - 1);
    if (w != 0) out.terms.emplace_back(idx, 0.5 * par.U * static_cast<double>(w) * amp);
    std::uint64_t p = 1;
    for (int k = 0; k < par.N; ++k) {
      if (sites[k] > 1) out.terms.emplace_back(idx - p, -par.J * amp);
      if (sites[k] < par.L) out.terms.emplace_back(idx + p, -par.J * amp);
      p *= static_cast<std::uint64_t>(par.L);
    }
  }
  out.sort_merge(0.0);
  return out;
}

// J/U-independent pieces of one sector: H^lam = -J * T + (U/2) * diag(Vdiag).
// The interaction is constant on each index orbit, so Vdiag is exact and
// diagonal in any orbit-supported basis.
struct SectorOperators {
  Partition lambda;
  Eigen::MatrixXd T;       // hopping matrix at amplitude +1 per bond
  Eigen::VectorXd Vdiag;   // sum_i n_i(n_i-1) per basis vector
};

inline SectorOperators sector_operators(const YoungBasisBlock& block, const TensorSpace& ts) {
  const int d = block.dim();
  SectorOperators ops{block.lambda, Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d)};

  for (int m = 0; m < d; ++m) {
    const auto orb = ts.orbit_of[block.vectors[m].terms.front().first];
    long w = 0;
    for (int n : ts.orbit_occ[orb]) w += static_cast<long>(n) * (n - 1);
    ops.Vdiag(m) = static_cast<double>(w);
  }

  std::vector<double> scratch(ts.dim, 0.0);
  std::vector<std::uint64_t> touched;
  for (int n = 0; n < d; ++n) {
    touched.clear();
    for (const auto& [idx, amp] : block.vectors[n].terms) {
      const auto sites = decode_flat(idx, ts.L, ts.N);
      std::uint64_t p = 1;
      for (int k = 0; k < ts.N; ++k) {
        if (sites[k] > 1) {
          if (scratch[idx - p] == 0.0) touched.push_back(idx - p);
          scratch[idx - p] += amp;
        }
        if (sites[k] < ts.L) {
          if (scratch[idx + p] == 0.0) touched.push_back(idx + p);
          scratch[idx + p] += amp;
        }
        p *= static_cast<std::uint64_t>(ts.L);
      }
    }
    for (int m = 0; m < d; ++m) {
      double s = 0;
      for (const auto& [i, a] : block.vectors[m].terms) s += a * scratch[i];
      ops.T(m, n) = s;
    }
    for (auto i : touched) scratch[i] = 0.0;
  }
  return ops;
}

inline Eigen::MatrixXd sector_hamiltonian(const SectorOperators& ops, double J, double U) {
  Eigen::MatrixXd H = (-J) * ops.T;
  H.diagonal() += 0.5 * U * ops.Vdiag;
  return H;
}

inline Eigen::MatrixXd sector_hamiltonian(const YoungBasisBlock& block, const HubbardParams& par,
                                          const TensorSpace& ts) {
  if (block.L != par.L || block.N != par.N)
    throw std::invalid_argument("sector_hamiltonian: block/params dimension mismatch");
  return sector_hamiltonian(sector_operators(block, ts), par.J, par.U);
}

struct SectorSpectrum {
  Partition lambda;
  Eigen::VectorXd energies;   // ascending
  Eigen::MatrixXd eigvecs;    // column alpha = coefficients over block vectors
};

// Dense symmetric eigensolve (divide and conquer). Deterministic output:
// ascending energies, degenerate clusters ordered by dominant-coefficient
// index, each eigenvector's largest-magnitude entry made positive.
inline SectorSpectrum diagonalize_sector(const Partition& lambda, const Eigen::MatrixXd& H) {
  const int d = static_cast<int>(H.rows());
  if (H.cols() != d) throw std::invalid_argument("diagonalize_sector: square matrix required");
  SectorSpectrum sp{lambda, Eigen::VectorXd(d), H};
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', d, sp.eigvecs.data(), d,
                                  sp.energies.data());
  if (info != 0)
    throw std::runtime_error("diagonalize_sector: dsyevd failed, info=" + std::to_string(info));

  std::vector<int> argmax(d);
  for (int a = 0; a < d; ++a) {
    int best = 0;
    for (int m = 1; m < d; ++m)
      if (std::abs(sp.eigvecs(m, a)) > std::abs(sp.eigvecs(best, a))) best = m;
    argmax[a] = best;
  }
  const double span = (d > 1) ? (sp.energies(d - 1) - sp.energies(0)) : 0.0;
  const double tol = 1e-12 * std::max(1.0, span);
  std::vector<int> order(d);
  for (int a = 0; a < d; ++a) order[a] = a;
  for (int a = 0; a < d;) {
    int b = a + 1;
    while (b < d && sp.energies(b) - sp.energies(b - 1) <= tol) ++b;
    std::stable_sort(order.begin() + a, order.begin() + b,
                     [&](int x, int y) { return argmax[x] < argmax[y]; });
    a = b;
  }
  Eigen::VectorXd e(d);
  Eigen::MatrixXd v(d, d);
  for (int a = 0; a < d; ++a) {
    e(a) = sp.energies(order[a]);
    v.col(a) = sp.eigvecs.col(order[a]);
    if (v(argmax[order[a]], a) < 0) v.col(a) = -v.col(a);
  }
  sp.energies = std::move(e);
  sp.eigvecs = std::move(v);
  return sp;
}

// Second-quantized occupation-basis diagonalization of the standard
// Bose-Hubbard chain; independent route to the lambda=(N) sector spectrum.
inline Eigen::VectorXd bosonic_fock_oracle(const HubbardParams& par) {
  par.validate();
  std::vector<std::vector<int>> basis;
  std::vector<int> occ(par.L, 0);
  auto gen = [&](auto&& self, int site, int rem) -> void {
    if (site == par.L - 1) {
      occ[site] = rem;
      basis.push_back(occ);
      return;
    }
    for (int n = rem; n >= 0; --n) {
      occ[site] = n;
      self(self, site + 1, rem - n);
    }
  };
  gen(gen, 0, par.N);

  const int D = static_cast<int>(basis.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < D; ++i) index[basis[i]] = i;

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D, D);
  for (int i = 0; i < D; ++i) {
    double w = 0;
    for (int n : basis[i]) w += static_cast<double>(n) * (n - 1);
    H(i, i) = 0.5 * par.U * w;
    for (int s = 0; s + 1 < par.L; ++s) {
      if (basis[i][s + 1] > 0) {  // a_dag_s a_{s+1}
        auto o = basis[i];
        const double amp = std::sqrt(static_cast<double>(o[s] + 1) * o[s + 1]);
        o[s]++;
        o[s + 1]--;
        H(index.at(o), i) += -par.J * amp;
      }
      if (basis[i][s] > 0) {  // a_dag_{s+1} a_s
        auto o = basis[i];
        const double amp = std::sqrt(static_cast<double>(o[s + 1] + 1) * o[s]);
        o[s + 1]++;
        o[s]--;
        H(index.at(o), i) += -par.J * amp;
      }
    }
  }
  Eigen::VectorXd energies(D);
  Eigen::MatrixXd evec = H;
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', D, evec.data(), D, energies.data());
  if (info != 0)
    throw std::runtime_error("bosonic_fock_oracle: dsyevd failed, info=" + std::to_string(info));
  return energies;
}

// ---- spectrum cache --------------------------------------------------------
// Layout: magic "PDBSPC01"; u32 N, L, rows; u32 row lengths; u64 d;
// f64 J, U; d energies; d*d eigenvector matrix, column-major binary64.

inline std::string spectrum_cache_name(const Partition& lam, int L, int N, double J, double U) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "_J%.12g_U%.12g.spc", J, U);
  return "spec_N" + std::to_string(N) + "_L" + std::to_string(L) + "_" + lam.label() + buf;
}

inline void write_spectrum(const std::filesystem::path& path, const SectorSpectrum& sp, int L,
                           int N, double J, double U) {
  detail::FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw std::runtime_error("cache: cannot open for writing: " + path.string());
  std::fwrite("PDBSPC01", 1, 8, f.get());
  detail::put_u32(f.get(), static_cast<std::uint32_t>(N));
  detail::put_u32(f.get(), static_cast<std::uint32_t>(L));
  detail::put_u32(f.get(), static_cast<std::uint32_t>(sp.lambda.num_rows()));
  for (int r = 0; r < sp.lambda.num_rows(); ++r)
    detail::put_u32(f.get(), static_cast<std::uint32_t>(sp.lambda.row(r)));
  const auto d = static_cast<std::uint64_t>(sp.energies.size());
  detail::put_u64(f.get(), d);
  detail::put_f64(f.get(), J);
  detail::put_f64(f.get(), U);
  std::fwrite(sp.energies.data(), 8, d, f.get());
  std::fwrite(sp.eigvecs.data(), 8, d * d, f.get());
}

inline SectorSpectrum read_spectrum(const std::filesystem::path& path, const Partition& lam,
                                    int L, int N, double J, double U) {
  detail::FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw std::runtime_error("cache: cannot open: " + path.string());
  char magic[8];
  if (std::fread(magic, 1, 8, f.get()) != 8 || std::string(magic, 8) != "PDBSPC01")
    throw std::runtime_error("cache: bad magic in " + path.string());
  if (static_cast<int>(detail::get_u32(f.get())) != N ||
      static_cast<int>(detail::get_u32(f.get())) != L)
    throw std::runtime_error("cache: size mismatch in " + path.string());
  const auto nrows = detail::get_u32(f.get());
  std::vector<int> rows(nrows);
  for (auto& r : rows) r = static_cast<int>(detail::get_u32(f.get()));
  if (!(Partition(rows) == lam))
    throw std::runtime_error("cache: sector mismatch in " + path.string());
  const auto d = detail::get_u64(f.get());
  if (detail::get_f64(f.get()) != J || detail::get_f64(f.get()) != U)
    throw std::runtime_error("cache: parameter mismatch in " + path.string());
  SectorSpectrum sp{lam, Eigen::VectorXd(d), Eigen::MatrixXd(d, d)};
  if (std::fread(sp.energies.data(), 8, d, f.get()) != d ||
      std::fread(sp.eigvecs.data(), 8, d * d, f.get()) != d * d)
    throw std::runtime_error("cache: truncated spectrum in " + path.string());
  return sp;
}

inline SectorSpectrum load_or_compute_spectrum(const std::filesystem::path& dir,
                                               const SectorOperators& ops, int L, int N,
                                               double J, double U) {
  if (dir.empty())
    return diagonalize_sector(ops.lambda, sector_hamiltonian(ops, J, U));
  const auto path = dir / spectrum_cache_name(ops.lambda, L, N, J, U);
  if (std::filesystem::exists(path)) {
    try {
      return read_spectrum(path, ops.lambda, L, N, J, U);
    } catch (const std::runtime_error&) {
      // rebuild below
    }
  }
  auto sp = diagonalize_sector(ops.lambda, sector_hamiltonian(ops, J, U));
  std::filesystem::create_directories(dir);
  write_spectrum(path, sp, L, N, J, U);
  return sp;
}

}  // namespace pdbose
