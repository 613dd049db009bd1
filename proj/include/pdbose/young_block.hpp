#pragma once

// Projector unit onto one Gelfand-Tsetlin row of a sector and the
// construction of one orthonormal Young-basis block per sector.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "tensor_basis.hpp"
#include "young_rep.hpp"

namespace pdbose {

// e^lam_{11} = (nu/N!) sum_pi D(pi)_{11} pi, the rank-d_lam unit picking the
// first standard-tableau row of the sector. Coefficients are cached per
// permutation in the lexicographic order of TensorSpace::perms.
class YoungUnit {
public:
  YoungUnit(const OrthogonalRep& rep, const TensorSpace& ts) : ts_(&ts) {
    const double nu_over_fact =
        static_cast<double>(rep.dim()) / static_cast<double>(factorial(ts.N));
    c_.reserve(ts.perms.size());
    for (const auto& pi : ts.perms) c_.push_back(nu_over_fact * rep.entry11(pi));
  }

  double coeff(std::size_t perm_idx) const { return c_[perm_idx]; }

  // e |x> for a single basis index; sorted, merged, exact zeros dropped.
  std::vector<std::pair<std::uint64_t, double>> apply_to_index(std::uint64_t flat) const {
    const auto sites = decode_flat(flat, ts_->L, ts_->N);
    SparseVec v;
    v.terms.reserve(c_.size());
    for (std::size_t p = 0; p < c_.size(); ++p)
      v.terms.emplace_back(permute_sites_flat(ts_->perm_inv[p], sites, ts_->L), c_[p]);
    v.sort_merge(1e-14);
    return std::move(v.terms);
  }

  SparseVec apply(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [idx, amp] : v.terms) {
      auto part = apply_to_index(idx);
      for (auto& [i, a] : part) out.terms.emplace_back(i, amp * a);
    }
    out.sort_merge(0.0);
    return out;
  }

private:
  const TensorSpace* ts_;
  std::vector<double> c_;
};

inline SparseVec apply_young_unit(const Partition& lam, const SparseVec& v, const TensorSpace& ts) {
  OrthogonalRep rep(lam);
  return YoungUnit(rep, ts).apply(v);
}

struct YoungBasisBlock {
  Partition lambda;
  int L = 0, N = 0;
  std::vector<SparseVec> vectors;  // d_lam orthonormal vectors

  int dim() const { return static_cast<int>(vectors.size()); }
};

// One orthonormal basis of the (1,1) block of the sector, built orbit by
// orbit. The interaction-diagonal structure makes every vector live inside a
// single S_N orbit of indices, and the rank of the unit on an orbit is the
// Kostka number of its occupation list, so each orbit contributes exactly
// that many vectors. Scanning flat indices in ascending order inside each
// orbit reproduces the global canonical-order Gram-Schmidt result (vectors
// from different orbits have disjoint index support, hence are exactly
// orthogonal and never couple through Gram-Schmidt).
inline YoungBasisBlock build_young_block(const OrthogonalRep& rep, const TensorSpace& ts) {
  const std::uint64_t d_expect = count_semistandard_tableaux(rep.shape(), ts.L);
  YoungBasisBlock block{rep.shape(), ts.L, ts.N, {}};
  if (d_expect == 0)
    throw std::invalid_argument("build_young_block: sector has zero dimension for this L");
  block.vectors.reserve(d_expect);

  const YoungUnit unit(rep, ts);
  const double accept_thresh = 1e-8;

  std::vector<double> cand, scratch;
  for (std::uint32_t orb = 0; orb < ts.orbit_members.size(); ++orb) {
    const auto& members = ts.orbit_members[orb];
    const std::uint64_t quota = kostka_number(rep.shape(), ts.orbit_occ[orb]);
    if (quota == 0) continue;

    // accepted vectors of this orbit, dense over the member list
    std::vector<std::vector<double>> acc;
    auto pos_of = [&](std::uint64_t idx) {
      return static_cast<std::size_t>(
          std::lower_bound(members.begin(), members.end(), idx) - members.begin());
    };

    for (std::uint64_t m_idx : members) {
      if (acc.size() == quota) break;
      auto terms = unit.apply_to_index(m_idx);
      cand.assign(members.size(), 0.0);
      for (const auto& [i, a] : terms) cand[pos_of(i)] = a;
      // classical Gram-Schmidt, run twice for stability
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& prev : acc) {
          double ov = 0;
          for (std::size_t j = 0; j < cand.size(); ++j) ov += prev[j] * cand[j];
          for (std::size_t j = 0; j < cand.size(); ++j) cand[j] -= ov * prev[j];
        }
      double nrm2 = 0;
      for (double x : cand) nrm2 += x * x;
      if (std::sqrt(nrm2) <= accept_thresh) continue;
      const double inv = 1.0 / std::sqrt(nrm2);
      for (double& x : cand) x *= inv;
      // deterministic sign: first nonzero component positive
      for (double x : cand) {
        if (std::abs(x) > 1e-12) {
          if (x < 0)
            for (double& y : cand) y = -y;
          break;
        }
      }
      acc.push_back(cand);
    }
    if (acc.size() != quota)
      throw std::runtime_error("build_young_block: orbit rank deficit in sector " +
                               rep.shape().label());

    for (const auto& dense : acc) {
      SparseVec v;
      for (std::size_t j = 0; j < dense.size(); ++j)
        if (dense[j] != 0.0) v.terms.emplace_back(members[j], dense[j]);
      block.vectors.push_back(std::move(v));
    }
  }

  if (block.vectors.size() != d_expect)
    throw std::runtime_error("build_young_block: reached " +
                             std::to_string(block.vectors.size()) + " of " +
                             std::to_string(d_expect) + " vectors in sector " +
                             rep.shape().label());
  return block;
}

inline YoungBasisBlock build_young_block(const Partition& lam, int L, int N) {
  OrthogonalRep rep(lam);
  TensorSpace ts(L, N);
  return build_young_block(rep, ts);
}

// ---- binary cache ----------------------------------------------------------
// Layout (little-endian): magic "PDBYBC01"; u32 N, L, row count; u32 row
// lengths; u64 d; then per vector u64 nnz followed by (u64 index, f64
// amplitude) pairs sorted by index.

namespace detail {
inline void put_u32(std::FILE* f, std::uint32_t v) { std::fwrite(&v, 4, 1, f); }
inline void put_u64(std::FILE* f, std::uint64_t v) { std::fwrite(&v, 8, 1, f); }
inline void put_f64(std::FILE* f, double v) { std::fwrite(&v, 8, 1, f); }
inline std::uint32_t get_u32(std::FILE* f) {
  std::uint32_t v;
  if (std::fread(&v, 4, 1, f) != 1) throw std::runtime_error("cache: truncated file");
  return v;
}
inline std::uint64_t get_u64(std::FILE* f) {
  std::uint64_t v;
  if (std::fread(&v, 8, 1, f) != 1) throw std::runtime_error("cache: truncated file");
  return v;
}
inline double get_f64(std::FILE* f) {
  double v;
  if (std::fread(&v, 8, 1, f) != 1) throw std::runtime_error("cache: truncated file");
  return v;
}
struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace detail

inline std::string young_block_cache_name(const Partition& lam, int L, int N) {
  return "block_N" + std::to_string(N) + "_L" + std::to_string(L) + "_" + lam.label() + ".ybc";
}

inline void write_young_block(const std::filesystem::path& path, const YoungBasisBlock& b) {
  detail::FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw std::runtime_error("cache: cannot open for writing: " + path.string());
  std::fwrite("PDBYBC01", 1, 8, f.get());
  detail::put_u32(f.get(), static_cast<std::uint32_t>(b.N));
  detail::put_u32(f.get(), static_cast<std::uint32_t>(b.L));
  detail::put_u32(f.get(), static_cast<std::uint32_t>(b.lambda.num_rows()));
  for (int r = 0; r < b.lambda.num_rows(); ++r)
    detail::put_u32(f.get(), static_cast<std::uint32_t>(b.lambda.row(r)));
  detail::put_u64(f.get(), static_cast<std::uint64_t>(b.vectors.size()));
  for (const auto& v : b.vectors) {
    detail::put_u64(f.get(), static_cast<std::uint64_t>(v.terms.size()));
    for (const auto& [i, a] : v.terms) {
      detail::put_u64(f.get(), i);
      detail::put_f64(f.get(), a);
    }
  }
}

inline YoungBasisBlock read_young_block(const std::filesystem::path& path) {
  detail::FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw std::runtime_error("cache: cannot open: " + path.string());
  char magic[8];
  if (std::fread(magic, 1, 8, f.get()) != 8 || std::string(magic, 8) != "PDBYBC01")
    throw std::runtime_error("cache: bad magic in " + path.string());
  YoungBasisBlock b;
  b.N = static_cast<int>(detail::get_u32(f.get()));
  b.L = static_cast<int>(detail::get_u32(f.get()));
  const auto nrows = detail::get_u32(f.get());
  std::vector<int> rows(nrows);
  for (auto& r : rows) r = static_cast<int>(detail::get_u32(f.get()));
  b.lambda = Partition(rows);
  const auto d = detail::get_u64(f.get());
  const std::uint64_t dim = pow_u64(b.L, b.N);
  b.vectors.resize(d);
  for (auto& v : b.vectors) {
    const auto nnz = detail::get_u64(f.get());
    if (nnz > dim) throw std::runtime_error("cache: implausible vector size in " + path.string());
    v.terms.resize(nnz);
    std::uint64_t prev = 0;
    bool first = true;
    for (auto& [i, a] : v.terms) {
      i = detail::get_u64(f.get());
      a = detail::get_f64(f.get());
      if (i >= dim || (!first && i <= prev))
        throw std::runtime_error("cache: index order violation in " + path.string());
      prev = i;
      first = false;
    }
  }
  if (d != count_semistandard_tableaux(b.lambda, b.L))
    throw std::runtime_error("cache: dimension mismatch in " + path.string());
  return b;
}

// Build, or reuse a cached block when dir is non-empty and holds a valid file.
inline YoungBasisBlock load_or_build_young_block(const std::filesystem::path& dir,
                                                 const OrthogonalRep& rep, const TensorSpace& ts) {
  if (dir.empty()) return build_young_block(rep, ts);
  const auto path = dir / young_block_cache_name(rep.shape(), ts.L, ts.N);
  if (std::filesystem::exists(path)) {
    try {
      auto b = read_young_block(path);
      if (b.lambda == rep.shape() && b.L == ts.L && b.N == ts.N) return b;
    } catch (const std::runtime_error&) {
      // fall through to rebuild
    }
  }
  auto b = build_young_block(rep, ts);
  std::filesystem::create_directories(dir);
  write_young_block(path, b);
  return b;
}

}  // namespace pdbose
