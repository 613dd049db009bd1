#pragma once

// External N-particle tensor space over L sites and the S_N slot action.
// A basis index assigns a site 1..L to each particle slot; flat encoding is
// base L with slot 0 as the least significant digit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "permutation.hpp"

namespace pdbose {

inline std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

struct TensorBasisIndex {
  std::vector<int> sites;  // size N, entries 1..L
  std::uint64_t flat = 0;
};

inline std::uint64_t encode_sites(const std::vector<int>& sites, int L) {
  std::uint64_t flat = 0, p = 1;
  for (int s : sites) {
    if (s < 1 || s > L) throw std::invalid_argument("encode_sites: site out of range");
    flat += static_cast<std::uint64_t>(s - 1) * p;
    p *= static_cast<std::uint64_t>(L);
  }
  return flat;
}

inline std::vector<int> decode_flat(std::uint64_t flat, int L, int N) {
  std::vector<int> sites(N);
  for (int k = 0; k < N; ++k) {
    sites[k] = static_cast<int>(flat % L) + 1;
    flat /= L;
  }
  return sites;
}

inline TensorBasisIndex make_index(std::vector<int> sites, int L) {
  TensorBasisIndex idx;
  idx.flat = encode_sites(sites, L);
  idx.sites = std::move(sites);
  return idx;
}

// pi acts by moving slot contents: sites'[k] = sites[pi^{-1}(k)].
inline TensorBasisIndex permute_basis_index(const Permutation& pi, const TensorBasisIndex& idx, int L) {
  const auto inv = pi.inverse();
  std::vector<int> out(idx.sites.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = idx.sites[inv(static_cast<int>(k))];
  return make_index(std::move(out), L);
}

// Same action on a decoded digit list, using a precomputed inverse one-line.
inline std::uint64_t permute_sites_flat(const std::vector<int>& inv_oneline,
                                        const std::vector<int>& sites, int L) {
  std::uint64_t flat = 0, p = 1;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    flat += static_cast<std::uint64_t>(sites[inv_oneline[k]] - 1) * p;
    p *= static_cast<std::uint64_t>(L);
  }
  return flat;
}

// Sorted sparse vector over flat indices; real amplitudes.
struct SparseVec {
  std::vector<std::pair<std::uint64_t, double>> terms;

  void sort_merge(double drop_below = 0.0) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < terms.size();) {
      std::uint64_t idx = terms[r].first;
      double amp = 0.0;
      while (r < terms.size() && terms[r].first == idx) amp += terms[r++].second;
      if (std::abs(amp) > drop_below) terms[w++] = {idx, amp};
    }
    terms.resize(w);
  }

  double norm2() const {
    double s = 0;
    for (const auto& [i, a] : terms) s += a * a;
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  double dot(const SparseVec& o) const {
    double s = 0;
    std::size_t i = 0, j = 0;
    while (i < terms.size() && j < o.terms.size()) {
      if (terms[i].first < o.terms[j].first)
        ++i;
      else if (terms[i].first > o.terms[j].first)
        ++j;
      else
        s += terms[i++].second * o.terms[j++].second;
    }
    return s;
  }

  double at(std::uint64_t idx) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), idx,
                               [](const auto& t, std::uint64_t v) { return t.first < v; });
    return (it != terms.end() && it->first == idx) ? it->second : 0.0;
  }

  void scale(double c) {
    for (auto& [i, a] : terms) a *= c;
  }
};

// Shared geometry of the tensor space: the permutation group with decoded
// inverses, and the S_N orbits of basis indices (all indices with the same
// site multiset). Orbits are numbered by first appearance in flat order.
struct TensorSpace {
  int L = 0, N = 0;
  std::uint64_t dim = 0;
  std::vector<Permutation> perms;                 // lex order, identity first
  std::vector<std::vector<int>> perm_inv;         // inverse one-lines
  std::vector<std::vector<int>> orbit_occ;        // occupation list (size L) per orbit
  std::vector<std::vector<std::uint64_t>> orbit_members;  // ascending flat indices
  std::vector<std::uint32_t> orbit_of;            // flat index -> orbit id

  TensorSpace(int L_, int N_) : L(L_), N(N_), dim(pow_u64(L_, N_)) {
    if (L < 1 || N < 1) throw std::invalid_argument("TensorSpace: L, N >= 1");
    perms = enumerate_permutations(N);
    perm_inv.reserve(perms.size());
    for (const auto& p : perms) perm_inv.push_back(p.inverse().one_line());

    orbit_of.assign(dim, UINT32_MAX);
    std::vector<int> occ(L);
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (orbit_of[x] != UINT32_MAX) continue;
      auto sites = decode_flat(x, L, N);
      std::fill(occ.begin(), occ.end(), 0);
      for (int s : sites) occ[s - 1]++;
      const auto id = static_cast<std::uint32_t>(orbit_occ.size());
      orbit_occ.push_back(occ);
      // all members: permutations of this index
      std::vector<std::uint64_t> members;
      for (const auto& inv : perm_inv) members.push_back(permute_sites_flat(inv, sites, L));
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      for (auto m : members) orbit_of[m] = id;
      orbit_members.push_back(std::move(members));
    }
  }

  std::uint64_t mott_index() const {
    if (N != L) throw std::logic_error("mott_index: requires N == L");
    std::vector<int> sites(N);
    for (int k = 0; k < N; ++k) sites[k] = k + 1;
    return encode_sites(sites, L);
  }
};

}  // namespace pdbose
