#include <doctest.h>

#include <pdbose/hubbard.hpp>
#include <pdbose/partition.hpp>
#include <pdbose/tensor_basis.hpp>
#include <pdbose/young_block.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

using namespace pdbose;

namespace {

Partition P(std::vector<int> v) { return Partition(std::move(v)); }

SparseVec permute_vec(const Permutation& pi, const SparseVec& v, int L, int N) {
  const auto inv = pi.inverse().one_line();
  SparseVec out;
  for (const auto& [idx, amp] : v.terms)
    out.terms.emplace_back(permute_sites_flat(inv, decode_flat(idx, L, N), L), amp);
  out.sort_merge(0.0);
  return out;
}

double interaction_weight(std::uint64_t flat, int L, int N) {
  std::vector<int> occ(L, 0);
  for (int s : decode_flat(flat, L, N)) occ[s - 1]++;
  double w = 0;
  for (int n : occ) w += static_cast<double>(n) * (n - 1);
  return w;
}

}  // namespace

TEST_CASE("hamiltonian action: interaction-only limit") {
  HubbardParams par{0.0, 2.5, 3, 3};
  for (std::uint64_t x : {0ull, 5ull, 13ull, 26ull}) {
    SparseVec v{{{x, 1.0}}};
    auto hv = apply_hamiltonian(par, v);
    const double w = 0.5 * par.U * interaction_weight(x, 3, 3);
    if (w == 0.0) {
      CHECK(hv.terms.empty());
    } else {
      REQUIRE(hv.terms.size() == 1);
      CHECK(hv.terms[0].first == x);
      CHECK(hv.terms[0].second == doctest::Approx(w).epsilon(1e-14));
    }
  }
  // Mott index is the zero-energy configuration
  TensorSpace ts(3, 3);
  SparseVec mott{{{ts.mott_index(), 1.0}}};
  CHECK(apply_hamiltonian(par, mott).terms.empty());
}

TEST_CASE("hamiltonian action: single-particle cosine band") {
  const int L = 5;
  HubbardParams par{0.7, 0.0, L, 1};
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(L, L);
  for (int x = 0; x < L; ++x) {
    SparseVec v{{{static_cast<std::uint64_t>(x), 1.0}}};
    for (const auto& [i, a] : apply_hamiltonian(par, v).terms) H(static_cast<int>(i), x) = a;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  std::vector<double> expect;
  for (int k = 1; k <= L; ++k) expect.push_back(-2.0 * par.J * std::cos(k * M_PI / (L + 1)));
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < L; ++k) CHECK(es.eigenvalues()(k) == doctest::Approx(expect[k]).epsilon(1e-12));
}

TEST_CASE("hamiltonian commutes with the permutation action") {
  HubbardParams par{0.8, 1.3, 3, 4};
  TensorSpace ts(3, 4);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::uint64_t> xi(0, ts.dim - 1);
  std::uniform_int_distribution<std::size_t> pp(0, ts.perms.size() - 1);
  std::normal_distribution<double> amp(0, 1);
  for (int t = 0; t < 20; ++t) {
    SparseVec v;
    for (int i = 0; i < 6; ++i) v.terms.emplace_back(xi(rng), amp(rng));
    v.sort_merge(0.0);
    const auto& pi = ts.perms[pp(rng)];
    auto lhs = apply_hamiltonian(par, permute_vec(pi, v, 3, 4));
    auto rhs = permute_vec(pi, apply_hamiltonian(par, v), 3, 4);
    for (auto& [i, a] : rhs.terms) a = -a;
    for (const auto& [i, a] : lhs.terms) rhs.terms.emplace_back(i, a);
    rhs.sort_merge(0.0);
    CHECK(rhs.norm() <= 1e-12 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("sector hamiltonian: antisymmetric two-site block is the zero scalar") {
  TensorSpace ts(2, 2);
  auto block = build_young_block(OrthogonalRep(P({1, 1})), ts);
  auto H = sector_hamiltonian(block, {1.7, 3.1, 2, 2}, ts);
  REQUIRE(H.rows() == 1);
  CHECK(std::abs(H(0, 0)) < 1e-12);

  // brute force in the full 4-dimensional space: <v|H|v> for the singlet
  HubbardParams par{1.7, 3.1, 2, 2};
  auto hv = apply_hamiltonian(par, block.vectors[0]);
  CHECK(std::abs(block.vectors[0].dot(hv)) < 1e-12);
}

TEST_CASE("sector hamiltonian matches the direct route and is block diagonal") {
  TensorSpace ts(3, 3);
  HubbardParams par{0.6, 1.0, 3, 3};
  std::vector<YoungBasisBlock> blocks;
  for (const auto& lam : enumerate_partitions(3))
    blocks.push_back(build_young_block(OrthogonalRep(lam), ts));

  for (const auto& b : blocks) {
    auto H = sector_hamiltonian(b, par, ts);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    // independent assembly through apply_hamiltonian
    for (int n = 0; n < b.dim(); ++n) {
      auto hv = apply_hamiltonian(par, b.vectors[n]);
      for (int m = 0; m < b.dim(); ++m)
        CHECK(H(m, n) == doctest::Approx(b.vectors[m].dot(hv)).epsilon(1e-12));
    }
  }

  // J=0 makes every sector matrix diagonal
  for (const auto& b : blocks) {
    auto H0 = sector_hamiltonian(b, {0.0, 1.0, 3, 3}, ts);
    for (int m = 0; m < b.dim(); ++m)
      for (int n = 0; n < b.dim(); ++n)
        if (m != n) CHECK(std::abs(H0(m, n)) < 1e-12);
  }

  // cross-sector matrix elements vanish
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t c = 0; c < blocks.size(); ++c) {
      if (a == c) continue;
      for (const auto& vn : blocks[c].vectors) {
        auto hv = apply_hamiltonian(par, vn);
        for (const auto& vm : blocks[a].vectors) CHECK(std::abs(vm.dot(hv)) < 1e-10);
      }
    }
}

TEST_CASE("spectral sum rule over sectors") {
  for (int N : {3, 4}) {
    TensorSpace ts(N, N);
    HubbardParams par{0.35, 1.0, N, N};
    double lhs = 0;
    for (const auto& lam : enumerate_partitions(N)) {
      auto b = build_young_block(OrthogonalRep(lam), ts);
      lhs += static_cast<double>(count_standard_tableaux(lam)) *
             sector_hamiltonian(b, par, ts).trace();
    }
    double rhs = 0;
    for (std::uint64_t x = 0; x < ts.dim; ++x)
      rhs += 0.5 * par.U * interaction_weight(x, N, N);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("diagonalization: residuals, orthonormality, deterministic ordering") {
  TensorSpace ts(4, 4);
  HubbardParams par{0.9, 1.0, 4, 4};
  for (const auto& lam : enumerate_partitions(4)) {
    auto b = build_young_block(OrthogonalRep(lam), ts);
    auto H = sector_hamiltonian(b, par, ts);
    auto sp = diagonalize_sector(lam, H);
    const int d = b.dim();
    const double scale = H.cwiseAbs().maxCoeff();
    for (int a = 0; a + 1 < d; ++a) CHECK(sp.energies(a) <= sp.energies(a + 1) + 1e-13);
    for (int a = 0; a < d; ++a) {
      Eigen::VectorXd r = H * sp.eigvecs.col(a) - sp.energies(a) * sp.eigvecs.col(a);
      CHECK(r.norm() <= 1e-9 * std::max(1.0, scale));
      int best = 0;
      for (int m = 1; m < d; ++m)
        if (std::abs(sp.eigvecs(m, a)) > std::abs(sp.eigvecs(best, a))) best = m;
      CHECK(sp.eigvecs(best, a) > 0.0);
    }
    Eigen::MatrixXd G = sp.eigvecs.transpose() * sp.eigvecs;
    CHECK((G - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
  }

  // 1x1 block
  auto sp1 = diagonalize_sector(P({1, 1}), Eigen::MatrixXd::Constant(1, 1, 4.2));
  CHECK(sp1.energies(0) == doctest::Approx(4.2));
  CHECK(sp1.eigvecs(0, 0) == doctest::Approx(1.0));

  // massively degenerate J=0 case: clusters ordered by dominant index
  {
    auto b = build_young_block(OrthogonalRep(P({3, 1})), ts);
    auto sp = diagonalize_sector(P({3, 1}), sector_hamiltonian(b, {0.0, 1.0, 4, 4}, ts));
    for (int a = 0; a + 1 < b.dim(); ++a) {
      if (std::abs(sp.energies(a + 1) - sp.energies(a)) < 1e-12) {
        int b1 = 0, b2 = 0;
        for (int m = 0; m < b.dim(); ++m) {
          if (std::abs(sp.eigvecs(m, a)) > std::abs(sp.eigvecs(b1, a))) b1 = m;
          if (std::abs(sp.eigvecs(m, a + 1)) > std::abs(sp.eigvecs(b2, a + 1))) b2 = m;
        }
        CHECK(b1 <= b2);
      }
    }
  }
}

TEST_CASE("bosonic oracle: closed forms") {
  // dimension at N=L=6
  auto e6 = bosonic_fock_oracle({1.0, 1.0, 6, 6});
  CHECK(e6.size() == 462);

  // J=0: energies are the interaction values of all occupation lists
  auto e0 = bosonic_fock_oracle({0.0, 1.0, 4, 3});
  std::vector<double> expect;
  std::vector<int> occ(4, 0);
  auto gen = [&](auto&& self, int site, int rem) -> void {
    if (site == 3) {
      occ[3] = rem;
      double w = 0;
      for (int n : occ) w += static_cast<double>(n) * (n - 1);
      expect.push_back(0.5 * w);
      return;
    }
    for (int n = rem; n >= 0; --n) {
      occ[site] = n;
      self(self, site + 1, rem - n);
    }
  };
  gen(gen, 0, 3);
  std::sort(expect.begin(), expect.end());
  REQUIRE(e0.size() == static_cast<int>(expect.size()));
  for (int i = 0; i < e0.size(); ++i) CHECK(e0(i) == doctest::Approx(expect[i]).epsilon(1e-12));

  // single particle reduces to the cosine band
  auto e1 = bosonic_fock_oracle({1.0, 0.0, 5, 1});
  std::vector<double> cosband;
  for (int k = 1; k <= 5; ++k) cosband.push_back(-2.0 * std::cos(k * M_PI / 6));
  std::sort(cosband.begin(), cosband.end());
  for (int i = 0; i < 5; ++i) CHECK(e1(i) == doctest::Approx(cosband[i]).epsilon(1e-12));
}

TEST_CASE("bosonic sector: Young-block route equals Fock route") {
  for (int N : {3, 4}) {
    TensorSpace ts(N, N);
    auto b = build_young_block(OrthogonalRep(P({N})), ts);
    auto ops = sector_operators(b, ts);
    for (double ju : {0.1, 1.0, 10.0}) {
      auto sp = diagonalize_sector(P({N}), sector_hamiltonian(ops, ju, 1.0));
      auto fock = bosonic_fock_oracle({ju, 1.0, N, N});
      REQUIRE(sp.energies.size() == fock.size());
      const double scale = std::max(1.0, fock.cwiseAbs().maxCoeff());
      for (int i = 0; i < fock.size(); ++i)
        CHECK(std::abs(sp.energies(i) - fock(i)) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("spectrum cache roundtrip") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "pdbose_spc_test";
  fs::remove_all(dir);

  TensorSpace ts(3, 3);
  auto b = build_young_block(OrthogonalRep(P({2, 1})), ts);
  auto ops = sector_operators(b, ts);
  auto sp = load_or_compute_spectrum(dir, ops, 3, 3, 0.37, 1.0);
  REQUIRE(fs::exists(dir / spectrum_cache_name(P({2, 1}), 3, 3, 0.37, 1.0)));
  auto sp2 = load_or_compute_spectrum(dir, ops, 3, 3, 0.37, 1.0);
  CHECK((sp.energies - sp2.energies).cwiseAbs().maxCoeff() == 0.0);  // bit-exact
  CHECK((sp.eigvecs - sp2.eigvecs).cwiseAbs().maxCoeff() == 0.0);

  // different parameters do not collide
  auto sp3 = load_or_compute_spectrum(dir, ops, 3, 3, 0.05, 1.0);
  CHECK(std::abs(sp3.energies(0) - sp.energies(0)) > 1e-12);
  fs::remove_all(dir);
}
