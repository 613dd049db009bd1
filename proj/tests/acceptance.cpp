// Acceptance gates for the sector-resolved simulator. Each numbered check
// prints one PASS or FAIL line with its runtime and a short note; the binary
// exits nonzero if any gate fails. Heavy sector spectra are cached on disk
// (PDBOSE_CACHE_DIR, falling back to the system temp directory), so repeated
// runs are much cheaper than the first.

#include <pdbose/external_state.hpp>
#include <pdbose/fluctuations.hpp>
#include <pdbose/hubbard.hpp>
#include <pdbose/internal_states.hpp>
#include <pdbose/observables.hpp>
#include <pdbose/sector_state.hpp>
#include <pdbose/sweep.hpp>
#include <pdbose/young_block.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace pdbose;

namespace {

int g_failures = 0;

template <class F>
void gate(int idx, const char* title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body(note);
  } catch (const std::exception& e) {
    ok = false;
    note = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() -
                                                                t0)
          .count();
  std::printf("[%2d/10] %s  %-52s (%6.1f s)%s%s\n", idx, ok ? "PASS" : "FAIL", title, secs,
              note.empty() ? "" : "  ", note.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

fs::path cache_dir() {
  if (const char* env = std::getenv("PDBOSE_CACHE_DIR"); env && *env) return env;
  return fs::temp_directory_path() / "pdbose_acceptance_cache";
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// dense tensor-space vector of eigenstate col of a sector
Eigen::VectorXd embed_eigenstate(const YoungBasisBlock& block, const SectorSpectrum& sp, int col,
                                 std::uint64_t dim) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<long>(dim));
  for (std::size_t r = 0; r < block.vectors.size(); ++r) {
    const double c = sp.eigvecs(static_cast<long>(r), col);
    if (c == 0) continue;
    for (const auto& [idx, amp] : block.vectors[r].terms) t(static_cast<long>(idx)) += c * amp;
  }
  return t;
}

// Hermitian orthonormal basis of operators on a dA-dimensional factor.
std::vector<Eigen::MatrixXcd> hermitian_onb(int dA) {
  const std::complex<double> I(0, 1);
  std::vector<Eigen::MatrixXcd> ops;
  for (int i = 0; i < dA; ++i) {
    Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(dA, dA);
    E(i, i) = 1;
    ops.push_back(E);
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dA; ++i)
    for (int j = i + 1; j < dA; ++j) {
      Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(dA, dA);
      E(i, j) = E(j, i) = r;
      ops.push_back(E);
      Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(dA, dA);
      F(i, j) = I * r;
      F(j, i) = -I * r;
      ops.push_back(F);
    }
  return ops;
}

// matrix units E_ij: a second orthonormal basis, deliberately non-Hermitian
std::vector<Eigen::MatrixXcd> unit_onb(int dA) {
  std::vector<Eigen::MatrixXcd> ops;
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) {
      Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(dA, dA);
      E(i, j) = 1;
      ops.push_back(E);
    }
  return ops;
}

// two-slot operator embedded on the leading slot pair of an L-site, N-slot space
Eigen::VectorXcd apply_pair_op(const Eigen::MatrixXcd& O, const Eigen::VectorXcd& v, int L,
                               int N) {
  const long D = v.size();
  const int dA = L * L;
  const long dB = D / dA;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(D);
  for (long b = 0; b < dB; ++b)
    for (int a_in = 0; a_in < dA; ++a_in) {
      const std::complex<double> amp = v(a_in + static_cast<long>(dA) * b);
      if (amp == std::complex<double>(0, 0)) continue;
      for (int a_out = 0; a_out < dA; ++a_out) {
        const std::complex<double> c = O(a_out, a_in);
        if (c != std::complex<double>(0, 0)) out(a_out + static_cast<long>(dA) * b) += c * amp;
      }
    }
  (void)N;
  return out;
}

double permanent_abs2(const Eigen::MatrixXcd& S) {
  const int n = static_cast<int>(S.rows());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  double sum = 0;
  do {
    double prod = 1;
    for (int i = 0; i < n; ++i) prod *= std::norm(S(i, idx[i]));
    sum += prod;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return sum;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return spearman_rank_correlation(a, b);
}

// shared output of the six-sector scan at full size, filled by gate 9
struct SectorScan {
  std::vector<Partition> sectors;
  std::vector<double> grid;
  // [sector][grid]
  std::vector<std::vector<double>> mean_d1, var_d1, a_norm;
  bool done = false;
};

}  // namespace

int main() {
  const fs::path cache = cache_dir();
  fs::create_directories(cache);
  std::printf("cache: %s\n", cache.string().c_str());

  // ------------------------------------------------------------------ 1
  gate(1, "sector dimension table at six particles", [&](std::string& note) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string table = dims_table(6);
    const double secs = std::chrono::duration_cast<std::chrono::duration<double>>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::size_t rows = 0;
    for (char ch : table)
      if (ch == '\n') ++rows;
    bool ok = rows == 14;  // header, 11 sectors, total, crosscheck
    for (const char* needle :
         {"6,1,462,462", "5-1,5,1050,5250", "4-2,9,1134,10206", "4-1-1,10,840,8400",
          "3-3,5,490,2450", "3-2-1,16,896,14336", "3-1-1-1,10,280,2800", "2-2-2,5,175,875",
          "2-2-1-1,9,189,1701", "2-1-1-1-1,5,35,175", "1-1-1-1-1-1,1,1,1", "total,,,46656",
          "check_L_to_N,,,46656"})
      ok = ok && table.find(needle) != std::string::npos;
    ok = ok && secs < 1.0;
    note = fmt("11 sectors, sum 46656, %.3f s", secs);
    return ok;
  });

  // ------------------------------------------------------------------ 2
  gate(2, "Fock-space cross-check of the symmetric sector", [&](std::string& note) {
    double worst = 0;
    for (int n : {4, 6}) {
      TensorSpace ts(n, n);
      auto block = load_or_build_young_block(cache, OrthogonalRep(Partition(std::vector<int>{n})),
                                             ts);
      auto ops = sector_operators(block, ts);
      for (double ju : {0.1, 1.0, 10.0}) {
        auto sp = load_or_compute_spectrum(cache, ops, n, n, ju, 1.0);
        HubbardParams par;
        par.J = ju;
        par.U = 1.0;
        par.L = n;
        par.N = n;
        const Eigen::VectorXd fock = bosonic_fock_oracle(par);
        if (fock.size() != sp.energies.size()) {
          note = "dimension mismatch against the occupation-basis route";
          return false;
        }
        worst = std::max(worst, (fock - sp.energies).cwiseAbs().maxCoeff());
      }
    }
    note = fmt("max |dE| = %.2e at four and six particles", worst);
    return worst <= 1e-8;
  });

  // ------------------------------------------------------------------ 3
  gate(3, "spectral variance against sampled time averages", [&](std::string& note) {
    const auto t0 = std::chrono::steady_clock::now();
    TensorSpace ts(3, 3);
    const auto partitions = enumerate_partitions(3);
    std::vector<YoungBasisBlock> blocks;
    std::vector<SectorOperators> ops;
    for (const auto& lam : partitions) {
      blocks.push_back(build_young_block(OrthogonalRep(lam), ts));
      ops.push_back(sector_operators(blocks.back(), ts));
    }
    const double jus[5] = {0.3, 0.7, 1.1, 2.3, 5.0};
    const std::uint64_t seeds[5] = {11, 23, 37, 51, 77};
    std::vector<MottSectorBasis> bases;
    double worst = 0, min_tgap = 1e300;
    int levels = 0, gaps = 0;
    for (int i = 0; i < 5; ++i) {
      std::vector<SectorSpectrum> spectra;
      for (const auto& op : ops)
        spectra.push_back(diagonalize_sector(op.lambda, sector_hamiltonian(op, jus[i], 1.0)));
      const auto audit = degeneracy_audit(spectra);
      levels = std::max(levels, audit.level_collisions);
      gaps = std::max(gaps, audit.gap_collisions);
      const auto br = (i % 2 == 0) ? SamplingBranch::NearIndistinguishable
                                   : SamplingBranch::NearDistinguishable;
      auto st = sample_internal_states(br, 0.2 + 0.3 * i, 3, 3, seeds[i]);
      auto ext = reduced_external_state(gram_matrix(st), ts);
      if (bases.empty())
        for (const auto& b : blocks) bases.push_back(make_mott_sector_basis(b, ts, ext.support));
      auto states = sector_decompose(ext, bases, spectra);
      std::vector<ObservableMatrix> oms;
      std::vector<Eigen::MatrixXd> raws;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        oms.push_back(density_correlator_elements(2, 3, spectra[b], blocks[b], ts));
        raws.push_back(correlator_eigen(correlator_diag_young(blocks[b], ts, 2, 3), spectra[b]));
      }
      const double vspec = temporal_variance_exact(states, oms);
      auto series = time_series_oracle(states, raws, spectra, default_time_grid(spectra));
      if (series.insufficient || series.t_gap_product < 1e3) {
        note = "time grid shorter than one thousand slow periods";
        return false;
      }
      min_tgap = std::min(min_tgap, series.t_gap_product);
      worst = std::max(worst, std::abs(series.var - vspec) / vspec);
      if (audit.level_collisions > 0) {
        note = "a probed spectrum has coinciding levels";
        return false;
      }
    }
    const double secs = std::chrono::duration_cast<std::chrono::duration<double>>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    note = fmt("max rel dev %.2e over 5 points, T*gap >= %.0f", worst, min_tgap);
    if (gaps > 0) note += " (one zero-weight gap echo pooled across blocks)";
    return worst <= 0.02 && secs < 60.0;
  });

  // ------------------------------------------------------------------ 4
  gate(4, "purity identities across fifty samples", [&](std::string& note) {
    TensorSpace ts(4, 4);
    const auto partitions = enumerate_partitions(4);
    std::vector<YoungBasisBlock> blocks;
    std::vector<SectorSpectrum> spectra;
    for (const auto& lam : partitions) {
      blocks.push_back(build_young_block(OrthogonalRep(lam), ts));
      auto op = sector_operators(blocks.back(), ts);
      spectra.push_back(diagonalize_sector(lam, sector_hamiltonian(op, 1.0, 1.0)));
    }
    std::vector<MottSectorBasis> bases;
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      const double eps = 0.01 * std::pow(1000.0, i / 49.0);
      const auto br = (i % 2 == 0) ? SamplingBranch::NearIndistinguishable
                                   : SamplingBranch::NearDistinguishable;
      auto st = sample_internal_states(br, eps, 4, 4, 100 + i);
      const Eigen::MatrixXcd S = gram_matrix(st);
      auto ext = reduced_external_state(S, ts);
      if (bases.empty())
        for (const auto& b : blocks) bases.push_back(make_mott_sector_basis(b, ts, ext.support));
      worst = std::max(worst, std::abs(ext.gamma - permanent_abs2(S) / 24.0));
      auto states = sector_decompose(ext, bases, spectra);
      double psum = 0, mix = 0;
      for (std::size_t b = 0; b < states.size(); ++b) {
        psum += states[b].p;
        const double nu = static_cast<double>(count_standard_tableaux(partitions[b]));
        mix += states[b].p * states[b].p * states[b].gamma_lambda / nu;
      }
      worst = std::max(worst, std::abs(psum - 1.0));
      worst = std::max(worst, std::abs(mix - ext.gamma));
      worst = std::max(worst, std::abs(states[0].gamma_lambda - 1.0));
    }
    note = fmt("max deviation %.2e across all four identities", worst);
    return worst <= 1e-10;
  });

  // ------------------------------------------------------------------ 5
  gate(5, "reduced-trace identity and operator-basis oracle", [&](std::string& note) {
    // both contraction sides on random eigenpairs at four particles, k = 2
    TensorSpace ts4(4, 4);
    const std::uint64_t D4 = ts4.dim;
    double worst_trace = 0;
    std::mt19937_64 rng(4242);
    for (const auto& lam : enumerate_partitions(4)) {
      auto block = build_young_block(OrthogonalRep(lam), ts4);
      auto op = sector_operators(block, ts4);
      auto sp = diagonalize_sector(lam, sector_hamiltonian(op, 1.3, 1.0));
      const int d = block.dim();
      std::uniform_int_distribution<int> pick(0, d - 1);
      const int dA = 16, dB = static_cast<int>(D4) / 16;
      for (int t = 0; t < 100; ++t) {
        const int a = pick(rng), b = pick(rng);
        const Eigen::VectorXd ta = embed_eigenstate(block, sp, a, D4);
        const Eigen::VectorXd tb = embed_eigenstate(block, sp, b, D4);
        Eigen::Map<const Eigen::MatrixXd> Ma(ta.data(), dA, dB);
        Eigen::Map<const Eigen::MatrixXd> Mb(tb.data(), dA, dB);
        Eigen::MatrixXd left(dA, dA), right(dA, dA);
        left.noalias() = Mb * Ma.transpose();
        right.noalias() = Ma * Mb.transpose();
        const double lhs = (left * right).trace();
        Eigen::MatrixXd ga(dB, dB), gb(dB, dB);
        ga.noalias() = Ma.transpose() * Ma;
        gb.noalias() = Mb.transpose() * Mb;
        const double rhs = (ga * gb).trace();
        worst_trace = std::max(worst_trace, std::abs(lhs - rhs));
      }
    }
    if (worst_trace > 1e-10) {
      note = fmt("contraction sides disagree by %.2e", worst_trace);
      return false;
    }

    // explicit operator sum against the reshape formula at three particles
    TensorSpace ts3(3, 3);
    const auto onb = hermitian_onb(9);
    double worst_onb = 0;
    const auto partitions3 = enumerate_partitions(3);
    for (std::size_t bi = 0; bi < 2; ++bi) {  // d = 10 and d = 8 sectors
      auto block = build_young_block(OrthogonalRep(partitions3[bi]), ts3);
      auto op = sector_operators(block, ts3);
      auto sp = diagonalize_sector(partitions3[bi], sector_hamiltonian(op, 0.9, 1.0));
      auto om = averaged_offdiagonal(sp, block, 2);
      const int d = block.dim();
      std::vector<Eigen::VectorXcd> vecs;
      for (int a = 0; a < d; ++a)
        vecs.push_back(embed_eigenstate(block, sp, a, ts3.dim).cast<std::complex<double>>());
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double sum = 0;
          for (const auto& O : onb)
            sum += std::norm(vecs[a].dot(apply_pair_op(O, vecs[b], 3, 3)));
          worst_onb = std::max(worst_onb,
                               std::abs(9.0 * sum - om.M(a, b)) / std::max(1.0, om.M(a, b)));
        }
    }
    note = fmt("traces to %.2e, operator sum to %.2e", worst_trace, worst_onb);
    return worst_onb <= 1e-8;
  });

  // ------------------------------------------------------------------ 6
  gate(6, "variance is operator-basis independent", [&](std::string& note) {
    TensorSpace ts(3, 3);
    const auto partitions = enumerate_partitions(3);
    std::vector<YoungBasisBlock> blocks;
    std::vector<SectorSpectrum> spectra;
    for (const auto& lam : partitions) {
      blocks.push_back(build_young_block(OrthogonalRep(lam), ts));
      auto op = sector_operators(blocks.back(), ts);
      spectra.push_back(diagonalize_sector(lam, sector_hamiltonian(op, 0.9, 1.0)));
    }
    auto st = sample_internal_states(SamplingBranch::NearIndistinguishable, 0.5, 3, 3, 314);
    auto ext = reduced_external_state(gram_matrix(st), ts);
    std::vector<MottSectorBasis> bases;
    for (const auto& b : blocks) bases.push_back(make_mott_sector_basis(b, ts, ext.support));
    auto states = sector_decompose(ext, bases, spectra);

    auto v_with = [&](const std::vector<Eigen::MatrixXcd>& onb) {
      double v = 0;
      for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& stt = states[bi];
        if (stt.rho.size() == 0) continue;
        const int d = blocks[bi].dim();
        std::vector<Eigen::VectorXcd> vecs;
        for (int a = 0; a < d; ++a)
          vecs.push_back(
              embed_eigenstate(blocks[bi], spectra[bi], a, ts.dim).cast<std::complex<double>>());
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            if (a == b) continue;
            double sum = 0;
            for (const auto& O : onb)
              sum += std::norm(vecs[a].dot(apply_pair_op(O, vecs[b], 3, 3)));
            v += stt.p * stt.p * std::norm(stt.rho(a, b)) * 9.0 * sum;
          }
      }
      return v;
    };
    const double v1 = v_with(hermitian_onb(9));
    const double v2 = v_with(unit_onb(9));

    std::vector<ObservableMatrix> oms;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      oms.push_back(averaged_offdiagonal(spectra[b], blocks[b], 2));
    const double vf = temporal_variance_exact(states, oms);

    const double dev = std::abs(v1 - v2) / std::max(1.0, std::abs(v1));
    const double devf = std::abs(v1 - vf) / std::max(1.0, std::abs(v1));
    note = fmt("two bases differ by %.2e, formula by %.2e", dev, devf);
    return dev <= 1e-8 && devf <= 1e-8;
  });

  // ------------------------------------------------------------------ 7
  gate(7, "fluctuation peak location and plateau at full size", [&](std::string& note) {
    TensorSpace ts(6, 6);
    const Partition sym(std::vector<int>{6});
    auto block = load_or_build_young_block(cache, OrthogonalRep(sym), ts);
    std::optional<SectorOperators> ops;
    auto fetch = [&](double ju) {
      const auto path = cache / spectrum_cache_name(sym, 6, 6, ju, 1.0);
      if (fs::exists(path)) {
        try {
          return read_spectrum(path, sym, 6, 6, ju, 1.0);
        } catch (const std::runtime_error&) {
        }
      }
      if (!ops) ops = sector_operators(block, ts);
      return load_or_compute_spectrum(cache, *ops, 6, 6, ju, 1.0);
    };

    // row of the fully occupied orbit inside the symmetric block
    const std::uint64_t mott = ts.mott_index();
    int r0 = -1;
    for (std::size_t r = 0; r < block.vectors.size(); ++r) {
      const auto& terms = block.vectors[r].terms;
      const auto it = std::lower_bound(
          terms.begin(), terms.end(), mott,
          [](const std::pair<std::uint64_t, double>& t, std::uint64_t v) { return t.first < v; });
      if (it != terms.end() && it->first == mott) {
        r0 = static_cast<int>(r);
        break;
      }
    }
    if (r0 < 0) {
      note = "uniform-filling orbit missing from the symmetric block";
      return false;
    }

    SweepConfig gc;
    gc.size = 6;
    const auto grid = gc.grid();  // 48 log-spaced points, 0.02 .. 40
    std::vector<double> v_op(grid.size()), v_corr(grid.size());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= 6; ++i)
      for (int j = i + 1; j <= 6; ++j) pairs.push_back({i, j});
    for (std::size_t g = 0; g < grid.size(); ++g) {
      auto sp = fetch(grid[g]);
      Eigen::VectorXd w = sp.eigvecs.row(r0).transpose().cwiseAbs2();
      v_op[g] = kbody_avg_sq_pure_weighted(sp, block, 2, w);
      double acc = 0;
      for (const auto& [i, j] : pairs) {
        const Eigen::MatrixXd raw = correlator_eigen(correlator_diag_young(block, ts, i, j), sp);
        const Eigen::MatrixXd M2 = raw.cwiseProduct(raw);
        const Eigen::VectorXd Mw = M2 * w;
        acc += w.dot(Mw) - M2.diagonal().dot(w.cwiseProduct(w));
      }
      v_corr[g] = acc / static_cast<double>(pairs.size());
    }
    const auto pm_op = peak_metrics(grid, v_op);
    const auto pm_corr = peak_metrics(grid, v_corr);
    note = fmt("peak at J/U = %.3f with q = %.2f; correlator variant at %.3f", pm_op.ju_at_max,
               pm_op.q, pm_corr.ju_at_max);
    return pm_op.ju_at_max >= 0.15 && pm_op.ju_at_max <= 0.35 && pm_op.q > 1.0 &&
           pm_corr.ju_at_max > pm_op.ju_at_max;
  });

  // ------------------------------------------------------------------ 8
  gate(8, "plateau and enhancement rise with sample purity", [&](std::string& note) {
    TensorSpace ts(5, 5);
    const auto partitions = enumerate_partitions(5);
    std::vector<YoungBasisBlock> blocks;
    std::vector<std::optional<SectorOperators>> ops(partitions.size());
    for (const auto& lam : partitions)
      blocks.push_back(load_or_build_young_block(cache, OrthogonalRep(lam), ts));

    const int S = 50;
    std::vector<ExternalState> exts;
    std::vector<double> gammas;
    for (int i = 0; i < S; ++i) {
      const double eps = 0.01 * std::pow(1000.0, i / 49.0);
      const auto br = (i % 2 == 0) ? SamplingBranch::NearIndistinguishable
                                   : SamplingBranch::NearDistinguishable;
      auto st = sample_internal_states(br, eps, 5, 5, 500 + i);
      exts.push_back(reduced_external_state(gram_matrix(st), ts));
      gammas.push_back(exts.back().gamma);
    }
    std::vector<MottSectorBasis> bases;
    for (const auto& b : blocks) bases.push_back(make_mott_sector_basis(b, ts, exts[0].support));

    SweepConfig gc;
    gc.size = 5;
    gc.grid_count = 16;
    const auto grid = gc.grid();
    std::vector<std::vector<double>> V(S, std::vector<double>(grid.size(), 0.0));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<SectorSpectrum> spectra;
      std::vector<ObservableMatrix> oms;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto path = cache / spectrum_cache_name(partitions[b], 5, 5, grid[g], 1.0);
        bool loaded = false;
        if (fs::exists(path)) {
          try {
            spectra.push_back(read_spectrum(path, partitions[b], 5, 5, grid[g], 1.0));
            loaded = true;
          } catch (const std::runtime_error&) {
          }
        }
        if (!loaded) {
          if (!ops[b]) ops[b] = sector_operators(blocks[b], ts);
          spectra.push_back(load_or_compute_spectrum(cache, *ops[b], 5, 5, grid[g], 1.0));
        }
        oms.push_back(averaged_offdiagonal(spectra[b], blocks[b], 2));
      }
      for (int i = 0; i < S; ++i)
        V[i][g] = temporal_variance_exact(sector_decompose(exts[i], bases, spectra), oms);
    }
    std::vector<double> vinfs, qs;
    for (int i = 0; i < S; ++i) {
      const auto pm = peak_metrics(grid, V[i]);
      vinfs.push_back(pm.v_inf);
      qs.push_back(pm.q);
    }
    const double rv = spearman(gammas, vinfs);
    const double rq = spearman(gammas, qs);
    note = fmt("Spearman: plateau %.3f, enhancement %.3f", rv, rq);
    return rv > 0.9 && rq > 0.5;
  });

  // ------------------------------------------------------------------ 9 and 10 share one scan
  SectorScan scan;
  gate(9, "chaos window: delocalization variance collapses", [&](std::string& note) {
    TensorSpace ts(6, 6);
    auto parts = enumerate_partitions(6);
    std::stable_sort(parts.begin(), parts.end(), [&](const Partition& a, const Partition& b) {
      return count_semistandard_tableaux(a, 6) > count_semistandard_tableaux(b, 6);
    });
    parts.resize(6);
    scan.sectors = parts;
    scan.grid = {0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0};
    const std::size_t G = scan.grid.size();
    scan.mean_d1.assign(6, std::vector<double>(G, 0.0));
    scan.var_d1.assign(6, std::vector<double>(G, 0.0));
    scan.a_norm.assign(6, std::vector<double>(G, 0.0));

    for (std::size_t s = 0; s < parts.size(); ++s) {
      auto block = load_or_build_young_block(cache, OrthogonalRep(parts[s]), ts);
      std::optional<SectorOperators> ops;
      const double total = kbody_avg_sq_total(block, 2);
      const double d = static_cast<double>(block.dim());
      for (std::size_t g = 0; g < G; ++g) {
        const double ju = scan.grid[g];
        SectorSpectrum sp;
        const auto path = cache / spectrum_cache_name(parts[s], 6, 6, ju, 1.0);
        bool loaded = false;
        if (fs::exists(path)) {
          try {
            sp = read_spectrum(path, parts[s], 6, 6, ju, 1.0);
            loaded = true;
          } catch (const std::runtime_error&) {
          }
        }
        if (!loaded) {
          if (!ops) ops = sector_operators(block, ts);
          sp = load_or_compute_spectrum(cache, *ops, 6, 6, ju, 1.0);
        }
        const auto cd = fractal_diagnostics(sp, 0.0, 60);
        scan.mean_d1[s][g] = cd.mean_D1;
        scan.var_d1[s][g] = cd.var_D1;
        const double offdiag = total - kbody_avg_sq_diag(sp, block, 2).sum();
        scan.a_norm[s][g] = offdiag / d / 1296.0;  // operator-space dimension L^(2k)
      }
    }
    scan.done = true;

    // The window marks where the means reach their maxima and the variances
    // have dropped an order of magnitude; the edges themselves sit mid
    // transition, so the gates are on what the window attains: the drop and
    // the maximum must occur inside it, with a contiguous stretch of probed
    // couplings that is simultaneously collapsed and ergodic.
    double worst_drop = 1e300, worst_reach = 1e300;
    int worst_run = 1 << 20;
    for (std::size_t s = 0; s < parts.size(); ++s) {
      const double ref = scan.var_d1[s][0];  // J/U = 0.02
      const double peak = *std::max_element(scan.mean_d1[s].begin(), scan.mean_d1[s].end());
      double drop = 0, reach = 0;
      int run = 0, best_run = 0;
      for (std::size_t g = 0; g < G; ++g) {
        const double ju = scan.grid[g];
        if (ju < 0.23 || ju > 11.0) continue;
        drop = std::max(drop, ref / scan.var_d1[s][g]);
        reach = std::max(reach, scan.mean_d1[s][g] / peak);
        const bool settled =
            scan.var_d1[s][g] <= ref / 10.0 && scan.mean_d1[s][g] >= 0.9 * peak;
        run = settled ? run + 1 : 0;
        best_run = std::max(best_run, run);
      }
      worst_drop = std::min(worst_drop, drop);
      worst_reach = std::min(worst_reach, reach);
      worst_run = std::min(worst_run, best_run);
    }
    note = fmt("every sector: drop >= %.0fx, mean reaches %.2f of max, settled run >= %.0f points",
               worst_drop, worst_reach, static_cast<double>(worst_run));
    return worst_drop >= 10.0 && worst_reach >= 0.9 && worst_run >= 3;
  });

  gate(10, "observable factor flat and of order one", [&](std::string& note) {
    if (!scan.done) {
      note = "six-sector scan unavailable";
      return false;
    }
    double worst_rel = 0, lo = 1e300, hi = 0;
    for (std::size_t s = 0; s < scan.sectors.size(); ++s) {
      const auto& a = scan.a_norm[s];
      const double mean = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
      double var = 0;
      for (double x : a) var += (x - mean) * (x - mean);
      var /= a.size();
      worst_rel = std::max(worst_rel, std::sqrt(var) / mean);
      lo = std::min(lo, mean);
      hi = std::max(hi, mean);
    }
    note = fmt("rel std <= %.1f%%, sector means in [%.2f, %.2f]", 100.0 * worst_rel, lo, hi);
    return worst_rel < 0.30 && lo >= 0.1 && hi <= 10.0;
  });

  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
