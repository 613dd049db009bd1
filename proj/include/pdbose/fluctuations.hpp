#pragma once

// Asymptotic temporal fluctuations of few-body observables and the pieces of
// the factorized estimate for them. The spectral formula assumes all levels
// and all level gaps inside (and across) the blocks are distinct; a separate
// audit detects violations and the time-domain series stands as the
// authoritative cross-check wherever the audit flags.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hubbard.hpp"
#include "observables.hpp"
#include "sector_state.hpp"

namespace pdbose {

// Per-(J/U, sample) summary row of a sweep.
struct FluctuationRecord {
  double ju = 0;
  int sample_id = 0;
  double v = 0;
  std::vector<double> p_lambda;
  std::vector<double> v_lambda;
  std::vector<double> R_lambda;
  std::vector<double> A_lambda;
  std::vector<double> W_lambda;
  std::vector<double> d_eff;
  std::vector<double> I_lambda;
  std::vector<double> gamma_lambda;
  bool degenerate = false;
};

struct ChaosDiagnostics {
  double mean_D1 = 0;
  double var_D1 = 0;
  std::vector<double> window_D1;  // per eigenstate inside the window
  bool window_truncated = false;  // asked for more states than the block has
};

struct PeakMetrics {
  double v_max = 0;
  double ju_at_max = 0;
  double v_inf = 0;
  double q = 0;
};

// ---------------------------------------------------------------------------
// spectral variance

// Asymptotic variance of one sector: sum_{a != b} |rho_ab|^2 M_ab with M the
// squared-matrix-element table in the same eigenbasis.
inline double sector_temporal_variance(const SectorState& st, const ObservableMatrix& om) {
  if (st.rho.size() == 0) return 0.0;
  const int d = static_cast<int>(st.rho.rows());
  if (om.M.rows() != d) throw std::invalid_argument("sector_temporal_variance: size mismatch");
  double acc = 0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (a == b) continue;
      acc += std::norm(st.rho(a, b)) * om.M(a, b);
    }
  return acc;
}

// Full variance over all sectors, weighted by the squared sector weights.
inline double temporal_variance_exact(const std::vector<SectorState>& states,
                                      const std::vector<ObservableMatrix>& obsmats) {
  if (states.size() != obsmats.size())
    throw std::invalid_argument("temporal_variance_exact: sector count mismatch");
  double v = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].lambda == obsmats[i].lambda))
      throw std::invalid_argument("temporal_variance_exact: sector order mismatch");
    v += states[i].p * states[i].p * sector_temporal_variance(states[i], obsmats[i]);
  }
  return v;
}

// ---------------------------------------------------------------------------
// degeneracy audit

struct DegeneracyAudit {
  int level_collisions = 0;
  int gap_collisions = 0;
  bool flagged = false;
};

// Levels within tol_scale times the global spectral range are collisions;
// likewise coincidences among all intra-block gaps, pooled across blocks
// (cross-block gap coincidences break the variance formula too).
inline DegeneracyAudit degeneracy_audit(const std::vector<SectorSpectrum>& spectra,
                                        double tol_scale = 1e-9) {
  DegeneracyAudit out;
  double lo = 0, hi = 0;
  bool first = true;
  for (const auto& sp : spectra)
    for (double e : sp.energies) {
      if (first) {
        lo = hi = e;
        first = false;
      }
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  const double tol = tol_scale * std::max(1.0, hi - lo);

  std::vector<double> gaps;
  for (const auto& sp : spectra) {
    const auto& en = sp.energies;
    for (std::size_t a = 0; a + 1 < en.size(); ++a)
      if (en[a + 1] - en[a] < tol) ++out.level_collisions;
    for (std::size_t a = 0; a < en.size(); ++a)
      for (std::size_t b = a + 1; b < en.size(); ++b) {
        const double g = en[b] - en[a];
        if (g >= tol) gaps.push_back(g);
      }
  }
  std::sort(gaps.begin(), gaps.end());
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
    if (gaps[i + 1] - gaps[i] < tol) ++out.gap_collisions;
  out.flagged = out.level_collisions > 0 || out.gap_collisions > 0;
  return out;
}

// ---------------------------------------------------------------------------
// time-domain oracle

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;
  double mean = 0;
  double var = 0;
  double t_gap_product = 0;  // span times smallest resolved gap
  bool insufficient = false;
};

inline double min_nonzero_gap(const std::vector<SectorSpectrum>& spectra, double tol = 1e-12) {
  double best = 0;
  bool found = false;
  for (const auto& sp : spectra) {
    const auto& en = sp.energies;
    for (std::size_t a = 0; a < en.size(); ++a)
      for (std::size_t b = a + 1; b < en.size(); ++b) {
        const double g = std::abs(en[b] - en[a]);
        if (g > tol && (!found || g < best)) {
          best = g;
          found = true;
        }
      }
  }
  return found ? best : 0.0;
}

inline std::vector<double> default_time_grid(const std::vector<SectorSpectrum>& spectra,
                                             int samples = 4096, double periods = 1e3) {
  const double gap = min_nonzero_gap(spectra);
  const double T = gap > 0 ? periods * 2.0 * M_PI / gap : 1.0;
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i)
    t[i] = T * static_cast<double>(i) / static_cast<double>(samples);
  return t;
}

// <O(t)> from the sector decomposition and the unsquared eigenbasis matrices,
// sampled on the grid, with the empirical time mean and variance.
inline TimeSeries time_series_oracle(const std::vector<SectorState>& states,
                                     const std::vector<Eigen::MatrixXd>& raw_obs,
                                     const std::vector<SectorSpectrum>& spectra,
                                     const std::vector<double>& t_grid) {
  if (states.size() != raw_obs.size() || states.size() != spectra.size())
    throw std::invalid_argument("time_series_oracle: sector count mismatch");
  TimeSeries out;
  out.t = t_grid;
  out.value.resize(t_grid.size());

  // collect the beats once: weight_ab = p * rho_ab * O_ba at gap E_a - E_b
  struct Beat {
    double omega;
    std::complex<double> w;
  };
  std::vector<Beat> beats;
  double constant = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& st = states[i];
    if (st.rho.size() == 0) continue;
    const int d = static_cast<int>(st.rho.rows());
    if (raw_obs[i].rows() != d || static_cast<int>(spectra[i].energies.size()) != d)
      throw std::invalid_argument("time_series_oracle: sector size mismatch");
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const std::complex<double> w = st.p * st.rho(a, b) * raw_obs[i](b, a);
        if (std::abs(w) < 1e-15) continue;
        if (a == b)
          constant += w.real();
        else
          beats.push_back({spectra[i].energies[a] - spectra[i].energies[b], w});
      }
  }
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    std::complex<double> acc(constant, 0);
    for (const auto& bt : beats)
      acc += bt.w * std::exp(std::complex<double>(0, bt.omega * t_grid[k]));
    out.value[k] = acc.real();
  }
  const double n = static_cast<double>(out.value.size());
  out.mean = std::accumulate(out.value.begin(), out.value.end(), 0.0) / n;
  double sq = 0;
  for (double x : out.value) sq += (x - out.mean) * (x - out.mean);
  out.var = sq / n;
  const double span = t_grid.empty() ? 0.0 : t_grid.back() - t_grid.front();
  out.t_gap_product = span * min_nonzero_gap(spectra);
  out.insufficient = out.t_gap_product < 1e3;
  return out;
}

// Infinite-time mean from the spectral side: the diagonal double sum.
inline double stationary_mean(const std::vector<SectorState>& states,
                              const std::vector<Eigen::MatrixXd>& raw_obs) {
  double acc = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].rho.size() == 0) continue;
    const int d = static_cast<int>(states[i].rho.rows());
    for (int a = 0; a < d; ++a) acc += states[i].p * states[i].rho(a, a).real() * raw_obs[i](a, a);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// factorized model

struct ModelFactors {
  double R = 0;
  double A = 0;
  double RA = 0;
};

// R = (gamma - I) / max(d_eff, W); A = off-diagonal strength per eigenstate.
inline std::vector<ModelFactors> factorized_model(const std::vector<double>& gamma_lambda,
                                                  const std::vector<double>& I_lambda,
                                                  const std::vector<double>& A_lambda,
                                                  const std::vector<double>& W_lambda,
                                                  const std::vector<double>& d_eff) {
  const std::size_t n = gamma_lambda.size();
  if (I_lambda.size() != n || A_lambda.size() != n || W_lambda.size() != n || d_eff.size() != n)
    throw std::invalid_argument("factorized_model: sector count mismatch");
  std::vector<ModelFactors> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double numer = std::max(0.0, gamma_lambda[i] - I_lambda[i]);
    const double denom = std::max({d_eff[i], W_lambda[i], 1.0});
    out[i].R = numer / denom;
    out[i].A = A_lambda[i];
    out[i].RA = out[i].R * out[i].A;
  }
  return out;
}

inline std::vector<ModelFactors> factorized_model(const std::vector<SectorState>& states,
                                                  const std::vector<ObservableMatrix>& obsmats,
                                                  const std::vector<double>& W_lambda,
                                                  const std::vector<double>& d_eff) {
  if (states.size() != obsmats.size())
    throw std::invalid_argument("factorized_model: sector count mismatch");
  std::vector<double> gamma, ipr, A;
  for (std::size_t i = 0; i < states.size(); ++i) {
    gamma.push_back(states[i].gamma_lambda);
    ipr.push_back(states[i].ipr);
    A.push_back(strength(obsmats[i]));
  }
  return factorized_model(gamma, ipr, A, W_lambda, d_eff);
}

// d_eff = C / I clamped to [1, d].
inline double effective_dimension(double I_lambda, double C_lambda, int d_lambda) {
  if (I_lambda <= 0) throw std::invalid_argument("effective_dimension: nonpositive participation");
  return std::clamp(C_lambda / I_lambda, 1.0, static_cast<double>(d_lambda));
}

// ---------------------------------------------------------------------------
// chaos diagnostics

// Shannon delocalization of one eigenvector over the block basis, log base d.
inline double fractal_dimension(const SectorSpectrum& sp, int alpha) {
  const int d = static_cast<int>(sp.eigvecs.rows());
  if (d <= 1) return 0.0;
  double h = 0;
  for (int m = 0; m < d; ++m) {
    const double p = sp.eigvecs(m, alpha) * sp.eigvecs(m, alpha);
    if (p > 0) h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(d));
}

// Mean and variance of the fractal dimension over the window_count eigenstates
// closest in energy to the given center.
inline ChaosDiagnostics fractal_diagnostics(const SectorSpectrum& sp, double center_energy,
                                            int window_count) {
  const int d = static_cast<int>(sp.energies.size());
  if (window_count <= 0) throw std::invalid_argument("fractal_diagnostics: empty window");
  ChaosDiagnostics out;
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(sp.energies[a] - center_energy) < std::abs(sp.energies[b] - center_energy);
  });
  int take = window_count;
  if (take > d) {
    take = d;
    out.window_truncated = true;
  }
  for (int i = 0; i < take; ++i) out.window_D1.push_back(fractal_dimension(sp, order[i]));
  const double n = static_cast<double>(take);
  out.mean_D1 = std::accumulate(out.window_D1.begin(), out.window_D1.end(), 0.0) / n;
  double sq = 0;
  for (double x : out.window_D1) sq += (x - out.mean_D1) * (x - out.mean_D1);
  out.var_D1 = sq / n;
  return out;
}

// ---------------------------------------------------------------------------
// peak metrics

// v_max and its grid location, the plateau estimate (mean over the top half
// decade of the grid), and the enhancement ratio.
inline PeakMetrics peak_metrics(const std::vector<double>& ju_grid,
                                const std::vector<double>& v_curve) {
  if (ju_grid.size() != v_curve.size() || ju_grid.size() < 2)
    throw std::invalid_argument("peak_metrics: malformed curve");
  if (!(ju_grid.front() <= 0.1 && ju_grid.back() >= 10.0 &&
        ju_grid.back() >= 100.0 * ju_grid.front()))
    throw std::invalid_argument("peak_metrics: grid must span two decades covering [0.1, 10]");
  PeakMetrics out;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < v_curve.size(); ++i)
    if (v_curve[i] > v_curve[imax]) imax = i;
  out.v_max = v_curve[imax];
  out.ju_at_max = ju_grid[imax];
  const double plateau_from = ju_grid.back() / std::sqrt(10.0);
  double acc = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < v_curve.size(); ++i)
    if (ju_grid[i] >= plateau_from) {
      acc += v_curve[i];
      ++cnt;
    }
  out.v_inf = acc / static_cast<double>(cnt);
  if (!(out.v_inf > 0)) throw std::runtime_error("peak_metrics: nonpositive plateau estimate");
  out.q = out.v_max / out.v_inf;
  return out;
}

// ---------------------------------------------------------------------------
// rank statistics and a small fit helper

// Ranks with ties averaged, then the Pearson correlation of the rank vectors.
inline double spearman_rank_correlation(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (y.size() != n || n < 2) throw std::invalid_argument("spearman: need two equal-length lists");
  auto ranks = [](const std::vector<double>& a) {
    const std::size_t n = a.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && a[order[j + 1]] == a[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n_d = static_cast<double>(n);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n_d;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n_d;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i2 = 0; i2 < n; ++i2) {
    sxy += (rx[i2] - mx) * (ry[i2] - my);
    sxx += (rx[i2] - mx) * (rx[i2] - mx);
    syy += (ry[i2] - my) * (ry[i2] - my);
  }
  if (sxx == 0 || syy == 0) throw std::invalid_argument("spearman: constant input");
  return sxy / std::sqrt(sxx * syy);
}

struct LinearFit {
  double slope = 0;
  double intercept = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (y.size() != n || n < 2) throw std::invalid_argument("linear_fit: need two equal-length lists");
  const double n_d = static_cast<double>(n);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n_d;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n_d;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate abscissa");
  LinearFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  return out;
}

}  // namespace pdbose
