#pragma once

// Sweep orchestration: configuration (defaults, key = value file, overrides),
// the (J/U, sample) grid driver with spectrum caching, and the CSV result set.
// Every default lives in SweepConfig; the CLI and the config file only
// override fields. CSV files are the artifact of record, each stamped with a
// schema line; plots are rendered from them separately.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "external_state.hpp"
#include "fluctuations.hpp"
#include "hubbard.hpp"
#include "internal_states.hpp"
#include "observables.hpp"
#include "sector_state.hpp"
#include "young_block.hpp"

namespace pdbose {

struct SweepConfig {
  int size = 4;              // N = L, one particle per site
  int internal_dim = 0;      // s; 0 means s = size
  std::vector<double> ju_grid;  // explicit list; wins over count/min/max
  int grid_count = 48;
  double ju_min = 0.02;
  double ju_max = 40.0;
  int samples = 100;         // alternating branches, 50 per branch at 100
  unsigned seed = 1234;
  double eps_min = 0.01;
  double eps_max = 10.0;
  enum class Observable { OperatorAveraged, SiteAveragedCorrelators, Explicit };
  Observable observable = Observable::OperatorAveraged;
  int k = 2;                 // operator order for the averaged observable
  int site_i = 2;            // pair for the explicit correlator and time series
  int site_j = 3;
  std::filesystem::path out = "results";
  bool cache = true;
  std::filesystem::path cache_dir;  // empty: PDBOSE_CACHE_DIR, else out/cache
  int window = 60;           // eigenstates around E = 0 for the chaos stats
  std::string heatmaps = "auto";    // auto | off | comma-separated J/U list
  std::string timeseries = "off";   // off | auto | ju:sample;ju:sample
  std::uint64_t max_space = 100000; // refuse L^N beyond this
  bool verbose = false;

  int s() const { return internal_dim > 0 ? internal_dim : size; }

  std::vector<double> grid() const {
    std::vector<double> g = ju_grid;
    if (g.empty()) {
      g.resize(grid_count);
      for (int i = 0; i < grid_count; ++i)
        g[i] = grid_count == 1
                   ? ju_min
                   : ju_min * std::pow(ju_max / ju_min, i / double(grid_count - 1));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  }

  SamplingBranch branch_of(int sample_id) const {
    return sample_id % 2 ? SamplingBranch::NearDistinguishable
                         : SamplingBranch::NearIndistinguishable;
  }
  double eps_of(int sample_id) const {
    if (samples <= 1) return eps_min;
    return eps_min * std::pow(eps_max / eps_min, sample_id / double(samples - 1));
  }
  unsigned seed_of(int sample_id) const { return seed + static_cast<unsigned>(sample_id); }

  std::filesystem::path resolved_cache_dir() const {
    if (!cache) return {};
    if (!cache_dir.empty()) return cache_dir;
    if (const char* env = std::getenv("PDBOSE_CACHE_DIR")) return env;
    return out / "cache";
  }
};

// ---------------------------------------------------------------------------
// configuration text: key = value lines, # comments, [section] headers ignored

inline std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section header
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                               " is not 'key = value' in " + path.string());
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
    kv[key] = val;
  }
  return kv;
}

// "48" means a log-spaced count; "0.1,1,10" is an explicit list.
inline void parse_grid_spec(const std::string& spec, SweepConfig& cfg) {
  if (spec.find(',') == std::string::npos && spec.find('.') == std::string::npos) {
    cfg.grid_count = std::stoi(spec);
    cfg.ju_grid.clear();
    return;
  }
  std::vector<double> g;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) g.push_back(std::stod(tok));
  cfg.ju_grid = std::move(g);
}

inline SweepConfig::Observable parse_observable(const std::string& s) {
  if (s == "operator-averaged") return SweepConfig::Observable::OperatorAveraged;
  if (s == "site-averaged-correlators") return SweepConfig::Observable::SiteAveragedCorrelators;
  if (s == "explicit") return SweepConfig::Observable::Explicit;
  throw std::invalid_argument("config: unknown observable '" + s + "'");
}

inline std::string observable_name(SweepConfig::Observable o) {
  switch (o) {
    case SweepConfig::Observable::OperatorAveraged: return "operator-averaged";
    case SweepConfig::Observable::SiteAveragedCorrelators: return "site-averaged-correlators";
    default: return "explicit";
  }
}

inline void apply_config(const std::map<std::string, std::string>& kv, SweepConfig& cfg) {
  for (const auto& [key, val] : kv) {
    if (key == "size") cfg.size = std::stoi(val);
    else if (key == "internal") cfg.internal_dim = std::stoi(val);
    else if (key == "grid") parse_grid_spec(val, cfg);
    else if (key == "ju_min") cfg.ju_min = std::stod(val);
    else if (key == "ju_max") cfg.ju_max = std::stod(val);
    else if (key == "samples") cfg.samples = std::stoi(val);
    else if (key == "seed") cfg.seed = static_cast<unsigned>(std::stoul(val));
    else if (key == "eps_min") cfg.eps_min = std::stod(val);
    else if (key == "eps_max") cfg.eps_max = std::stod(val);
    else if (key == "observable") cfg.observable = parse_observable(val);
    else if (key == "k") cfg.k = std::stoi(val);
    else if (key == "site_i") cfg.site_i = std::stoi(val);
    else if (key == "site_j") cfg.site_j = std::stoi(val);
    else if (key == "out") cfg.out = val;
    else if (key == "cache") cfg.cache = (val == "on" || val == "true" || val == "1");
    else if (key == "cache_dir") cfg.cache_dir = val;
    else if (key == "window") cfg.window = std::stoi(val);
    else if (key == "heatmaps") cfg.heatmaps = val;
    else if (key == "timeseries") cfg.timeseries = val;
    else if (key == "max_space") cfg.max_space = std::stoull(val);
    else if (key == "verbose") cfg.verbose = (val == "on" || val == "true" || val == "1");
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

inline void validate_config(const SweepConfig& cfg) {
  if (cfg.size < 2) throw std::invalid_argument("sweep: size must be at least 2");
  if (cfg.s() < 1) throw std::invalid_argument("sweep: internal dimension must be positive");
  if (cfg.samples < 1) throw std::invalid_argument("sweep: need at least one sample");
  if (!(cfg.eps_min > 0) || !(cfg.eps_max >= cfg.eps_min))
    throw std::invalid_argument("sweep: bad eps schedule");
  const auto g = cfg.grid();
  if (g.empty()) throw std::invalid_argument("sweep: empty coupling grid");
  for (double ju : g)
    if (!(ju > 0)) throw std::invalid_argument("sweep: coupling grid must be positive");
  if (cfg.observable == SweepConfig::Observable::OperatorAveraged &&
      !(cfg.k >= 1 && cfg.k < cfg.size))
    throw std::invalid_argument("sweep: operator order k must satisfy 1 <= k < N");
  if (cfg.observable == SweepConfig::Observable::Explicit &&
      (cfg.site_i < 1 || cfg.site_i > cfg.size || cfg.site_j < 1 || cfg.site_j > cfg.size ||
       cfg.site_i == cfg.site_j))
    throw std::invalid_argument("sweep: explicit correlator needs two distinct sites in range");
  if (cfg.window < 1) throw std::invalid_argument("sweep: chaos window must be positive");
}

// Refuse sizes whose state space exceeds the configured limit, with a cost
// estimate so the limit can be raised knowingly.
inline void ensure_feasible(const SweepConfig& cfg) {
  const std::uint64_t space = pow_u64(cfg.size, cfg.size);
  if (space <= cfg.max_space) return;
  std::uint64_t dmax = 0, flops = 0;
  for (const auto& lam : enumerate_partitions(cfg.size)) {
    const std::uint64_t d = count_semistandard_tableaux(lam, cfg.size);
    dmax = std::max(dmax, d);
    flops += 10 * d * d * d;
  }
  char msg[320];
  std::snprintf(msg, sizeof msg,
                "sweep: state space L^N = %llu exceeds the limit %llu; largest sector "
                "dimension %llu (dense eigensolve ~%.0f MB, ~%.0f s per grid point); "
                "raise max_space to proceed",
                static_cast<unsigned long long>(space),
                static_cast<unsigned long long>(cfg.max_space),
                static_cast<unsigned long long>(dmax), 3.0 * 8.0 * dmax * dmax / 1e6,
                flops / 3e10);
  throw std::runtime_error(msg);
}

// ---------------------------------------------------------------------------
// result set

struct SampleInfo {
  int sample_id = 0;
  SamplingBranch branch = SamplingBranch::NearIndistinguishable;
  double eps = 0;
  unsigned seed = 0;
  double gamma = 0;
};

struct D1Row {
  double ju = 0;
  Partition lambda;
  int d = 0;
  int window = 0;
  bool truncated = false;
  double mean_D1 = 0;
  double var_D1 = 0;
};

struct SamplePeak {
  int sample_id = 0;
  double gamma = 0;
  PeakMetrics pm;
};

struct SectorPeak {
  int sample_id = 0;
  Partition lambda;
  double gamma_lambda = 0;
  PeakMetrics pm;
};

struct ResultSet {
  SweepConfig config;
  std::vector<Partition> sectors;  // enumeration order, (N) first
  std::vector<int> dims;
  std::vector<SampleInfo> samples;
  std::vector<FluctuationRecord> records;  // grid-major, sample-minor
  std::vector<D1Row> d1;
  std::vector<SamplePeak> peaks;           // empty when the grid is too narrow
  std::vector<SectorPeak> sector_peaks;
};

// ---------------------------------------------------------------------------
// CSV writing

namespace detail {

inline std::string fnum(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("sweep: cannot write " + path.string());
  f << content;
}

inline const char* branch_name(SamplingBranch b) {
  return b == SamplingBranch::NearIndistinguishable ? "near-indistinguishable"
                                                    : "near-distinguishable";
}

}  // namespace detail

inline void write_result_csvs(const ResultSet& rs) {
  namespace fs = std::filesystem;
  const auto& cfg = rs.config;
  fs::create_directories(cfg.out);

  {
    std::string m = "# pdbose.manifest.v1\nkey,value\n";
    m += "size," + std::to_string(cfg.size) + "\n";
    m += "internal," + std::to_string(cfg.s()) + "\n";
    m += "observable," + observable_name(cfg.observable) + "\n";
    m += "k," + std::to_string(cfg.k) + "\n";
    m += "site_i," + std::to_string(cfg.site_i) + "\n";
    m += "site_j," + std::to_string(cfg.site_j) + "\n";
    std::string g;
    for (double ju : cfg.grid()) {
      if (!g.empty()) g += ' ';
      g += detail::fnum(ju);
    }
    m += "grid," + g + "\n";
    m += "samples," + std::to_string(cfg.samples) + "\n";
    m += "seed," + std::to_string(cfg.seed) + "\n";
    m += "eps_min," + detail::fnum(cfg.eps_min) + "\n";
    m += "eps_max," + detail::fnum(cfg.eps_max) + "\n";
    m += "window," + std::to_string(cfg.window) + "\n";
    m += std::string("cache,") + (cfg.cache ? "on" : "off") + "\n";
    m += "heatmaps," + cfg.heatmaps + "\n";
    m += "timeseries," + cfg.timeseries + "\n";
    std::string secs;
    for (std::size_t i = 0; i < rs.sectors.size(); ++i) {
      if (i) secs += ' ';
      secs += rs.sectors[i].label() + ":" + std::to_string(rs.dims[i]);
    }
    m += "sectors," + secs + "\n";
    detail::write_file(cfg.out / "manifest.csv", m);
  }

  {
    std::string s = "# pdbose.samples.v1\nsample_id,branch,eps,seed,gamma\n";
    for (const auto& si : rs.samples)
      s += std::to_string(si.sample_id) + "," + detail::branch_name(si.branch) + "," +
           detail::fnum(si.eps) + "," + std::to_string(si.seed) + "," + detail::fnum(si.gamma) +
           "\n";
    detail::write_file(cfg.out / "samples.csv", s);
  }

  {
    std::string r = "# pdbose.records.v1\nju,sample_id,gamma,v,degenerate\n";
    for (const auto& rec : rs.records)
      r += detail::fnum(rec.ju) + "," + std::to_string(rec.sample_id) + "," +
           detail::fnum(rs.samples[rec.sample_id].gamma) + "," + detail::fnum(rec.v) + "," +
           (rec.degenerate ? "1" : "0") + "\n";
    detail::write_file(cfg.out / "records.csv", r);
  }

  {
    std::string r =
        "# pdbose.sector_records.v1\n"
        "ju,sample_id,lambda,d,p,gamma_lambda,I_lambda,v_lambda,W_lambda,A_lambda,d_eff,R_lambda\n";
    for (const auto& rec : rs.records)
      for (std::size_t i = 0; i < rs.sectors.size(); ++i)
        r += detail::fnum(rec.ju) + "," + std::to_string(rec.sample_id) + "," +
             rs.sectors[i].label() + "," + std::to_string(rs.dims[i]) + "," +
             detail::fnum(rec.p_lambda[i]) + "," + detail::fnum(rec.gamma_lambda[i]) + "," +
             detail::fnum(rec.I_lambda[i]) + "," + detail::fnum(rec.v_lambda[i]) + "," +
             detail::fnum(rec.W_lambda[i]) + "," + detail::fnum(rec.A_lambda[i]) + "," +
             detail::fnum(rec.d_eff[i]) + "," + detail::fnum(rec.R_lambda[i]) + "\n";
    detail::write_file(cfg.out / "sector_records.csv", r);
  }

  {
    std::string r = "# pdbose.d1stats.v1\nju,lambda,d,window,truncated,mean_D1,var_D1\n";
    for (const auto& row : rs.d1)
      r += detail::fnum(row.ju) + "," + row.lambda.label() + "," + std::to_string(row.d) + "," +
           std::to_string(row.window) + "," + (row.truncated ? "1" : "0") + "," +
           detail::fnum(row.mean_D1) + "," + detail::fnum(row.var_D1) + "\n";
    detail::write_file(cfg.out / "d1stats.csv", r);
  }

  if (!rs.peaks.empty()) {
    std::string r = "# pdbose.peaks.v1\nsample_id,gamma,v_max,ju_at_max,v_inf,q\n";
    for (const auto& pk : rs.peaks)
      r += std::to_string(pk.sample_id) + "," + detail::fnum(pk.gamma) + "," +
           detail::fnum(pk.pm.v_max) + "," + detail::fnum(pk.pm.ju_at_max) + "," +
           detail::fnum(pk.pm.v_inf) + "," + detail::fnum(pk.pm.q) + "\n";
    detail::write_file(cfg.out / "peaks.csv", r);
  }

  if (!rs.sector_peaks.empty()) {
    std::string r =
        "# pdbose.sector_peaks.v1\nsample_id,lambda,gamma_lambda,v_max,ju_at_max,v_inf,q\n";
    for (const auto& pk : rs.sector_peaks)
      r += std::to_string(pk.sample_id) + "," + pk.lambda.label() + "," +
           detail::fnum(pk.gamma_lambda) + "," + detail::fnum(pk.pm.v_max) + "," +
           detail::fnum(pk.pm.ju_at_max) + "," + detail::fnum(pk.pm.v_inf) + "," +
           detail::fnum(pk.pm.q) + "\n";
    detail::write_file(cfg.out / "sector_peaks.csv", r);
  }
}

// ---------------------------------------------------------------------------
// sweep driver

namespace detail {

// nearest grid point to each requested value, deduplicated, grid order
inline std::vector<std::size_t> nearest_grid_points(const std::vector<double>& grid,
                                                    const std::vector<double>& wanted) {
  std::vector<std::size_t> idx;
  for (double w : wanted) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (std::abs(std::log(grid[i] / w)) < std::abs(std::log(grid[best] / w))) best = i;
    if (std::find(idx.begin(), idx.end(), best) == idx.end()) idx.push_back(best);
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline std::vector<std::size_t> heatmap_points(const SweepConfig& cfg,
                                               const std::vector<double>& grid) {
  if (cfg.observable != SweepConfig::Observable::OperatorAveraged || cfg.heatmaps == "off")
    return {};
  if (cfg.heatmaps == "auto") return nearest_grid_points(grid, {0.2, 1.0, 5.0});
  std::vector<double> wanted;
  std::stringstream ss(cfg.heatmaps);
  std::string tok;
  while (std::getline(ss, tok, ',')) wanted.push_back(std::stod(tok));
  return nearest_grid_points(grid, wanted);
}

struct SeriesRequest {
  std::size_t grid_index = 0;
  int sample_id = 0;
};

inline std::vector<SeriesRequest> series_requests(const SweepConfig& cfg,
                                                  const std::vector<double>& grid,
                                                  const std::vector<SampleInfo>& samples) {
  if (cfg.timeseries == "off") return {};
  std::vector<SeriesRequest> out;
  if (cfg.timeseries == "auto") {
    int lo = 0, hi = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].gamma < samples[lo].gamma) lo = static_cast<int>(i);
      if (samples[i].gamma > samples[hi].gamma) hi = static_cast<int>(i);
    }
    for (std::size_t g : nearest_grid_points(grid, {0.4, 4.1})) {
      out.push_back({g, hi});
      if (lo != hi) out.push_back({g, lo});
    }
    return out;
  }
  std::stringstream ss(cfg.timeseries);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("sweep: timeseries entry '" + tok + "' is not ju:sample");
    const double ju = std::stod(tok.substr(0, colon));
    const int sid = std::stoi(tok.substr(colon + 1));
    if (sid < 0 || sid >= cfg.samples)
      throw std::invalid_argument("sweep: timeseries sample out of range in '" + tok + "'");
    out.push_back({nearest_grid_points(grid, {ju}).front(), sid});
  }
  return out;
}

}  // namespace detail

inline ResultSet run_sweep(const SweepConfig& cfg) {
  validate_config(cfg);
  ensure_feasible(cfg);
  const auto grid = cfg.grid();
  const auto cache_dir = cfg.resolved_cache_dir();
  const int L = cfg.size, N = cfg.size;

  ResultSet rs;
  rs.config = cfg;

  TensorSpace ts(L, N);
  std::vector<YoungBasisBlock> blocks;
  std::vector<SectorOperators> ops;
  for (const auto& lam : enumerate_partitions(N)) {
    OrthogonalRep rep(lam);
    blocks.push_back(load_or_build_young_block(cache_dir, rep, ts));
    ops.push_back(sector_operators(blocks.back(), ts));
    rs.sectors.push_back(lam);
    rs.dims.push_back(blocks.back().dim());
  }
  const std::size_t nsec = blocks.size();

  std::vector<ExternalState> exts;
  for (int i = 0; i < cfg.samples; ++i) {
    auto S = gram_matrix(sample_internal_states(cfg.branch_of(i), cfg.eps_of(i), cfg.s(), N,
                                                cfg.seed_of(i)));
    exts.push_back(reduced_external_state(S, ts));
    rs.samples.push_back({i, cfg.branch_of(i), cfg.eps_of(i), cfg.seed_of(i), exts.back().gamma});
  }
  std::vector<MottSectorBasis> bases;
  for (const auto& b : blocks) bases.push_back(make_mott_sector_basis(b, ts, exts[0].support));

  // site pairs for the correlator average
  std::vector<std::pair<int, int>> pairs;
  if (cfg.observable == SweepConfig::Observable::SiteAveragedCorrelators) {
    for (int i = 1; i <= L; ++i)
      for (int j = i + 1; j <= L; ++j) pairs.push_back({i, j});
  }

  const auto heat_at = detail::heatmap_points(cfg, grid);
  std::string heat_csv;

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double ju = grid[g];
    std::vector<SectorSpectrum> spectra;
    for (std::size_t b = 0; b < nsec; ++b)
      spectra.push_back(load_or_compute_spectrum(cache_dir, ops[b], L, N, ju, 1.0));
    const auto audit = degeneracy_audit(spectra);

    std::vector<ObservableMatrix> oms;
    std::vector<double> W(nsec), A(nsec);
    for (std::size_t b = 0; b < nsec; ++b) {
      switch (cfg.observable) {
        case SweepConfig::Observable::OperatorAveraged:
          oms.push_back(averaged_offdiagonal(spectra[b], blocks[b], cfg.k));
          break;
        case SweepConfig::Observable::SiteAveragedCorrelators: {
          ObservableMatrix om;
          om.lambda = blocks[b].lambda;
          const int d = blocks[b].dim();
          om.M = Eigen::MatrixXd::Zero(d, d);
          for (const auto& [i, j] : pairs) {
            Eigen::MatrixXd raw =
                correlator_eigen(correlator_diag_young(blocks[b], ts, i, j), spectra[b]);
            om.M += raw.cwiseProduct(raw);
          }
          om.M /= static_cast<double>(pairs.size());
          oms.push_back(std::move(om));
          break;
        }
        case SweepConfig::Observable::Explicit:
          oms.push_back(
              density_correlator_elements(cfg.site_i, cfg.site_j, spectra[b], blocks[b], ts));
          break;
      }
      W[b] = bandwidth(oms[b]).W;
      A[b] = strength(oms[b]);
    }

    if (std::find(heat_at.begin(), heat_at.end(), g) != heat_at.end()) {
      const auto& M = oms[0].M;  // totally symmetric sector
      for (int a = 0; a < M.rows(); ++a)
        for (int b2 = 0; b2 < M.cols(); ++b2)
          heat_csv += detail::fnum(ju) + "," + rs.sectors[0].label() + "," + std::to_string(a) +
                      "," + std::to_string(b2) + "," + detail::fnum(M(a, b2)) + "\n";
    }

    for (std::size_t b = 0; b < nsec; ++b) {
      auto diag = fractal_diagnostics(spectra[b], 0.0, cfg.window);
      rs.d1.push_back({ju, rs.sectors[b], rs.dims[b], cfg.window, diag.window_truncated,
                       diag.mean_D1, diag.var_D1});
    }

    for (int si = 0; si < cfg.samples; ++si) {
      auto states = sector_decompose(exts[si], bases, spectra);
      FluctuationRecord rec;
      rec.ju = ju;
      rec.sample_id = si;
      rec.degenerate = audit.flagged;
      for (std::size_t b = 0; b < nsec; ++b) {
        rec.p_lambda.push_back(states[b].p);
        rec.gamma_lambda.push_back(states[b].gamma_lambda);
        rec.I_lambda.push_back(states[b].ipr);
        rec.v_lambda.push_back(sector_temporal_variance(states[b], oms[b]));
        rec.W_lambda.push_back(W[b]);
        rec.A_lambda.push_back(A[b]);
        rec.v += states[b].p * states[b].p * rec.v_lambda.back();
      }
      rec.d_eff.resize(nsec, 0.0);
      rec.R_lambda.resize(nsec, 0.0);
      rs.records.push_back(std::move(rec));
    }
    if (cfg.verbose)
      std::fprintf(stderr, "sweep: ju %.4g (%zu/%zu) done\n", ju, g + 1, grid.size());
  }

  // effective dimension needs the delocalization at the strongest coupling:
  // calibrate per (sample, sector) from the last grid point, then fill R
  const std::size_t S = static_cast<std::size_t>(cfg.samples);
  for (std::size_t si = 0; si < S; ++si) {
    const auto& last = rs.records[(grid.size() - 1) * S + si];
    for (auto gi = std::size_t{0}; gi < grid.size(); ++gi) {
      auto& rec = rs.records[gi * S + si];
      for (std::size_t b = 0; b < nsec; ++b) {
        const double C = rs.dims[b] * last.I_lambda[b];
        rec.d_eff[b] = rec.I_lambda[b] > 0
                           ? effective_dimension(rec.I_lambda[b], C, rs.dims[b])
                           : 0.0;
      }
      auto fac = factorized_model(rec.gamma_lambda, rec.I_lambda, rec.A_lambda, rec.W_lambda,
                                  rec.d_eff);
      for (std::size_t b = 0; b < nsec; ++b) rec.R_lambda[b] = fac[b].R;
    }
  }

  // peak metrics per sample (and per sector) when the grid spans enough
  const bool wide = grid.size() >= 2 && grid.front() <= 0.1 && grid.back() >= 10.0 &&
                    grid.back() >= 100.0 * grid.front();
  if (wide) {
    for (std::size_t si = 0; si < S; ++si) {
      std::vector<double> curve;
      for (std::size_t gi = 0; gi < grid.size(); ++gi)
        curve.push_back(rs.records[gi * S + si].v);
      if (std::all_of(curve.begin(), curve.end(), [](double c) { return c > 0; }))
        rs.peaks.push_back({static_cast<int>(si), rs.samples[si].gamma, peak_metrics(grid, curve)});
      for (std::size_t b = 0; b < nsec; ++b) {
        std::vector<double> sec;
        for (std::size_t gi = 0; gi < grid.size(); ++gi)
          sec.push_back(rs.records[gi * S + si].v_lambda[b]);
        if (!std::all_of(sec.begin(), sec.end(), [](double c) { return c > 0; })) continue;
        rs.sector_peaks.push_back({static_cast<int>(si), rs.sectors[b],
                                   rs.records[si].gamma_lambda[b], peak_metrics(grid, sec)});
      }
    }
  }

  write_result_csvs(rs);

  if (!heat_csv.empty())
    detail::write_file(cfg.out / "heatmaps.csv",
                       "# pdbose.heatmaps.v1\nju,lambda,alpha,beta,value\n" + heat_csv);

  // requested time series of the explicit pair correlator
  const auto reqs = detail::series_requests(cfg, grid, rs.samples);
  if (!reqs.empty()) {
    std::string tscsv = "# pdbose.timeseries.v1\nju,sample_id,t,value\n";
    for (const auto& rq : reqs) {
      const double ju = grid[rq.grid_index];
      std::vector<SectorSpectrum> spectra;
      std::vector<Eigen::MatrixXd> raws;
      for (std::size_t b = 0; b < nsec; ++b) {
        spectra.push_back(load_or_compute_spectrum(cache_dir, ops[b], L, N, ju, 1.0));
        raws.push_back(correlator_eigen(
            correlator_diag_young(blocks[b], ts, cfg.site_i, cfg.site_j), spectra.back()));
      }
      auto states = sector_decompose(exts[rq.sample_id], bases, spectra);
      auto series = time_series_oracle(states, raws, spectra, default_time_grid(spectra));
      for (std::size_t i = 0; i < series.t.size(); ++i)
        tscsv += detail::fnum(ju) + "," + std::to_string(rq.sample_id) + "," +
                 detail::fnum(series.t[i]) + "," + detail::fnum(series.value[i]) + "\n";
    }
    detail::write_file(cfg.out / "timeseries.csv", tscsv);
  }

  return rs;
}

// ---------------------------------------------------------------------------
// sector dimension table (exact integer counts, no basis construction)

inline std::string dims_table(int n) {
  if (n < 1) throw std::invalid_argument("dims: size must be positive");
  std::string out = "lambda,nu,d,nu_times_d\n";
  std::uint64_t total = 0;
  for (const auto& lam : enumerate_partitions(n)) {
    const std::uint64_t nu = count_standard_tableaux(lam);
    const std::uint64_t d = count_semistandard_tableaux(lam, n);
    total += nu * d;
    out += lam.label() + "," + std::to_string(nu) + "," + std::to_string(d) + "," +
           std::to_string(nu * d) + "\n";
  }
  out += "total,,," + std::to_string(total) + "\n";
  out += "check_L_to_N,,," + std::to_string(pow_u64(n, n)) + "\n";
  return out;
}

}  // namespace pdbose
