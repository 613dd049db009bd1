#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>

#include <pdbose/emit.hpp>
#include <pdbose/fluctuations.hpp>
#include <pdbose/sweep.hpp>

namespace {

int run_dims(int size) {
  std::fputs(pdbose::dims_table(size).c_str(), stdout);
  return 0;
}

int run_oracle(int size, double ju, double eps, const std::string& branch, std::uint64_t seed,
               int points, double periods, int site_i, int site_j, const std::string& dump) {
  using namespace pdbose;
  const int L = size, N = size;
  TensorSpace ts(L, N);
  const auto partitions = enumerate_partitions(N);

  std::vector<YoungBasisBlock> blocks;
  std::vector<SectorSpectrum> spectra;
  for (const auto& lam : partitions) {
    blocks.push_back(build_young_block(OrthogonalRep(lam), ts));
    auto ops = sector_operators(blocks.back(), ts);
    spectra.push_back(diagonalize_sector(lam, sector_hamiltonian(ops, ju, 1.0)));
  }

  SamplingBranch br;
  if (branch == "near-indistinguishable")
    br = SamplingBranch::NearIndistinguishable;
  else if (branch == "near-distinguishable")
    br = SamplingBranch::NearDistinguishable;
  else
    throw std::invalid_argument("oracle: branch must be near-indistinguishable or "
                                "near-distinguishable");
  auto internal = sample_internal_states(br, eps, N, N, seed);
  auto ext = reduced_external_state(gram_matrix(internal), ts);

  std::vector<MottSectorBasis> bases;
  for (const auto& b : blocks) bases.push_back(make_mott_sector_basis(b, ts, ext.support));
  auto states = sector_decompose(ext, bases, spectra);

  std::vector<ObservableMatrix> oms;
  std::vector<Eigen::MatrixXd> raws;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    oms.push_back(density_correlator_elements(site_i, site_j, spectra[b], blocks[b], ts));
    raws.push_back(correlator_eigen(correlator_diag_young(blocks[b], ts, site_i, site_j),
                                    spectra[b]));
  }

  const double vspec = temporal_variance_exact(states, oms);
  const auto audit = degeneracy_audit(spectra);
  auto series = time_series_oracle(states, raws, spectra, default_time_grid(spectra, points, periods));

  std::printf("gamma            %.12g\n", ext.gamma);
  std::printf("v_spectral       %.12g\n", vspec);
  std::printf("v_empirical      %.12g\n", series.var);
  std::printf("rel_error        %.3g\n", vspec > 0 ? std::abs(series.var - vspec) / vspec : 0.0);
  std::printf("mean_empirical   %.12g\n", series.mean);
  std::printf("mean_stationary  %.12g\n", stationary_mean(states, raws));
  std::printf("t_gap_product    %.6g\n", series.t_gap_product);
  std::printf("audit            levels=%d gaps=%d flagged=%d\n", audit.level_collisions,
              audit.gap_collisions, int(audit.flagged));
  if (series.insufficient)
    std::printf("warning          time grid shorter than 1e3 periods of the slowest beat\n");
  if (!dump.empty()) {
    std::string csv = "# pdbose.oracle.v1\nt,value\n";
    for (std::size_t i = 0; i < series.t.size(); ++i)
      csv += pdbose::detail::fnum(series.t[i]) + "," + pdbose::detail::fnum(series.value[i]) + "\n";
    pdbose::detail::write_file(dump, csv);
    std::printf("dump             %s\n", dump.c_str());
  }
  return audit.flagged && audit.level_collisions > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdbose: sector-resolved Bose-Hubbard dynamics of partially distinguishable bosons"};
  app.require_subcommand(1);

  // dims: sector table for the Mott-size lattice
  auto* dims = app.add_subcommand("dims", "print the symmetry-sector dimension table for N = L");
  int dims_size = 6;
  dims->add_option("--size", dims_size, "particle count (= lattice size)")
      ->check(CLI::Range(1, 12));

  // sweep: full pipeline
  auto* sw = app.add_subcommand("sweep", "run a coupling sweep and write result CSVs");
  std::string sw_config, sw_grid, sw_observable, sw_cache, sw_cache_dir, sw_out, sw_heatmaps,
      sw_timeseries;
  int sw_size = 0, sw_internal = 0, sw_samples = 0, sw_k = 0, sw_site_i = 0, sw_site_j = 0,
      sw_window = 0;
  double sw_ju_min = 0, sw_ju_max = 0, sw_eps_min = 0, sw_eps_max = 0;
  std::uint64_t sw_seed = 0, sw_max_space = 0;
  bool sw_verbose = false;
  sw->add_option("--config", sw_config, "key = value config file; command line flags override it");
  sw->add_option("--size", sw_size, "particle count (= lattice size)");
  sw->add_option("--internal", sw_internal, "internal-state dimension (0 means = size)");
  sw->add_option("--grid", sw_grid, "point count for a log grid, or an explicit J/U list");
  sw->add_option("--ju-min", sw_ju_min, "log grid lower edge");
  sw->add_option("--ju-max", sw_ju_max, "log grid upper edge");
  sw->add_option("--samples", sw_samples, "number of sampled internal-state tuples");
  sw->add_option("--seed", sw_seed, "base seed; sample i uses seed + i");
  sw->add_option("--eps-min", sw_eps_min, "smallest sampling spread");
  sw->add_option("--eps-max", sw_eps_max, "largest sampling spread");
  sw->add_option("--observable", sw_observable,
                 "operator-averaged | site-averaged-correlators | explicit");
  sw->add_option("--k", sw_k, "body count for the operator-averaged observable");
  sw->add_option("--site-i", sw_site_i, "first site of the explicit pair correlator");
  sw->add_option("--site-j", sw_site_j, "second site of the explicit pair correlator");
  sw->add_option("--out", sw_out, "output directory for the result CSVs");
  sw->add_option("--cache", sw_cache, "on | off: reuse bases and spectra across runs");
  sw->add_option("--cache-dir", sw_cache_dir, "cache location (default PDBOSE_CACHE_DIR or out/cache)");
  sw->add_option("--window", sw_window, "eigenstate count for the delocalization window");
  sw->add_option("--heatmaps", sw_heatmaps, "auto | off | comma list of J/U values");
  sw->add_option("--timeseries", sw_timeseries, "off | auto | ju:sample;... pairs");
  sw->add_option("--max-space", sw_max_space, "refuse configurations with L^N beyond this");
  sw->add_flag("--verbose", sw_verbose, "print per-grid-point progress");
  auto build_sweep_config = [&]() {
    pdbose::SweepConfig cfg;
    if (!sw_config.empty()) pdbose::apply_config(pdbose::parse_config_file(sw_config), cfg);
    std::map<std::string, std::string> kv;
    if (sw->count("--size")) kv["size"] = std::to_string(sw_size);
    if (sw->count("--internal")) kv["internal"] = std::to_string(sw_internal);
    if (sw->count("--grid")) kv["grid"] = sw_grid;
    if (sw->count("--ju-min")) kv["ju_min"] = pdbose::detail::fnum(sw_ju_min);
    if (sw->count("--ju-max")) kv["ju_max"] = pdbose::detail::fnum(sw_ju_max);
    if (sw->count("--samples")) kv["samples"] = std::to_string(sw_samples);
    if (sw->count("--seed")) kv["seed"] = std::to_string(sw_seed);
    if (sw->count("--eps-min")) kv["eps_min"] = pdbose::detail::fnum(sw_eps_min);
    if (sw->count("--eps-max")) kv["eps_max"] = pdbose::detail::fnum(sw_eps_max);
    if (sw->count("--observable")) kv["observable"] = sw_observable;
    if (sw->count("--k")) kv["k"] = std::to_string(sw_k);
    if (sw->count("--site-i")) kv["site_i"] = std::to_string(sw_site_i);
    if (sw->count("--site-j")) kv["site_j"] = std::to_string(sw_site_j);
    if (sw->count("--out")) kv["out"] = sw_out;
    if (sw->count("--cache")) kv["cache"] = sw_cache;
    if (sw->count("--cache-dir")) kv["cache_dir"] = sw_cache_dir;
    if (sw->count("--window")) kv["window"] = std::to_string(sw_window);
    if (sw->count("--heatmaps")) kv["heatmaps"] = sw_heatmaps;
    if (sw->count("--timeseries")) kv["timeseries"] = sw_timeseries;
    if (sw->count("--max-space")) kv["max_space"] = std::to_string(sw_max_space);
    if (sw_verbose) kv["verbose"] = "on";
    pdbose::apply_config(kv, cfg);
    return cfg;
  };

  // oracle: one sample, spectral variance against a long time average
  auto* orc = app.add_subcommand("oracle",
                                 "cross-check the spectral variance against a sampled time average");
  int orc_size = 3, orc_points = 4096, orc_site_i = 2, orc_site_j = 3;
  double orc_ju = 1.0, orc_eps = 0.5, orc_periods = 1e3;
  std::uint64_t orc_seed = 11;
  std::string orc_branch = "near-indistinguishable", orc_pair, orc_dump;
  orc->add_option("--size", orc_size, "particle count (= lattice size)")->check(CLI::Range(2, 5));
  orc->add_option("--ju", orc_ju, "coupling J/U")->check(CLI::PositiveNumber);
  orc->add_option("--eps", orc_eps, "sampling spread")->check(CLI::PositiveNumber);
  orc->add_option("--branch", orc_branch, "near-indistinguishable | near-distinguishable");
  orc->add_option("--seed", orc_seed, "sample seed");
  orc->add_option("--points", orc_points, "time samples")->check(CLI::Range(16, 1 << 20));
  orc->add_option("--periods", orc_periods, "grid length in periods of the slowest beat")
      ->check(CLI::PositiveNumber);
  orc->add_option("--pair", orc_pair, "correlator sites as i,j (1-based; default 2,3)");
  orc->add_option("--dump", orc_dump, "write the sampled series to this CSV path");
  orc->callback([&]() {
    if (!orc_pair.empty()) {
      const auto comma = orc_pair.find(',');
      if (comma == std::string::npos)
        throw CLI::ValidationError("--pair", "expected i,j");
      orc_site_i = std::stoi(orc_pair.substr(0, comma));
      orc_site_j = std::stoi(orc_pair.substr(comma + 1));
    }
    if (orc_site_i < 1 || orc_site_i > orc_size || orc_site_j < 1 || orc_site_j > orc_size ||
        orc_site_i == orc_site_j)
      throw CLI::ValidationError("--pair", "sites must be distinct and within the lattice");
  });

  // emit: plot CSVs and SVGs from a finished sweep
  auto* em = app.add_subcommand("emit", "render plot CSVs and SVGs from sweep results");
  std::string em_in = "results", em_which = "curves", em_out;
  em->add_option("--in", em_in, "directory holding the sweep CSVs");
  em->add_option("--which", em_which, "curves | sectors | curves-correlator | heat | factor | raw");
  em->add_option("--out", em_out, "output directory (default: same as --in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dims->parsed()) return run_dims(dims_size);
    if (sw->parsed()) {
      auto rs = pdbose::run_sweep(build_sweep_config());
      std::printf("sweep: %zu grid points x %d samples -> %s\n", rs.config.grid().size(),
                  rs.config.samples, rs.config.out.c_str());
      return 0;
    }
    if (orc->parsed())
      return run_oracle(orc_size, orc_ju, orc_eps, orc_branch, orc_seed, orc_points, orc_periods,
                        orc_site_i, orc_site_j, orc_dump);
    if (em->parsed()) {
      auto written = pdbose::emit_outputs(em_in, pdbose::parse_emit_target(em_which),
                                          em_out.empty() ? em_in : em_out);
      for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pdbose: %s\n", e.what());
    return 1;
  }
  return 0;
}
