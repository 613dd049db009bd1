#pragma once

// Plot emission: reads the sweep output CSVs and writes per-target CSV extracts
// plus static SVG renderings. The CSVs are the artifact of record; the SVGs
// are reading aids with plain axes, not publication typography.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweep.hpp"

namespace pdbose {

enum class EmitTarget { Curves, SectorPanels, CurvesCorrelator, Heat, Factor, Raw };

inline EmitTarget parse_emit_target(const std::string& s) {
  if (s == "curves") return EmitTarget::Curves;
  if (s == "sectors") return EmitTarget::SectorPanels;
  if (s == "curves-correlator") return EmitTarget::CurvesCorrelator;
  if (s == "heat") return EmitTarget::Heat;
  if (s == "factor") return EmitTarget::Factor;
  if (s == "raw") return EmitTarget::Raw;
  throw std::invalid_argument("emit: unknown target '" + s +
                              "' (expected curves|sectors|curves-correlator|heat|factor|raw)");
}

namespace detail {

struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name, const std::string& file) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw std::runtime_error("emit: column '" + name + "' absent from " + file);
  }
};

inline CsvTable read_csv(const std::filesystem::path& path, const std::string& missing_hint) {
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("emit: " + path.filename().string() + " not found in " +
                             path.parent_path().string() + "; " + missing_hint);
  CsvTable t;
  std::string line;
  if (!std::getline(f, t.schema) || t.schema.rfind("# pdbose.", 0) != 0)
    throw std::runtime_error("emit: " + path.string() + " lacks a pdbose schema line");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
  };
  if (!std::getline(f, line)) throw std::runtime_error("emit: " + path.string() + " is empty");
  t.header = split(line);
  while (std::getline(f, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

inline std::map<std::string, std::string> read_manifest(const std::filesystem::path& dir,
                                                        const std::string& hint) {
  auto t = read_csv(dir / "manifest.csv", hint);
  const int kc = t.col("key", "manifest.csv"), vc = t.col("value", "manifest.csv");
  std::map<std::string, std::string> kv;
  for (const auto& r : t.rows) kv[r[kc]] = r[vc];
  return kv;
}

// ---------------------------------------------------------------------------
// SVG kit

struct Svg {
  double w = 0, h = 0;
  int nclip = 0;
  std::string defs, body;

  std::string finish() const {
    char head[160];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\">\n",
                  w, h, w, h);
    return head + ("<defs>\n" + defs + "</defs>\n<rect width=\"100%\" height=\"100%\" "
                   "fill=\"white\"/>\n") +
           body + "</svg>\n";
  }
};

struct Frame {
  double x0 = 0, y0 = 0, w = 0, h = 0;  // pixel box, y0 at the top
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool logx = false, logy = false;
  std::string clip_ref;

  double fx(double x) const {
    const double u = logx ? std::log(x / xmin) / std::log(xmax / xmin)
                          : (x - xmin) / (xmax - xmin);
    return x0 + w * u;
  }
  double fy(double y) const {
    const double u = logy ? std::log(y / ymin) / std::log(ymax / ymin)
                          : (y - ymin) / (ymax - ymin);
    return y0 + h * (1.0 - u);
  }
  bool valid(double x, double y) const {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (logx && !(x > 0)) return false;
    if (logy && !(y > 0)) return false;
    return true;
  }
};

inline std::string num2(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

inline void svg_text(Svg& s, double x, double y, const std::string& txt, double size = 11,
                     const char* anchor = "middle", const char* extra = "") {
  s.body += "<text x=\"" + num2(x) + "\" y=\"" + num2(y) + "\" font-size=\"" + num2(size) +
            "\" text-anchor=\"" + anchor + "\" " + extra + ">" + txt + "</text>\n";
}

inline void axes(Svg& s, Frame& f, const std::string& xlabel, const std::string& ylabel,
                 const std::string& title) {
  const std::string id = "clip" + std::to_string(s.nclip++);
  s.defs += "<clipPath id=\"" + id + "\"><rect x=\"" + num2(f.x0) + "\" y=\"" + num2(f.y0) +
            "\" width=\"" + num2(f.w) + "\" height=\"" + num2(f.h) + "\"/></clipPath>\n";
  f.clip_ref = "url(#" + id + ")";
  s.body += "<rect x=\"" + num2(f.x0) + "\" y=\"" + num2(f.y0) + "\" width=\"" + num2(f.w) +
            "\" height=\"" + num2(f.h) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  auto xtick = [&](double x, const std::string& lab) {
    const double px = f.fx(x);
    s.body += "<line x1=\"" + num2(px) + "\" y1=\"" + num2(f.y0 + f.h) + "\" x2=\"" + num2(px) +
              "\" y2=\"" + num2(f.y0 + f.h + 4) + "\" stroke=\"#333\"/>\n";
    svg_text(s, px, f.y0 + f.h + 15, lab, 9);
  };
  auto ytick = [&](double y, const std::string& lab) {
    const double py = f.fy(y);
    s.body += "<line x1=\"" + num2(f.x0 - 4) + "\" y1=\"" + num2(py) + "\" x2=\"" + num2(f.x0) +
              "\" y2=\"" + num2(py) + "\" stroke=\"#333\"/>\n";
    svg_text(s, f.x0 - 6, py + 3, lab, 9, "end");
  };
  auto glabel = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return std::string(b);
  };
  if (f.logx) {
    for (int p = static_cast<int>(std::ceil(std::log10(f.xmin) - 1e-9));
         p <= static_cast<int>(std::floor(std::log10(f.xmax) + 1e-9)); ++p)
      xtick(std::pow(10.0, p), glabel(std::pow(10.0, p)));
  } else {
    for (int i = 0; i <= 4; ++i) {
      const double x = f.xmin + (f.xmax - f.xmin) * i / 4.0;
      xtick(x, glabel(x));
    }
  }
  if (f.logy) {
    for (int p = static_cast<int>(std::ceil(std::log10(f.ymin) - 1e-9));
         p <= static_cast<int>(std::floor(std::log10(f.ymax) + 1e-9)); ++p)
      ytick(std::pow(10.0, p), glabel(std::pow(10.0, p)));
  } else {
    for (int i = 0; i <= 4; ++i) {
      const double y = f.ymin + (f.ymax - f.ymin) * i / 4.0;
      ytick(y, glabel(y));
    }
  }
  svg_text(s, f.x0 + f.w / 2, f.y0 + f.h + 28, xlabel, 11);
  svg_text(s, f.x0 - 34, f.y0 + f.h / 2, ylabel, 11, "middle",
           ("transform=\"rotate(-90 " + num2(f.x0 - 34) + " " + num2(f.y0 + f.h / 2) + ")\"")
               .c_str());
  if (!title.empty()) svg_text(s, f.x0 + f.w / 2, f.y0 - 6, title, 11);
}

inline void polyline(Svg& s, const Frame& f, const std::vector<double>& xs,
                     const std::vector<double>& ys, const std::string& color, double width = 1.2,
                     bool dashed = false) {
  std::string run;
  auto flush = [&]() {
    if (run.empty()) return;
    s.body += "<polyline points=\"" + run + "\" fill=\"none\" stroke=\"" + color +
              "\" stroke-width=\"" + num2(width) + "\"" +
              (dashed ? " stroke-dasharray=\"5,3\"" : "") + " clip-path=\"" + f.clip_ref +
              "\"/>\n";
    run.clear();
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!f.valid(xs[i], ys[i])) {
      flush();
      continue;
    }
    if (!run.empty()) run += ' ';
    run += num2(f.fx(xs[i])) + "," + num2(f.fy(ys[i]));
  }
  flush();
}

inline void scatter(Svg& s, const Frame& f, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& color, double r = 2.5) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!f.valid(xs[i], ys[i])) continue;
    s.body += "<circle cx=\"" + num2(f.fx(xs[i])) + "\" cy=\"" + num2(f.fy(ys[i])) + "\" r=\"" +
              num2(r) + "\" fill=\"" + color + "\" clip-path=\"" + f.clip_ref + "\"/>\n";
  }
}

inline std::string rgb_hex(double r, double g, double b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * std::clamp(r, 0.0, 1.0)),
                static_cast<int>(255 * std::clamp(g, 0.0, 1.0)),
                static_cast<int>(255 * std::clamp(b, 0.0, 1.0)));
  return buf;
}

// dark violet through teal to yellow
inline std::string viridis(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const double s0[3] = {0.267, 0.005, 0.329}, s1[3] = {0.128, 0.567, 0.551},
               s2[3] = {0.993, 0.906, 0.144};
  double c[3];
  if (u < 0.5)
    for (int i = 0; i < 3; ++i) c[i] = s0[i] + (s1[i] - s0[i]) * (u / 0.5);
  else
    for (int i = 0; i < 3; ++i) c[i] = s1[i] + (s2[i] - s1[i]) * ((u - 0.5) / 0.5);
  return rgb_hex(c[0], c[1], c[2]);
}

inline std::string gamma_color(double g, double lo, double hi) {
  return viridis(hi > lo ? (g - lo) / (hi - lo) : 0.5);
}

inline const char* sector_color(std::size_t i) {
  static const char* pal[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860",
                              "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd", "#393b79"};
  return pal[i % 11];
}

// six largest sectors from a table with lambda and d columns, dimension order
inline std::vector<std::string> largest_sectors(const CsvTable& t, const std::string& file,
                                                std::size_t count = 6) {
  const int lc = t.col("lambda", file), dc = t.col("d", file);
  std::map<std::string, int> dim;
  for (const auto& r : t.rows) dim[r[lc]] = std::stoi(r[dc]);
  std::vector<std::pair<int, std::string>> byd;
  for (const auto& [lab, d] : dim) byd.push_back({d, lab});
  std::stable_sort(byd.begin(), byd.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out;
  for (const auto& [d, lab] : byd) {
    if (out.size() == count) break;
    out.push_back(lab);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// targets

namespace detail {

// per-sample v(J/U) panel shared by the curves targets
inline void sample_curves_panel(Svg& svg, Frame& f, const CsvTable& rec,
                                const std::string& file) {
  const int jc = rec.col("ju", file), sc = rec.col("sample_id", file),
            gc = rec.col("gamma", file), vc = rec.col("v", file);
  std::map<int, std::vector<std::pair<double, double>>> series;
  std::map<int, double> gam;
  double jlo = 1e300, jhi = -1e300, vhi = 0, glo = 1e300, ghi = -1e300;
  for (const auto& r : rec.rows) {
    const double ju = std::stod(r[jc]), v = std::stod(r[vc]), g = std::stod(r[gc]);
    const int sid = std::stoi(r[sc]);
    series[sid].push_back({ju, v});
    gam[sid] = g;
    jlo = std::min(jlo, ju);
    jhi = std::max(jhi, ju);
    vhi = std::max(vhi, v);
    glo = std::min(glo, g);
    ghi = std::max(ghi, g);
  }
  f.xmin = jlo;
  f.xmax = jhi;
  f.ymin = 0;
  f.ymax = vhi > 0 ? 1.05 * vhi : 1;
  f.logx = jhi > 3 * jlo;
  axes(svg, f, "J/U", "v", "");
  for (auto& [sid, pts] : series) {
    std::sort(pts.begin(), pts.end());
    std::vector<double> xs, ys;
    for (auto& [x, y] : pts) {
      xs.push_back(x);
      ys.push_back(y);
    }
    polyline(svg, f, xs, ys, gamma_color(gam[sid], glo, ghi));
  }
  svg_text(svg, f.x0 + f.w - 6, f.y0 + 14,
           "gamma " + num2(glo) + " (violet) to " + num2(ghi) + " (yellow)", 9, "end");
}

inline void peak_insets(Svg& svg, const CsvTable& peaks, const std::string& file, double x0,
                        double y0, double w, double h) {
  const int gc = peaks.col("gamma", file), vc = peaks.col("v_inf", file),
            qc = peaks.col("q", file);
  std::vector<double> g, vinf, q;
  for (const auto& r : peaks.rows) {
    g.push_back(std::stod(r[gc]));
    vinf.push_back(std::stod(r[vc]));
    q.push_back(std::stod(r[qc]));
  }
  const double glo = *std::min_element(g.begin(), g.end());
  const double ghi = *std::max_element(g.begin(), g.end());
  Frame fa{x0, y0, w, h};
  fa.xmin = glo;
  fa.xmax = ghi > glo ? ghi : glo + 1;
  fa.ymin = 0;
  fa.ymax = 1.1 * *std::max_element(vinf.begin(), vinf.end());
  if (!(fa.ymax > 0)) fa.ymax = 1;
  axes(svg, fa, "gamma", "v_inf", "");
  scatter(svg, fa, g, vinf, "#4c72b0");
  Frame fb{x0 + w + 60, y0, w, h};
  fb.xmin = fa.xmin;
  fb.xmax = fa.xmax;
  fb.ymin = 0;
  fb.ymax = 1.1 * *std::max_element(q.begin(), q.end());
  axes(svg, fb, "gamma", "q", "");
  scatter(svg, fb, g, q, "#c44e52");
}

}  // namespace detail

inline std::vector<std::filesystem::path> emit_outputs(const std::filesystem::path& in,
                                                       EmitTarget which,
                                                       const std::filesystem::path& out) {
  namespace fs = std::filesystem;
  using namespace detail;
  fs::create_directories(out);
  std::vector<fs::path> written;
  auto emit_file = [&](const fs::path& name, const std::string& content) {
    write_file(out / name, content);
    written.push_back(out / name);
  };

  switch (which) {
    case EmitTarget::Curves: {
      auto rec = read_csv(in / "records.csv", "run the sweep first");
      const int jc = rec.col("ju", "records.csv"), sc = rec.col("sample_id", "records.csv"),
                gc = rec.col("gamma", "records.csv"), vc = rec.col("v", "records.csv");
      std::string csv = "# pdbose.curves.v1\nju,sample_id,gamma,v\n";
      for (const auto& r : rec.rows)
        csv += r[jc] + "," + r[sc] + "," + r[gc] + "," + r[vc] + "\n";
      emit_file("curves.csv", csv);

      const bool have_peaks = fs::exists(in / "peaks.csv");
      const bool have_series = fs::exists(in / "timeseries.csv");
      Svg svg;
      svg.w = 660;
      svg.h = 360.0 + (have_series ? 220 : 0);
      Frame fmain{60, 30, 360, 280};
      sample_curves_panel(svg, fmain, rec, "records.csv");
      if (have_peaks) {
        auto peaks = read_csv(in / "peaks.csv", "");
        peak_insets(svg, peaks, "peaks.csv", 480, 50, 110, 90);
        std::string pcsv = "# pdbose.curves_insets.v1\nsample_id,gamma,v_inf,q\n";
        const int pc = peaks.col("sample_id", "peaks.csv"), pg = peaks.col("gamma", "peaks.csv"),
                  pv = peaks.col("v_inf", "peaks.csv"), pq = peaks.col("q", "peaks.csv");
        for (const auto& r : peaks.rows)
          pcsv += r[pc] + "," + r[pg] + "," + r[pv] + "," + r[pq] + "\n";
        emit_file("curves_insets.csv", pcsv);
      } else {
        svg_text(svg, 540, 100, "peak metrics unavailable:", 10);
        svg_text(svg, 540, 114, "grid must span [0.1, 10]", 10);
      }
      if (have_series) {
        auto tsr = read_csv(in / "timeseries.csv", "");
        const int tj = tsr.col("ju", "timeseries.csv"), tsid = tsr.col("sample_id", "timeseries.csv"),
                  tt = tsr.col("t", "timeseries.csv"), tv = tsr.col("value", "timeseries.csv");
        std::map<std::string, std::vector<std::pair<double, double>>> groups;
        double tmax = 0, vlo = 1e300, vhi = -1e300;
        for (const auto& r : tsr.rows) {
          groups[r[tj] + ":" + r[tsid]].push_back({std::stod(r[tt]), std::stod(r[tv])});
          tmax = std::max(tmax, std::stod(r[tt]));
          vlo = std::min(vlo, std::stod(r[tv]));
          vhi = std::max(vhi, std::stod(r[tv]));
        }
        Frame fb{60, 400, 530, 150};
        fb.xmin = 0;
        fb.xmax = 1;
        fb.ymin = vlo - 0.05 * (vhi - vlo + 1e-12);
        fb.ymax = vhi + 0.05 * (vhi - vlo + 1e-12);
        axes(svg, fb, "t / T", "pair correlator", "");
        std::size_t ci = 0;
        for (auto& [key, pts] : groups) {
          std::vector<double> xs, ys;
          for (auto& [t, v] : pts) {
            xs.push_back(tmax > 0 ? t / tmax : t);
            ys.push_back(v);
          }
          polyline(svg, fb, xs, ys, sector_color(ci), 0.9);
          svg_text(svg, 600, 410.0 + 12 * ci, key, 9, "start",
                   ("fill=\"" + std::string(sector_color(ci)) + "\"").c_str());
          ++ci;
        }
      }
      emit_file("curves.svg", svg.finish());
      break;
    }

    case EmitTarget::SectorPanels: {
      auto sec = read_csv(in / "sector_records.csv", "run the sweep first");
      auto samples = read_csv(in / "samples.csv", "run the sweep first");
      auto d1 = read_csv(in / "d1stats.csv", "run the sweep first");
      auto speaks = read_csv(in / "sector_peaks.csv",
                             "peak metrics need a sweep grid spanning [0.1, 10] over at least "
                             "two decades");
      const auto big = largest_sectors(sec, "sector_records.csv");
      auto sector_index = [&](const std::string& lab) {
        return std::find(big.begin(), big.end(), lab) - big.begin();
      };

      // pick the sample whose purity is nearest 0.15
      const int sgc = samples.col("gamma", "samples.csv"),
                sic = samples.col("sample_id", "samples.csv");
      std::string chosen = "0";
      double gbest = 1e300, gchosen = 0;
      for (const auto& r : samples.rows) {
        const double g = std::stod(r[sgc]);
        if (std::abs(g - 0.15) < gbest) {
          gbest = std::abs(g - 0.15);
          chosen = r[sic];
          gchosen = g;
        }
      }

      const int jc = sec.col("ju", "sector_records.csv"),
                sc = sec.col("sample_id", "sector_records.csv"),
                lc = sec.col("lambda", "sector_records.csv"),
                pc = sec.col("p", "sector_records.csv"),
                glc = sec.col("gamma_lambda", "sector_records.csv"),
                vlc = sec.col("v_lambda", "sector_records.csv"),
                wc = sec.col("W_lambda", "sector_records.csv"),
                ac = sec.col("A_lambda", "sector_records.csv"),
                dec = sec.col("d_eff", "sector_records.csv"),
                rc = sec.col("R_lambda", "sector_records.csv"),
                dc = sec.col("d", "sector_records.csv");

      // (a) sector weights vs purity, one point per sample
      std::map<int, double> gam;
      for (const auto& r : samples.rows) gam[std::stoi(r[sic])] = std::stod(r[sgc]);
      const std::string first_ju = sec.rows.front()[jc];
      std::string acsv = "# pdbose.sectors_weights.v1\nsample_id,gamma,lambda,p\n";
      std::map<std::string, std::vector<std::pair<double, double>>> pw;
      for (const auto& r : sec.rows) {
        if (r[jc] != first_ju) continue;
        const int sid = std::stoi(r[sc]);
        acsv += r[sc] + "," + fnum(gam[sid]) + "," + r[lc] + "," + r[pc] + "\n";
        pw[r[lc]].push_back({gam[sid], std::stod(r[pc])});
      }
      emit_file("sectors_weights.csv", acsv);

      // (b) exact sector variance against the factorized product, chosen sample
      std::string bcsv = "# pdbose.sectors_model.v1\n# sample=" + chosen + " gamma=" + fnum(gchosen) +
                         "\nju,lambda,v_lambda,RA\n";
      std::map<std::string, std::vector<std::array<double, 3>>> curves_b;
      for (const auto& r : sec.rows) {
        if (r[sc] != chosen) continue;
        const double ra = std::stod(r[rc]) * std::stod(r[ac]);
        bcsv += r[jc] + "," + r[lc] + "," + r[vlc] + "," + fnum(ra) + "\n";
        curves_b[r[lc]].push_back({std::stod(r[jc]), std::stod(r[vlc]), ra});
      }
      emit_file("sectors_model.csv", bcsv);

      // (c) bandwidth vs effective dimension, chosen sample; d1 inset data
      std::string ccsv = "# pdbose.sectors_widths.v1\n# sample=" + chosen + "\nju,lambda,W_lambda,d_eff\n";
      std::map<std::string, std::vector<std::array<double, 3>>> curves_c;
      std::map<std::string, int> dims;
      for (const auto& r : sec.rows) {
        if (r[sc] != chosen) continue;
        ccsv += r[jc] + "," + r[lc] + "," + r[wc] + "," + r[dec] + "\n";
        curves_c[r[lc]].push_back({std::stod(r[jc]), std::stod(r[wc]), std::stod(r[dec])});
        dims[r[lc]] = std::stoi(r[dc]);
      }
      emit_file("sectors_widths.csv", ccsv);
      const int d1j = d1.col("ju", "d1stats.csv"), d1l = d1.col("lambda", "d1stats.csv"),
                d1m = d1.col("mean_D1", "d1stats.csv"), d1v = d1.col("var_D1", "d1stats.csv");
      std::string icsv = "# pdbose.sectors_widths_inset.v1\nju,lambda,mean_D1,var_D1\n";
      std::map<std::string, std::vector<std::array<double, 3>>> curves_d1;
      for (const auto& r : d1.rows) {
        if (std::find(big.begin(), big.end(), r[d1l]) == big.end()) continue;
        icsv += r[d1j] + "," + r[d1l] + "," + r[d1m] + "," + r[d1v] + "\n";
        curves_d1[r[d1l]].push_back({std::stod(r[d1j]), std::stod(r[d1m]), std::stod(r[d1v])});
      }
      emit_file("sectors_widths_inset.csv", icsv);

      // (d) per-sector enhancement vs sector purity
      const int pks = speaks.col("sample_id", "sector_peaks.csv"),
                pkl = speaks.col("lambda", "sector_peaks.csv"),
                pkg = speaks.col("gamma_lambda", "sector_peaks.csv"),
                pkq = speaks.col("q", "sector_peaks.csv");
      std::string dcsv = "# pdbose.sectors_enhancement.v1\nsample_id,lambda,gamma_lambda,q\n";
      std::map<std::string, std::vector<std::pair<double, double>>> qpts;
      for (const auto& r : speaks.rows) {
        dcsv += r[pks] + "," + r[pkl] + "," + r[pkg] + "," + r[pkq] + "\n";
        if (std::find(big.begin(), big.end(), r[pkl]) != big.end())
          qpts[r[pkl]].push_back({std::stod(r[pkg]), std::stod(r[pkq])});
      }
      emit_file("sectors_enhancement.csv", dcsv);

      // four panels
      Svg svg;
      svg.w = 900;
      svg.h = 640;
      auto curve_minmax = [](const std::map<std::string, std::vector<std::array<double, 3>>>& m,
                             int idx, double lo, double hi) {
        for (const auto& [lab, pts] : m)
          for (const auto& p : pts)
            if (p[idx] > 0) {
              lo = std::min(lo, p[idx]);
              hi = std::max(hi, p[idx]);
            }
        return std::pair<double, double>{lo, hi};
      };

      Frame fa{70, 40, 300, 220};
      {
        double glo = 1e300, ghi = -1e300;
        for (const auto& [lab, pts] : pw)
          for (const auto& [g, p] : pts) {
            glo = std::min(glo, g);
            ghi = std::max(ghi, g);
          }
        fa.xmin = glo;
        fa.xmax = ghi > glo ? ghi : glo + 1;
        fa.ymin = 0;
        fa.ymax = 1;
        axes(svg, fa, "gamma", "p", "(a) sector weights");
        for (auto& [lab, pts] : pw) {
          std::sort(pts.begin(), pts.end());
          std::vector<double> xs, ys;
          for (auto& [x, y] : pts) {
            xs.push_back(x);
            ys.push_back(y);
          }
          const auto col = std::find(big.begin(), big.end(), lab) != big.end()
                               ? sector_color(sector_index(lab))
                               : "#cccccc";
          polyline(svg, fa, xs, ys, col, 1.0);
          scatter(svg, fa, xs, ys, col, 1.8);
        }
      }

      Frame fb{490, 40, 300, 220};
      {
        auto [lo, hi] = curve_minmax(curves_b, 1, 1e300, -1e300);
        std::tie(lo, hi) = curve_minmax(curves_b, 2, lo, hi);
        if (!(hi > 0)) {
          lo = 1e-3;
          hi = 1;
        }
        fb.logx = true;
        fb.logy = true;
        fb.xmin = curves_b.begin()->second.front()[0];
        fb.xmax = curves_b.begin()->second.back()[0];
        fb.ymin = std::max(lo / 2, hi * 1e-8);
        fb.ymax = hi * 2;
        axes(svg, fb, "J/U", "v_lambda, R A", "(b) exact vs factorized, gamma " + num2(gchosen));
        for (const auto& lab : big) {
          if (!curves_b.count(lab)) continue;
          std::vector<double> xs, v, ra;
          for (const auto& p : curves_b[lab]) {
            xs.push_back(p[0]);
            v.push_back(p[1]);
            ra.push_back(p[2]);
          }
          polyline(svg, fb, xs, v, sector_color(sector_index(lab)), 1.3, false);
          polyline(svg, fb, xs, ra, sector_color(sector_index(lab)), 1.1, true);
        }
      }

      Frame fc{70, 350, 300, 220};
      {
        auto [lo, hi] = curve_minmax(curves_c, 1, 1e300, -1e300);
        std::tie(lo, hi) = curve_minmax(curves_c, 2, lo, hi);
        fc.logx = true;
        fc.logy = true;
        fc.xmin = curves_c.begin()->second.front()[0];
        fc.xmax = curves_c.begin()->second.back()[0];
        fc.ymin = std::max(0.5, lo / 2);
        fc.ymax = std::max(2.0, hi * 2);
        axes(svg, fc, "J/U", "W (dashed), d_eff (solid)", "(c) bandwidth vs delocalization");
        for (const auto& lab : big) {
          if (!curves_c.count(lab)) continue;
          std::vector<double> xs, w, de;
          for (const auto& p : curves_c[lab]) {
            xs.push_back(p[0]);
            w.push_back(p[1]);
            de.push_back(p[2]);
          }
          polyline(svg, fc, xs, de, sector_color(sector_index(lab)), 1.3, false);
          polyline(svg, fc, xs, w, sector_color(sector_index(lab)), 1.1, true);
          const double dlam = dims[lab];
          polyline(svg, fc, {fc.xmin, fc.xmax}, {dlam, dlam}, "#bbbbbb", 0.6, true);
        }
        // inset: delocalization window statistics
        Frame fi{250, 480, 110, 80};
        fi.logx = true;
        fi.xmin = fc.xmin;
        fi.xmax = fc.xmax;
        fi.ymin = 0;
        fi.ymax = 1;
        axes(svg, fi, "J/U", "D1", "");
        for (const auto& lab : big) {
          if (!curves_d1.count(lab)) continue;
          std::vector<double> xs, m, vv;
          for (const auto& p : curves_d1[lab]) {
            xs.push_back(p[0]);
            m.push_back(p[1]);
            vv.push_back(p[2] * 10.0);  // variance scaled into view
          }
          std::size_t si = sector_index(lab);
          polyline(svg, fi, xs, m, sector_color(si), 1.0, false);
          polyline(svg, fi, xs, vv, sector_color(si), 0.8, true);
        }
      }

      Frame fd{490, 350, 300, 220};
      {
        double qhi = 1;
        for (const auto& [lab, pts] : qpts)
          for (const auto& [g, q] : pts) qhi = std::max(qhi, q);
        fd.xmin = 0;
        fd.xmax = 1;
        fd.ymin = 0;
        fd.ymax = 1.1 * qhi;
        axes(svg, fd, "gamma_lambda", "q_lambda", "(d) sector enhancement");
        for (const auto& lab : big) {
          if (!qpts.count(lab)) continue;
          std::vector<double> xs, ys;
          for (const auto& [g, q] : qpts[lab]) {
            xs.push_back(g);
            ys.push_back(q);
          }
          scatter(svg, fd, xs, ys, sector_color(sector_index(lab)));
        }
      }
      // legend
      {
        double y = 300;
        for (const auto& lab : big) {
          svg_text(svg, 410, y, lab + " (d=" + std::to_string(dims.count(lab) ? dims[lab] : 0) + ")",
                   10, "start",
                   ("fill=\"" + std::string(sector_color(sector_index(lab))) + "\"").c_str());
          y += 13;
        }
      }
      emit_file("sectors.svg", svg.finish());
      break;
    }

    case EmitTarget::CurvesCorrelator: {
      auto manifest = read_manifest(in, "run the sweep first");
      if (manifest["observable"] != "site-averaged-correlators")
        throw std::runtime_error(
            "emit curves-correlator: this result set used observable = " + manifest["observable"] +
            "; the correlator-averaged variant needs observable = site-averaged-correlators");
      auto rec = read_csv(in / "records.csv", "run the sweep first");
      const int jc = rec.col("ju", "records.csv"), sc = rec.col("sample_id", "records.csv"),
                gc = rec.col("gamma", "records.csv"), vc = rec.col("v", "records.csv");
      std::string csv = "# pdbose.curves_correlator.v1\nju,sample_id,gamma,v\n";
      for (const auto& r : rec.rows)
        csv += r[jc] + "," + r[sc] + "," + r[gc] + "," + r[vc] + "\n";
      emit_file("curves_correlator.csv", csv);
      auto peaks = read_csv(in / "peaks.csv",
                            "peak metrics need a sweep grid spanning [0.1, 10] over at least two "
                            "decades");
      std::string pcsv = "# pdbose.curves_correlator_insets.v1\nsample_id,gamma,v_inf,q\n";
      const int pc = peaks.col("sample_id", "peaks.csv"), pg = peaks.col("gamma", "peaks.csv"),
                pv = peaks.col("v_inf", "peaks.csv"), pq = peaks.col("q", "peaks.csv");
      for (const auto& r : peaks.rows)
        pcsv += r[pc] + "," + r[pg] + "," + r[pv] + "," + r[pq] + "\n";
      emit_file("curves_correlator_insets.csv", pcsv);
      Svg svg;
      svg.w = 660;
      svg.h = 360;
      Frame fmain{60, 30, 360, 280};
      sample_curves_panel(svg, fmain, rec, "records.csv");
      peak_insets(svg, peaks, "peaks.csv", 480, 50, 110, 90);
      emit_file("curves_correlator.svg", svg.finish());
      break;
    }

    case EmitTarget::Heat: {
      auto heat = read_csv(in / "heatmaps.csv",
                           "run the sweep with observable = operator-averaged and heatmaps = "
                           "auto or a J/U list");
      const int jc = heat.col("ju", "heatmaps.csv"), ac = heat.col("alpha", "heatmaps.csv"),
                bc = heat.col("beta", "heatmaps.csv"), vc = heat.col("value", "heatmaps.csv");
      std::string csv = "# pdbose.heat.v1\nju,lambda,alpha,beta,value\n";
      const int lc = heat.col("lambda", "heatmaps.csv");
      for (const auto& r : heat.rows)
        csv += r[jc] + "," + r[lc] + "," + r[ac] + "," + r[bc] + "," + r[vc] + "\n";
      emit_file("heat.csv", csv);

      std::vector<std::string> jus;
      for (const auto& r : heat.rows)
        if (std::find(jus.begin(), jus.end(), r[jc]) == jus.end()) jus.push_back(r[jc]);

      Svg svg;
      const double panel = 240, pad = 60;
      svg.w = pad + jus.size() * (panel + 30);
      svg.h = 360;
      for (std::size_t pi = 0; pi < jus.size(); ++pi) {
        int d = 0;
        for (const auto& r : heat.rows)
          if (r[jc] == jus[pi]) d = std::max(d, std::stoi(r[ac]) + 1);
        const int bins = std::min(d, 160);
        std::vector<double> acc(bins * bins, 0.0);
        std::vector<int> cnt(bins * bins, 0);
        double vmax = 0;
        for (const auto& r : heat.rows) {
          if (r[jc] != jus[pi]) continue;
          const int a = std::stoi(r[ac]) * bins / d, b = std::stoi(r[bc]) * bins / d;
          const double v = std::stod(r[vc]);
          acc[a * bins + b] += v;
          cnt[a * bins + b] += 1;
          vmax = std::max(vmax, v);
        }
        const double x0 = pad + pi * (panel + 30), y0 = 50;
        const double cell = panel / bins;
        const double floor_v = vmax > 0 ? vmax * 1e-6 : 1.0;
        for (int a = 0; a < bins; ++a)
          for (int b = 0; b < bins; ++b) {
            if (!cnt[a * bins + b]) continue;
            const double v = acc[a * bins + b] / cnt[a * bins + b];
            const double u = v > floor_v
                                 ? std::log(v / floor_v) / std::log(vmax / floor_v + 1e-300)
                                 : 0.0;
            svg.body += "<rect x=\"" + num2(x0 + b * cell) + "\" y=\"" + num2(y0 + a * cell) +
                        "\" width=\"" + num2(cell + 0.5) + "\" height=\"" + num2(cell + 0.5) +
                        "\" fill=\"" + viridis(u) + "\"/>\n";
          }
        svg.body += "<rect x=\"" + num2(x0) + "\" y=\"" + num2(y0) + "\" width=\"" + num2(panel) +
                    "\" height=\"" + num2(panel) + "\" fill=\"none\" stroke=\"#333\"/>\n";
        svg_text(svg, x0 + panel / 2, y0 - 10, "J/U = " + jus[pi], 11);
        svg_text(svg, x0 + panel / 2, y0 + panel + 16, "beta", 10);
        svg_text(svg, x0 - 10, y0 + panel / 2, "alpha", 10, "middle",
                 ("transform=\"rotate(-90 " + num2(x0 - 10) + " " + num2(y0 + panel / 2) + ")\"")
                     .c_str());
      }
      emit_file("heat.svg", svg.finish());
      break;
    }

    case EmitTarget::Factor: {
      auto sec = read_csv(in / "sector_records.csv", "run the sweep first");
      const auto big = largest_sectors(sec, "sector_records.csv");
      const int jc = sec.col("ju", "sector_records.csv"),
                sc = sec.col("sample_id", "sector_records.csv"),
                lc = sec.col("lambda", "sector_records.csv"),
                ac = sec.col("A_lambda", "sector_records.csv");
      std::string csv = "# pdbose.factor.v1\nju,lambda,A_lambda\n";
      std::map<std::string, std::vector<std::pair<double, double>>> curves;
      for (const auto& r : sec.rows) {
        if (r[sc] != "0") continue;  // observable factor is sample independent
        if (std::find(big.begin(), big.end(), r[lc]) == big.end()) continue;
        csv += r[jc] + "," + r[lc] + "," + r[ac] + "\n";
        curves[r[lc]].push_back({std::stod(r[jc]), std::stod(r[ac])});
      }
      emit_file("factor.csv", csv);
      Svg svg;
      svg.w = 560;
      svg.h = 340;
      double ahi = 0, jlo = 1e300, jhi = 0;
      for (auto& [lab, pts] : curves) {
        std::sort(pts.begin(), pts.end());
        for (auto& [x, y] : pts) {
          ahi = std::max(ahi, y);
          jlo = std::min(jlo, x);
          jhi = std::max(jhi, x);
        }
      }
      Frame f{70, 40, 380, 240};
      f.logx = jhi > 3 * jlo;
      f.xmin = jlo;
      f.xmax = jhi;
      f.ymin = 0;
      f.ymax = ahi > 0 ? 1.2 * ahi : 1;
      axes(svg, f, "J/U", "A_lambda", "observable factor per sector");
      std::size_t ci = 0;
      for (const auto& lab : big) {
        if (!curves.count(lab)) continue;
        std::vector<double> xs, ys;
        for (auto& [x, y] : curves[lab]) {
          xs.push_back(x);
          ys.push_back(y);
        }
        polyline(svg, f, xs, ys, sector_color(ci), 1.3);
        svg_text(svg, 470, 60.0 + 14 * ci, lab, 10, "start",
                 ("fill=\"" + std::string(sector_color(ci)) + "\"").c_str());
        ++ci;
      }
      emit_file("factor.svg", svg.finish());
      break;
    }

    case EmitTarget::Raw: {
      const char* names[] = {"manifest.csv",     "samples.csv",      "records.csv",
                             "sector_records.csv", "d1stats.csv",    "peaks.csv",
                             "sector_peaks.csv", "heatmaps.csv",     "timeseries.csv"};
      bool any = false;
      for (const char* n : names) {
        if (!fs::exists(in / n)) continue;
        any = true;
        if (fs::equivalent(in, out)) {
          written.push_back(in / n);
          continue;
        }
        fs::copy_file(in / n, out / n, fs::copy_options::overwrite_existing);
        written.push_back(out / n);
      }
      if (!any)
        throw std::runtime_error("emit raw: no result CSVs found in " + in.string() +
                                 "; run the sweep first");
      break;
    }
  }
  return written;
}

inline std::vector<std::filesystem::path> emit_outputs(const std::filesystem::path& in,
                                                       EmitTarget which) {
  return emit_outputs(in, which, in);
}

}  // namespace pdbose
