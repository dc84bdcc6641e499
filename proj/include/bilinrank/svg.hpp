#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bilinrank/experiments.hpp"
#include "bilinrank/rank.hpp"
#include "bilinrank/sectors.hpp"

namespace bilinrank::svg {

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
}

inline std::string line(double x1, double y1, double x2, double y2, const char* stroke = "#000") {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
         "\" stroke=\"" + stroke + "\"/>\n";
}

inline std::string rect(double x, double y, double w, double h, const char* fill) {
  return "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"" + fill + "\"/>\n";
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  return colors[i % std::size(colors)];
}

struct Frame {
  double width = 640, height = 400;
  double left = 70, right = 20, top = 40, bottom = 60;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

inline std::string open(const Frame& f, const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width) + "\" height=\"" + num(f.height) +
         "\" viewBox=\"0 0 " + num(f.width) + " " + num(f.height) + "\">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + num(f.width) + "\" height=\"" + num(f.height) + "\" fill=\"#fff\"/>\n" +
         text(f.width / 2, 22, title, "middle", 14);
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  const double x0 = f.left, y0 = f.top + f.plot_h();
  return line(x0, f.top, x0, y0) + line(x0, y0, x0 + f.plot_w(), y0) +
         text(f.left + f.plot_w() / 2, f.height - 15, xlabel) +
         "<text x=\"18\" y=\"" + num(f.top + f.plot_h() / 2) + "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(f.top + f.plot_h() / 2) + ")\">" + escape(ylabel) + "</text>\n";
}

}  // namespace detail

/// Rank and nullity versus log10(tolerance) as step polylines.
inline std::string rank_staircase(const std::vector<RankProfile>& profiles, const std::string& title) {
  using namespace detail;
  Frame f;
  std::string out = open(f, title) + axes(f, "log10(tolerance)", "rank / nullity");
  if (profiles.empty()) return out + "</svg>\n";
  double lo = INFINITY, hi = -INFINITY;
  std::size_t ymax = 1;
  for (const auto& p : profiles) {
    lo = std::min(lo, std::log10(p.grid.values().front()));
    hi = std::max(hi, std::log10(p.grid.values().back()));
    ymax = std::max(ymax, p.ambient_dim);
  }
  if (hi <= lo) hi = lo + 1;
  auto xs = [&](double tau) { return f.left + (std::log10(tau) - lo) / (hi - lo) * f.plot_w(); };
  auto ys = [&](double v) { return f.top + f.plot_h() * (1.0 - v / static_cast<double>(ymax)); };

  for (int e = static_cast<int>(std::ceil(lo)); e <= static_cast<int>(std::floor(hi)); e += 2) {
    out += line(xs(std::pow(10.0, e)), f.top + f.plot_h(), xs(std::pow(10.0, e)), f.top + f.plot_h() + 5);
    out += text(xs(std::pow(10.0, e)), f.top + f.plot_h() + 18, std::to_string(e));
  }
  for (int q = 0; q <= 4; ++q) {
    const double v = static_cast<double>(ymax) * q / 4.0;
    out += line(f.left - 5, ys(v), f.left, ys(v));
    out += text(f.left - 8, ys(v) + 4, std::to_string(static_cast<long>(std::lround(v))), "end");
  }

  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    for (int series = 0; series < 2; ++series) {
      const auto& values = series == 0 ? p.ranks : p.nullities;
      std::string pts;
      for (std::size_t k = 0; k < values.size(); ++k) {
        const double y = ys(static_cast<double>(values[k]));
        if (k > 0) pts += num(xs(p.grid[k])) + "," + num(ys(static_cast<double>(values[k - 1]))) + " ";
        pts += num(xs(p.grid[k])) + "," + num(y) + " ";
      }
      out += "<polyline fill=\"none\" stroke=\"" + std::string(palette(i)) + "\" stroke-width=\"2\"" +
             (series == 1 ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + pts + "\"/>\n";
    }
    const std::string name = p.source_label.empty() ? "profile " + std::to_string(i + 1) : p.source_label;
    out += text(f.left + f.plot_w() - 5, f.top + 16 + 14.0 * static_cast<double>(i), name + " (solid rank, dashed nullity)", "end", 11);
  }
  return out + "</svg>\n";
}

inline std::string bar_chart(const std::vector<std::string>& labels, const std::vector<double>& values, double ymax,
                             const std::string& title, const std::string& ylabel) {
  using namespace detail;
  Frame f;
  std::string out = open(f, title) + axes(f, "", ylabel);
  if (ymax <= 0) ymax = 1;
  const double slot = f.plot_w() / static_cast<double>(std::max<std::size_t>(labels.size(), 1));
  for (int q = 0; q <= 4; ++q) {
    const double v = ymax * q / 4.0;
    const double y = f.top + f.plot_h() * (1.0 - v / ymax);
    out += line(f.left - 5, y, f.left, y);
    char buf[32];
    std::snprintf(buf, sizeof buf, ymax <= 1.0 ? "%.2f" : "%.0f", v);
    out += text(f.left - 8, y + 4, buf, "end");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double h = f.plot_h() * std::clamp(values[i] / ymax, 0.0, 1.0);
    const double x = f.left + slot * static_cast<double>(i) + slot * 0.15;
    out += rect(x, f.top + f.plot_h() - h, slot * 0.7, h, palette(i));
    char buf[32];
    std::snprintf(buf, sizeof buf, ymax <= 1.0 ? "%.4f" : "%.0f", values[i]);
    out += text(x + slot * 0.35, f.top + f.plot_h() - h - 4, buf, "middle", 11);
    out += text(x + slot * 0.35, f.top + f.plot_h() + 16, labels[i], "middle", 10);
  }
  return out + "</svg>\n";
}

/// Sector-weight bars; an empty nullspace renders as a labelled placeholder.
inline std::string sector_bars(const SectorWeights& weights, const std::string& title) {
  if (!weights.defined()) return bar_chart({"undefined"}, {0.0}, 1.0, title + " (empty nullspace)", "weight");
  return bar_chart(weights.names, weights.weights, 1.0, title, "nullspace weight");
}

/// Maximal recovered rank per procedure: baseline, refinements, modifications.
inline std::string comparison_bars(const ComparisonReport& report, const std::string& title) {
  std::vector<std::string> labels{"baseline"};
  std::vector<double> values{static_cast<double>(report.baseline_profile.max_rank())};
  for (const auto& r : report.refinement_results) {
    labels.push_back(r.procedure);
    values.push_back(static_cast<double>(r.profile.max_rank()));
  }
  for (const auto& m : report.modification_results) {
    labels.push_back(m.procedure);
    values.push_back(static_cast<double>(m.profile.max_rank()));
  }
  return bar_chart(labels, values, static_cast<double>(report.baseline_profile.ambient_dim), title, "max rank over grid");
}

}  // namespace bilinrank::svg
