#include "panelscope/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_set>

#include "panelscope/csv.hpp"
#include "panelscope/error.hpp"

namespace panelscope {

namespace {

constexpr double kMargin = 10;
constexpr double kTitleHeight = 28;
constexpr double kStripHeight = 18;
constexpr double kAxisLeft = 46;
constexpr double kAxisBottom = 24;
constexpr double kPadRight = 8;
constexpr const char* kBackgroundStroke = "#c8c8c8";
constexpr const char* kHighlightStroke = "#d95f02";

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish(double pad_fraction) {
    if (!std::isfinite(lo)) {
      lo = 0;
      hi = 1;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = (hi - lo) * pad_fraction;
    lo -= pad;
    hi += pad;
  }
};

std::vector<double> even_ticks(double lo, double hi) {
  std::vector<double> t;
  for (int i = 0; i < 5; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
  return t;
}

}  // namespace

std::string render_facets_svg(const PanelTable& table, const KeyAllocation& alloc,
                              const PlotSpec& spec) {
  if (spec.width_px <= 0 || spec.height_px <= 0) {
    throw Error(ErrorCode::InvalidArgument, "plot width and height must be positive");
  }
  if (spec.n_cols <= 0) throw Error(ErrorCode::InvalidArgument, "facet columns must be positive");
  if (alloc.n_facets <= 0) throw Error(ErrorCode::InvalidArgument, "allocation has no facets");
  const std::string x_name = spec.x_col.empty() ? table.index_column() : spec.x_col;
  const auto xs = table.numeric(x_name);
  const auto ys = table.numeric(spec.y_col);

  Range xr, yr;
  for (const auto& a : alloc.assignments) {
    const KeyGroup* g = table.find_key(a.key);
    if (g == nullptr) throw Error(ErrorCode::KeyMismatch, "allocated key '" + a.key + "' not in table");
    if (a.facet < 1 || a.facet > alloc.n_facets) {
      throw Error(ErrorCode::InvalidArgument, "key '" + a.key + "' has an out-of-range facet");
    }
    for (std::size_t r = g->begin; r < g->end; ++r) {
      if (xs[r] && ys[r]) {
        xr.add(*xs[r]);
        yr.add(*ys[r]);
      }
    }
  }
  xr.finish(0.02);
  yr.finish(0.05);

  const std::unordered_set<std::string> highlight(spec.highlight.begin(), spec.highlight.end());
  const int cols = std::min(spec.n_cols, alloc.n_facets);
  const int rows = (alloc.n_facets + cols - 1) / cols;
  const double top = kMargin + (spec.title.empty() ? 0 : kTitleHeight);
  const double cell_w = (spec.width_px - 2 * kMargin) / cols;
  const double cell_h = (spec.height_px - top - kMargin) / rows;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(spec.width_px) + "\" height=\"" + std::to_string(spec.height_px) +
         "\" viewBox=\"0 0 " + std::to_string(spec.width_px) + " " +
         std::to_string(spec.height_px) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    svg += "<text class=\"title\" x=\"" + num(spec.width_px / 2.0) + "\" y=\"" +
           num(kMargin + 18) + "\" text-anchor=\"middle\" font-size=\"16\">" +
           escape(spec.title) + "</text>\n";
  }

  const auto x_ticks = spec.x_breaks.empty() ? even_ticks(xr.lo, xr.hi) : spec.x_breaks;
  const auto y_ticks = even_ticks(yr.lo, yr.hi);

  for (int facet = 1; facet <= alloc.n_facets; ++facet) {
    const int slot = facet - 1;
    const double cx = kMargin + (slot % cols) * cell_w;
    const double cy = top + (slot / cols) * cell_h;
    const double x0 = cx + kAxisLeft, x1 = cx + cell_w - kPadRight;
    const double y0 = cy + kStripHeight, y1 = cy + cell_h - kAxisBottom;
    auto px = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto py = [&](double v) { return y1 - (v - yr.lo) / (yr.hi - yr.lo) * (y1 - y0); };

    svg += "<g class=\"panel\" data-facet=\"" + std::to_string(facet) + "\" data-xmin=\"" +
           tick_label(xr.lo) + "\" data-xmax=\"" + tick_label(xr.hi) + "\" data-ymin=\"" +
           tick_label(yr.lo) + "\" data-ymax=\"" + tick_label(yr.hi) + "\">\n";
    svg += "<rect class=\"strip\" x=\"" + num(x0) + "\" y=\"" + num(cy) + "\" width=\"" +
           num(x1 - x0) + "\" height=\"" + num(kStripHeight - 2) + "\" fill=\"#d9d9d9\"/>\n";
    svg += "<text class=\"facet-label\" x=\"" + num((x0 + x1) / 2) + "\" y=\"" +
           num(cy + kStripHeight - 6) + "\" text-anchor=\"middle\" font-size=\"11\">" +
           std::to_string(facet) + "</text>\n";
    svg += "<rect class=\"plot-area\" x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" +
           num(x1 - x0) + "\" height=\"" + num(y1 - y0) +
           "\" fill=\"#f5f5f5\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";

    svg += "<g class=\"axis x\" font-size=\"9\" text-anchor=\"middle\">\n";
    for (double t : x_ticks) {
      if (t < xr.lo || t > xr.hi) continue;
      svg += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(px(t)) +
             "\" y2=\"" + num(y1 + 4) + "\" stroke=\"#666666\"/>";
      svg += "<text x=\"" + num(px(t)) + "\" y=\"" + num(y1 + 14) + "\">" + tick_label(t) +
             "</text>\n";
    }
    svg += "</g>\n<g class=\"axis y\" font-size=\"9\" text-anchor=\"end\">\n";
    for (double t : y_ticks) {
      svg += "<line x1=\"" + num(x0 - 4) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(x0) +
             "\" y2=\"" + num(py(t)) + "\" stroke=\"#666666\"/>";
      svg += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py(t) + 3) + "\">" + tick_label(t) +
             "</text>\n";
    }
    svg += "</g>\n";

    // Background keys first so highlighted ones are drawn on top.
    auto keys = alloc.keys_in(facet);
    std::stable_partition(keys.begin(), keys.end(),
                          [&](const std::string& k) { return highlight.count(k) == 0; });
    for (const auto& key : keys) {
      const KeyGroup& g = *table.find_key(key);
      std::string points;
      for (std::size_t r = g.begin; r < g.end; ++r) {
        if (!xs[r] || !ys[r]) continue;
        if (!points.empty()) points += ' ';
        points += num(px(*xs[r])) + "," + num(py(*ys[r]));
      }
      const bool lit = highlight.count(key) > 0;
      const std::string stroke =
          highlight.empty() ? spec.stroke : (lit ? kHighlightStroke : kBackgroundStroke);
      svg += "<polyline class=\"key\" data-key=\"" + escape(key) + "\" fill=\"none\" stroke=\"" +
             escape(stroke) + "\" stroke-width=\"" + (lit ? "1.8" : "1") + "\" points=\"" +
             points + "\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void render_facets(const PanelTable& table, const KeyAllocation& alloc, const PlotSpec& spec,
                   const std::filesystem::path& path) {
  write_text(path, render_facets_svg(table, alloc, spec));
}

}  // namespace panelscope
