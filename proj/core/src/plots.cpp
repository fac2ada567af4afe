#include "benchpress/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "benchpress/io.hpp"

namespace benchpress::eval {

namespace {

constexpr double kWidth = 640, kHeight = 480, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
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

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

class Canvas {
 public:
  Canvas(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    if (x1_ <= x0_) x1_ = x0_ + 1;
    if (y1_ <= y0_) y1_ = y0_ + 1;
    out_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double x(double v) const { return kLeft + (v - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double y(double v) const { return kHeight - kBottom - (v - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

  void axes(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    const double l = x(x0_), r = x(x1_), b = y(y0_), t = y(y1_);
    line_px(l, b, r, b, "black", 1);
    line_px(l, b, l, t, "black", 1);
    for (int k = 0; k <= 4; ++k) {
      const double fx = x0_ + (x1_ - x0_) * k / 4.0, fy = y0_ + (y1_ - y0_) * k / 4.0;
      line_px(x(fx), b, x(fx), b + 5, "black", 1);
      text_px(x(fx), b + 18, tick_label(fx), "middle", 11);
      line_px(l - 5, y(fy), l, y(fy), "black", 1);
      text_px(l - 8, y(fy) + 4, tick_label(fy), "end", 11);
    }
    text_px(kWidth / 2, 24, title, "middle", 15);
    text_px((l + r) / 2, kHeight - 18, xlabel, "middle", 12);
    out_ += "<text x=\"18\" y=\"" + num((b + t) / 2) + "\" font-family=\"sans-serif\" font-size=\"12\" "
            "text-anchor=\"middle\" transform=\"rotate(-90 18 " + num((b + t) / 2) + ")\">" + escape(ylabel) +
            "</text>\n";
  }

  void line(double ax, double ay, double bx, double by, const std::string& color, double w) {
    line_px(x(ax), y(ay), x(bx), y(by), color, w);
  }
  void line_px(double ax, double ay, double bx, double by, const std::string& color, double w) {
    out_ += "<line x1=\"" + num(ax) + "\" y1=\"" + num(ay) + "\" x2=\"" + num(bx) + "\" y2=\"" + num(by) +
            "\" stroke=\"" + color + "\" stroke-width=\"" + num(w) + "\"/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& color, double opacity = 1.0) {
    out_ += "<circle cx=\"" + num(x(cx)) + "\" cy=\"" + num(y(cy)) + "\" r=\"" + num(r) + "\" fill=\"" + color +
            "\" fill-opacity=\"" + num(opacity) + "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    if (pts.size() < 2) return;
    out_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) out_ += (k ? " " : "") + num(x(pts[k].first)) + "," + num(y(pts[k].second));
    out_ += "\"/>\n";
  }
  void rect_px(double rx, double ry, double w, double h, const std::string& fill) {
    out_ += "<rect x=\"" + num(rx) + "\" y=\"" + num(ry) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
            "\" fill=\"" + fill + "\"/>\n";
  }
  void text(double tx, double ty, const std::string& s, const std::string& anchor, int size) {
    text_px(x(tx), y(ty), s, anchor, size);
  }
  void text_px(double tx, double ty, const std::string& s, const std::string& anchor, int size) {
    out_ += "<text x=\"" + num(tx) + "\" y=\"" + num(ty) + "\" font-family=\"sans-serif\" font-size=\"" +
            std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  }

  std::string finish() { return out_ + "</svg>\n"; }

 private:
  double x0_, x1_, y0_, y1_;
  std::string out_;
};

std::pair<double, double> range_of(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 1.0};
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double a = *lo, b = *hi;
  if (a == b) {
    a -= 0.5;
    b += 0.5;
  }
  return {a, b};
}

}  // namespace

std::string roc_svg(const std::vector<RocPoint>& points, const std::vector<BenchmarkRow>& rows,
                    const RocPlotOptions& options) {
  double xmax = 1.0;
  for (const auto& p : points) {
    if (p.median_fprp) xmax = std::max(xmax, *p.median_fprp);
    if (options.errorbarh && p.fprp_q95) xmax = std::max(xmax, *p.fprp_q95);
  }
  std::map<std::string, std::string> colors;
  for (const auto& p : points) colors.emplace(p.id, "");
  std::size_t k = 0;
  for (auto& [id, c] : colors) c = kPalette[k++ % std::size(kPalette)];

  if (options.scatter) {
    for (const auto& r : rows) {
      if (!r.scores) continue;
      const auto rates = metrics::tpr_fprp(*r.scores);
      if (rates) xmax = std::max(xmax, rates->second);
    }
  }

  Canvas c(0.0, xmax, 0.0, 1.0);
  c.axes(options.title, "FPRp", "TPR");

  if (options.scatter) {
    for (const auto& r : rows) {
      if (!r.scores || !colors.count(r.id)) continue;
      const auto rates = metrics::tpr_fprp(*r.scores);
      if (!rates) continue;
      c.circle(rates->second, rates->first, 2.0, colors[r.id], 0.35);
      if (options.show_seed && r.seed) c.text(rates->second, rates->first, std::to_string(*r.seed), "start", 8);
    }
  }

  std::map<std::string, std::vector<std::pair<double, double>>> paths;
  for (const auto& p : points) {
    if (!p.median_fprp || !p.median_tpr) continue;
    const std::string& col = colors[p.id];
    if (options.errorbar) c.line(*p.median_fprp, *p.tpr_q05, *p.median_fprp, *p.tpr_q95, col, 1);
    if (options.errorbarh) c.line(*p.fprp_q05, *p.median_tpr, *p.fprp_q95, *p.median_tpr, col, 1);
    c.circle(*p.median_fprp, *p.median_tpr, 3.5, col);
    if (options.text && !p.param.empty()) c.text(*p.median_fprp, *p.median_tpr, " " + p.param, "start", 10);
    paths[p.id].emplace_back(*p.median_fprp, *p.median_tpr);
  }
  if (options.path)
    for (const auto& [id, pts] : paths) c.polyline(pts, colors[id]);

  double ly = kTop + 10;
  for (const auto& [id, col] : colors) {
    c.rect_px(kWidth - 170, ly - 9, 10, 10, col);
    c.text_px(kWidth - 155, ly, id, "start", 11);
    ly += 16;
  }
  return c.finish();
}

std::string series_svg(const std::vector<SeriesPoint>& series, const std::string& title, const std::string& ylabel) {
  std::vector<double> xs, ys;
  for (const auto& s : series) {
    xs.push_back(static_cast<double>(s.index));
    ys.push_back(s.value);
  }
  const auto [x0, x1] = range_of(xs);
  const auto [y0, y1] = range_of(ys);
  Canvas c(x0, x1, y0, y1);
  c.axes(title, "iteration", ylabel);
  // Step line: each value holds until the next retained index.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < series.size(); ++k) {
    pts.emplace_back(xs[k], ys[k]);
    if (k + 1 < series.size()) pts.emplace_back(xs[k + 1], ys[k]);
  }
  c.polyline(pts, kPalette[0]);
  if (series.size() == 1) c.circle(xs[0], ys[0], 2.5, kPalette[0]);
  return c.finish();
}

std::string autocorr_svg(const std::vector<double>& acf, const std::string& title) {
  const double lags = acf.empty() ? 1.0 : static_cast<double>(acf.size() - 1);
  double lo = 0.0;
  for (double r : acf) lo = std::min(lo, r);
  Canvas c(0.0, std::max(lags, 1.0), std::min(lo, -0.1), 1.0);
  c.axes(title, "lag", "autocorrelation");
  c.line(0.0, 0.0, std::max(lags, 1.0), 0.0, "#888888", 1);
  for (std::size_t k = 0; k < acf.size(); ++k) {
    c.line(static_cast<double>(k), 0.0, static_cast<double>(k), acf[k], kPalette[0], 1.5);
    c.circle(static_cast<double>(k), acf[k], 2.5, kPalette[0]);
  }
  return c.finish();
}

std::string heatmap_svg(const std::vector<std::string>& labels, const Eigen::MatrixXd& m, const std::string& title) {
  const double p = static_cast<double>(labels.size());
  const double side = std::min(kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  const double cell = p > 0 ? side / p : side;
  Canvas c(0.0, 1.0, 0.0, 1.0);
  c.text_px(kWidth / 2, 24, title, "middle", 15);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = std::clamp(m(i, j), 0.0, 1.0);
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      char fill[8];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", shade, shade, shade);
      c.rect_px(kLeft + static_cast<double>(j) * cell, kTop + static_cast<double>(i) * cell, cell, cell, fill);
    }
  }
  const int font = static_cast<int>(std::clamp(cell * 0.6, 6.0, 12.0));
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * cell;
    c.text_px(kLeft - 4, kTop + mid + font / 3.0, labels[k], "end", font);
    c.text_px(kLeft + mid, kTop + side + font + 4, labels[k], "middle", font);
  }
  return c.finish();
}

}  // namespace benchpress::eval
