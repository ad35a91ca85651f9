#include "bknn/cli/svg_plots.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace bknn::cli {

namespace {

// Fixed-point with a few decimals; independent of the C locale.
std::string num(double v, int decimals = 2) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v,
                               std::chars_format::fixed, decimals);
  return std::string(buf, r.ptr);
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += c;
    }
  }
  return out;
}

constexpr double kPanel = 340.0;
constexpr double kLeft = 70.0, kTop = 50.0, kGap = 100.0, kBottom = 60.0;

class Svg {
public:
  Svg(double width, double height) : width_(width), height_(height) {}

  void line(double x1, double y1, double x2, double y2,
            const std::string &style) {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
          << num(x2) << "\" y2=\"" << num(y2) << "\" " << style << "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string &style) {
    body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
          << num(w) << "\" height=\"" << num(h) << "\" " << style << "/>\n";
  }
  void circle(double x, double y, double r, const std::string &fill) {
    body_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\""
          << num(r) << "\" fill=\"" << fill << "\" fill-opacity=\"0.75\"/>\n";
  }
  void text(double x, double y, const std::string &s,
            const std::string &anchor = "middle", int size = 12,
            double rotate = 0.0) {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y)
          << "\" font-family=\"sans-serif\" font-size=\"" << size
          << "\" text-anchor=\"" << anchor << '"';
    if (rotate != 0.0)
      body_ << " transform=\"rotate(" << num(rotate) << ' ' << num(x) << ' '
            << num(y) << ")\"";
    body_ << '>' << escape(s) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_)
        << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 "
        << num(width_) << ' ' << num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

private:
  double width_, height_;
  std::ostringstream body_;
};

// Data-to-pixel mapping of one square panel.
struct Axes {
  double left, top;
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    return left + (x - x_lo) / (x_hi - x_lo) * kPanel;
  }
  double py(double y) const {
    return top + kPanel - (y - y_lo) / (y_hi - y_lo) * kPanel;
  }
  bool inside(double x, double y) const {
    return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
  }
};

void frame(Svg &svg, const Axes &ax, const std::string &title,
           const std::string &xlabel, const std::string &ylabel,
           int ticks = 5) {
  svg.rect(ax.left, ax.top, kPanel, kPanel,
           "fill=\"none\" stroke=\"black\" stroke-width=\"1\"");
  for (int i = 0; i <= ticks; ++i) {
    const double fx = ax.x_lo + (ax.x_hi - ax.x_lo) * i / ticks;
    const double fy = ax.y_lo + (ax.y_hi - ax.y_lo) * i / ticks;
    const double x = ax.px(fx), y = ax.py(fy);
    const double bottom = ax.top + kPanel;
    svg.line(x, bottom, x, bottom + 5, "stroke=\"black\"");
    svg.text(x, bottom + 18, num(fx));
    svg.line(ax.left - 5, y, ax.left, y, "stroke=\"black\"");
    svg.text(ax.left - 8, y + 4, num(fy), "end");
  }
  svg.text(ax.left + kPanel / 2, ax.top - 14, title, "middle", 14);
  svg.text(ax.left + kPanel / 2, ax.top + kPanel + 40, xlabel);
  svg.text(ax.left - 48, ax.top + kPanel / 2, ylabel, "middle", 12, -90.0);
}

// Line y = slope * x clipped to the panel.
void origin_line(Svg &svg, const Axes &ax, double slope,
                 const std::string &style, const std::string &label) {
  const double x_end = std::min(ax.x_hi, ax.y_hi / slope);
  svg.line(ax.px(0.0), ax.py(0.0), ax.px(x_end), ax.py(slope * x_end), style);
  if (!label.empty())
    svg.text(ax.px(x_end) - 4, ax.py(slope * x_end) + (slope >= 1 ? 14 : -6),
             label, "end", 11);
}

double two_panel_width() { return kLeft + 2 * kPanel + kGap + 30.0; }
double panel_height() { return kTop + kPanel + kBottom; }

Axes panel(int index, double x_lo, double x_hi, double y_lo, double y_hi) {
  return {kLeft + index * (kPanel + kGap), kTop, x_lo, x_hi, y_lo, y_hi};
}

const std::array<const char *, 8> kLevelColors{
    "#313695", "#4575b4", "#74add1", "#abd9e9",
    "#fdae61", "#f46d43", "#d73027", "#a50026"};

} // namespace

std::string grid_svg(const TestGrid &grid) {
  Svg svg(kLeft + kPanel + 150.0, panel_height());
  // Square window with a 0.4 tick spacing that holds the standard grid.
  double x_lo = -1.2, x_hi = 1.2, y_lo = -0.6, y_hi = 1.8;
  for (const auto &p : grid.points) {
    x_lo = std::min(x_lo, p.x.x1);
    x_hi = std::max(x_hi, p.x.x1);
    y_lo = std::min(y_lo, p.x.x2);
    y_hi = std::max(y_hi, p.x.x2);
  }
  const Axes ax = panel(0, x_lo, x_hi, y_lo, y_hi);
  frame(svg, ax, "Test points (" + std::to_string(grid.size()) + ")", "X1",
        "X2", 6);
  // Levels are recovered from theta_true so a grid read back from CSV
  // colors the same way.
  const std::array<double, 8> levels{0.02, 0.1, 0.25, 0.4,
                                     0.6,  0.75, 0.9, 0.98};
  for (const auto &p : grid.points) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (std::abs(p.theta_true - levels[i]) <
          std::abs(p.theta_true - levels[best]))
        best = i;
    svg.circle(ax.px(p.x.x1), ax.py(p.x.x2), 3.5, kLevelColors[best]);
  }
  const double lx = ax.left + kPanel + 20.0;
  svg.text(lx, kTop + 10, "Pr(y=1|x)", "start");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double y = kTop + 30.0 + 20.0 * static_cast<double>(i);
    svg.circle(lx + 6, y - 4, 5, kLevelColors[i]);
    svg.text(lx + 18, y, num(levels[i]), "start");
  }
  return svg.str();
}

std::string calibration_svg(const CoverageSummary &summary) {
  Svg svg(two_panel_width(), panel_height());
  for (int m = 0; m < 2; ++m) {
    const Axes ax = panel(m, 0.0, 1.0, 0.0, 1.0);
    frame(svg, ax, m == 0 ? "BKNN" : "KNN (bootstrap)",
          "true probability", "mean estimate");
    origin_line(svg, ax, 1.0,
                "stroke=\"gray\" stroke-dasharray=\"6,4\"", "45 degrees");
    for (const auto &p : summary.points) {
      const double y = m == 0 ? p.mean_theta_bknn : p.mean_theta_knn;
      svg.circle(ax.px(p.theta_true), ax.py(y), 3.0,
                 m == 0 ? "#d73027" : "#4575b4");
    }
  }
  return svg.str();
}

std::string coverage_histogram_svg(const CoverageSummary &summary,
                                   Method method) {
  constexpr int kBins = 20;
  std::vector<int> counts(kBins, 0);
  for (const auto &p : summary.points) {
    const double c =
        method == Method::Bknn ? p.coverage_bknn : p.coverage_knn;
    const int bin = std::clamp(static_cast<int>(std::floor(c * kBins + 1e-9)),
                               0, kBins - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  const int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));
  const double y_hi = std::ceil(peak * 1.1 / 5.0) * 5.0;

  Svg svg(kLeft + kPanel + 40.0, panel_height());
  const Axes ax = panel(0, 0.0, 1.0, 0.0, y_hi);
  frame(svg, ax,
        method == Method::Bknn ? "Coverage, BKNN credible intervals"
                               : "Coverage, bootstrap KNN intervals",
        "coverage probability", "number of test points");
  const char *fill = method == Method::Bknn ? "#d73027" : "#4575b4";
  for (int b = 0; b < kBins; ++b) {
    const double x0 = ax.px(static_cast<double>(b) / kBins);
    const double x1 = ax.px(static_cast<double>(b + 1) / kBins);
    const double top = ax.py(counts[static_cast<std::size_t>(b)]);
    svg.rect(x0, top, x1 - x0, ax.py(0.0) - top,
             std::string("fill=\"") + fill +
                 "\" fill-opacity=\"0.7\" stroke=\"white\"");
  }
  svg.line(ax.px(0.95), ax.py(0.0), ax.px(0.95), ax.py(y_hi),
           "stroke=\"black\" stroke-dasharray=\"4,3\"");
  svg.text(ax.px(0.95) - 4, ax.top + 14, "nominal 0.95", "end", 11);
  return svg.str();
}

std::string length_vs_std_svg(const GoldStandardReport &report) {
  double hi = 0.0;
  for (const auto &r : report.rows) {
    if (!r.excluded_bknn)
      hi = std::max({hi, r.mean_length_bknn, r.four_std_bknn});
    if (!r.excluded_knn)
      hi = std::max({hi, r.mean_length_knn, r.four_std_knn});
  }
  hi = hi > 0.0 ? std::ceil(hi * 1.05 * 10.0) / 10.0 : 1.0;

  Svg svg(two_panel_width(), panel_height());
  for (int m = 0; m < 2; ++m) {
    const auto &slope = m == 0 ? report.bknn : report.knn;
    const Axes ax = panel(m, 0.0, hi, 0.0, hi);
    frame(svg, ax,
          std::string(m == 0 ? "BKNN" : "KNN (bootstrap)") +
              ", fitted slope " + num(slope.slope, 3),
          "4 x std of point estimate", "mean interval length");
    origin_line(svg, ax, 1.0, "stroke=\"black\"", "slope=1");
    origin_line(svg, ax, 0.5, "stroke=\"black\" stroke-dasharray=\"6,4\"",
                "slope=1/2");
    for (const auto &r : report.rows) {
      const bool excluded = m == 0 ? r.excluded_bknn : r.excluded_knn;
      if (excluded)
        continue;
      const double x = m == 0 ? r.four_std_bknn : r.four_std_knn;
      const double y = m == 0 ? r.mean_length_bknn : r.mean_length_knn;
      if (ax.inside(x, y))
        svg.circle(ax.px(x), ax.py(y), 3.0, m == 0 ? "#d73027" : "#4575b4");
    }
  }
  return svg.str();
}

} // namespace bknn::cli
