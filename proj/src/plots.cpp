#include "dyad/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dyad/common.hpp"

namespace dyad {

namespace {

const char* kAgent1Color = "#1f77b4";
const char* kAgent2Color = "#d62728";
const char* kSumColor = "#ff7f0e";

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#bcbd22"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!(lo <= hi)) {
      lo = 0;
      hi = 1;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

double nice_step(double range) {
  double rough = range / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(rough)));
  double frac = rough / mag;
  double step = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

struct Panel {
  double x0, y0, w, h;  // pixel box
  Range xr, yr;

  double px(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
  double py(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

void draw_axes(std::string& svg, const Panel& p, const std::string& xlabel,
               const std::string& ylabel) {
  svg += "<rect x=\"" + fmt(p.x0) + "\" y=\"" + fmt(p.y0) + "\" width=\"" + fmt(p.w) +
         "\" height=\"" + fmt(p.h) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  double xs = nice_step(p.xr.hi - p.xr.lo);
  for (double t = std::ceil(p.xr.lo / xs) * xs; t <= p.xr.hi + 1e-12; t += xs) {
    double x = p.px(t);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(p.y0 + p.h) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(p.y0 + p.h + 4) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(p.y0 + p.h + 16) +
           "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#333333\">" + fmt_tick(t) +
           "</text>\n";
  }
  double ys = nice_step(p.yr.hi - p.yr.lo);
  for (double t = std::ceil(p.yr.lo / ys) * ys; t <= p.yr.hi + 1e-12; t += ys) {
    double y = p.py(t);
    svg += "<line x1=\"" + fmt(p.x0 - 4) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(p.x0) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(p.x0 - 6) + "\" y=\"" + fmt(y + 3) +
           "\" font-size=\"10\" text-anchor=\"end\" fill=\"#333333\">" + fmt_tick(t) +
           "</text>\n";
  }
  if (!xlabel.empty()) {
    svg += "<text x=\"" + fmt(p.x0 + p.w / 2) + "\" y=\"" + fmt(p.y0 + p.h + 30) +
           "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#111111\">" + xlabel + "</text>\n";
  }
  if (!ylabel.empty()) {
    svg += "<text x=\"" + fmt(p.x0 - 40) + "\" y=\"" + fmt(p.y0 + p.h / 2) +
           "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#111111\" transform=\"rotate(-90 " +
           fmt(p.x0 - 40) + " " + fmt(p.y0 + p.h / 2) + ")\">" + ylabel + "</text>\n";
  }
}

template <typename Getter>
void draw_series(std::string& svg, const Panel& p, const std::vector<PowerSample>& samples,
                 Getter get, const char* color, bool dashed) {
  if (samples.empty()) return;
  std::string d;
  for (size_t i = 0; i < samples.size(); ++i) {
    d += i == 0 ? "M" : "L";
    d += fmt(p.px(samples[i].t)) + "," + fmt(p.py(get(samples[i])));
  }
  svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.2\"";
  if (dashed) svg += " stroke-dasharray=\"5,3\"";
  svg += "/>\n";
}

void shade_segments(std::string& svg, const Panel& p,
                    const std::vector<ActionSegment>& segments) {
  for (const ActionSegment& s : segments) {
    double a = std::max(s.t_on_s, p.xr.lo);
    double b = std::min(s.t_off_s, p.xr.hi);
    if (b <= a) continue;
    const char* color = s.agent == 1 ? kAgent1Color : kAgent2Color;
    svg += "<rect x=\"" + fmt(p.px(a)) + "\" y=\"" + fmt(p.y0) + "\" width=\"" +
           fmt(p.px(b) - p.px(a)) + "\" height=\"" + fmt(p.h) + "\" fill=\"";
    svg += color;
    svg += "\" fill-opacity=\"0.12\" stroke=\"none\"/>\n";
  }
}

void legend_entry(std::string& svg, double x, double y, const char* color, bool dashed,
                  const std::string& label) {
  svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x + 22) + "\" y2=\"" +
         fmt(y) + "\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.5\"";
  if (dashed) svg += " stroke-dasharray=\"5,3\"";
  svg += "/>\n<text x=\"" + fmt(x + 27) + "\" y=\"" + fmt(y + 3.5) +
         "\" font-size=\"10\" fill=\"#111111\">" + label + "</text>\n";
}

void write_svg(const std::string& path, double width, double height, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
      << body << "</svg>\n";
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace

void render_power_svg(const std::string& path, const std::vector<PowerSample>& samples,
                      const std::vector<ActionSegment>& segments) {
  Panel p{70, 30, 840, 330, {}, {}};
  for (const PowerSample& s : samples) {
    p.xr.include(s.t);
    p.yr.include(s.p1_w);
    p.yr.include(s.p2_w);
    p.yr.include(s.p_sum_w);
  }
  p.xr.finalize();
  p.yr.finalize();
  std::string body;
  shade_segments(body, p, segments);
  if (p.yr.lo < 0 && p.yr.hi > 0) {
    body += "<line x1=\"" + fmt(p.x0) + "\" y1=\"" + fmt(p.py(0)) + "\" x2=\"" +
            fmt(p.x0 + p.w) + "\" y2=\"" + fmt(p.py(0)) +
            "\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n";
  }
  draw_series(body, p, samples, [](const PowerSample& s) { return s.p1_w; }, kAgent1Color, false);
  draw_series(body, p, samples, [](const PowerSample& s) { return s.p2_w; }, kAgent2Color, false);
  draw_series(body, p, samples, [](const PowerSample& s) { return s.p_sum_w; }, kSumColor, true);
  draw_axes(body, p, "time [s]", "power [W]");
  legend_entry(body, p.x0 + p.w - 180, p.y0 + 12, kAgent1Color, false, "agent 1");
  legend_entry(body, p.x0 + p.w - 180, p.y0 + 26, kAgent2Color, false, "agent 2");
  legend_entry(body, p.x0 + p.w - 180, p.y0 + 40, kSumColor, true, "sum");
  write_svg(path, 960, 420, body);
}

void render_projected_svg(const std::string& path, const std::vector<PowerSample>& samples,
                          int goal_count, const std::vector<ActionSegment>& segments) {
  if (goal_count < 1) throw std::invalid_argument("goal_count must be positive");
  const double panel_w = 260, panel_h = 150, gap_x = 50, gap_y = 48;
  const double left = 80, top = 34;
  const char* row_labels[3] = {"force [N]", "velocity [m/s]", "power [W]"};
  std::string body;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < goal_count; ++col) {
      Panel p{left + col * (panel_w + gap_x), top + row * (panel_h + gap_y), panel_w, panel_h,
              {}, {}};
      auto value = [&](const GoalProjection& g) {
        return row == 0 ? g.f_proj_n : row == 1 ? g.v_proj_mps : g.p_proj_w;
      };
      for (const PowerSample& s : samples) {
        p.xr.include(s.t);
        p.yr.include(value(s.agent1[static_cast<size_t>(col)]));
        p.yr.include(value(s.agent2[static_cast<size_t>(col)]));
      }
      p.xr.finalize();
      p.yr.finalize();
      shade_segments(body, p, segments);
      if (p.yr.lo < 0 && p.yr.hi > 0) {
        body += "<line x1=\"" + fmt(p.x0) + "\" y1=\"" + fmt(p.py(0)) + "\" x2=\"" +
                fmt(p.x0 + p.w) + "\" y2=\"" + fmt(p.py(0)) +
                "\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n";
      }
      draw_series(body, p, samples,
                  [&](const PowerSample& s) { return value(s.agent1[static_cast<size_t>(col)]); },
                  kAgent1Color, false);
      draw_series(body, p, samples,
                  [&](const PowerSample& s) { return value(s.agent2[static_cast<size_t>(col)]); },
                  kAgent2Color, false);
      draw_axes(body, p, row == 2 ? "time [s]" : "", col == 0 ? row_labels[row] : "");
      if (row == 0) {
        body += "<text x=\"" + fmt(p.x0 + p.w / 2) + "\" y=\"" + fmt(p.y0 - 8) +
                "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111111\">goal " +
                std::to_string(col + 1) + "</text>\n";
      }
    }
  }
  write_svg(path, left + goal_count * (panel_w + gap_x), top + 3 * (panel_h + gap_y) + 10, body);
}

void render_embedding_svg(const std::string& path, const std::vector<Vec2>& points,
                          const std::vector<int>& labels) {
  if (points.size() != labels.size()) {
    throw std::invalid_argument("points and labels must have equal length");
  }
  Panel p{70, 30, 420, 420, {}, {}};
  for (const Vec2& q : points) {
    p.xr.include(q.x());
    p.yr.include(q.y());
  }
  p.xr.finalize();
  p.yr.finalize();
  std::string body;
  draw_axes(body, p, "component 1", "component 2");
  for (size_t i = 0; i < points.size(); ++i) {
    const char* color =
        labels[i] < 0 ? "#7f7f7f"
                      : kPalette[static_cast<size_t>(labels[i]) % (sizeof(kPalette) / sizeof(kPalette[0]))];
    body += "<circle cx=\"" + fmt(p.px(points[i].x())) + "\" cy=\"" + fmt(p.py(points[i].y())) +
            "\" r=\"4\" fill=\"";
    body += color;
    body += "\" fill-opacity=\"0.8\"/>\n";
  }
  write_svg(path, 540, 500, body);
}

}  // namespace dyad
