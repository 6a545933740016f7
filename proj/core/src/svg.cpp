#include "dialoscope/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dialoscope/errors.hpp"

namespace dialoscope {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;  // legend gutter
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

constexpr const char* kSeriesColors[] = {"#4878a8", "#d65f5f", "#6acc65", "#956cb4",
                                         "#c4ad66", "#77bedb", "#8c613c", "#dc7ec0"};

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  double span() const { return hi - lo; }
};

Range value_range(const ChartData& data, bool bars) {
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (const auto& s : data.series) {
    for (const auto& v : s.values) {
      if (!v) continue;
      if (!any) {
        lo = hi = *v;
        any = true;
      } else {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    }
  }
  if (!any) throw Error(Error::Kind::Data, "render_chart: series contain no values");
  if (bars && lo > 0.0) lo = 0.0;  // bars grow from zero
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  return {lo, hi};
}

class SvgWriter {
public:
  SvgWriter(const ChartSpec& spec) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
         << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out_ << "<style>\n"
            "text{font-family:sans-serif;font-size:12px;fill:#222}\n"
            ".title{font-size:15px}\n"
            ".bar{fill:#4878a8}\n"
            ".lv0{fill:#a6d96a}.lv1{fill:#ffffbf}.lv2{fill:#fdae61}.lv3{fill:#d7191c}\n"
            ".axis{stroke:#444;stroke-width:1;fill:none}\n"
            "</style>\n";
    text(kWidth / 2, 24, spec.title, "middle", "title");
    if (!spec.x_label.empty()) text(kLeft + plot_w() / 2, kHeight - 14, spec.x_label, "middle");
    if (!spec.y_label.empty()) {
      out_ << "<text text-anchor=\"middle\" transform=\"translate(16," << (kTop + plot_h() / 2)
           << ") rotate(-90)\">" << xml_escape(spec.y_label) << "</text>\n";
    }
  }

  static double plot_w() { return kWidth - kLeft - kRight; }
  static double plot_h() { return kHeight - kTop - kBottom; }

  void rect(double x, double y, double w, double h, const std::string& cls,
            const std::string& fill = "") {
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
         << "\" height=\"" << num(h) << "\"";
    if (!cls.empty()) out_ << " class=\"" << cls << "\"";
    if (!fill.empty()) out_ << " fill=\"" << fill << "\"";
    out_ << "/>\n";
  }

  void text(double x, double y, const std::string& s, const char* anchor = "start",
            const char* cls = nullptr) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
         << "\"";
    if (cls) out_ << " class=\"" << cls << "\"";
    out_ << ">" << xml_escape(s) << "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
    if (pts.size() == 1) {
      out_ << "<circle cx=\"" << num(pts[0].first) << "\" cy=\"" << num(pts[0].second)
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      return;
    }
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out_ << ' ';
      out_ << num(pts[i].first) << ',' << num(pts[i].second);
    }
    out_ << "\"/>\n";
  }

  void axes(const Range& range) {
    out_ << "<path class=\"axis\" d=\"M" << num(kLeft) << " " << num(kTop) << " L" << num(kLeft)
         << " " << num(kTop + plot_h()) << " L" << num(kLeft + plot_w()) << " "
         << num(kTop + plot_h()) << "\"/>\n";
    // only data extrema are labeled; both values come from the report rows
    text(kLeft - 6, kTop + 4, num(range.hi), "end");
    text(kLeft - 6, kTop + plot_h() + 4, num(range.lo), "end");
  }

  void legend(const std::vector<Series>& series) {
    double x = kLeft + plot_w() + 16;
    double y = kTop + 8;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const char* color = kSeriesColors[i % std::size(kSeriesColors)];
      rect(x, y - 9, 12, 12, "", color);
      text(x + 18, y + 1, series[i].label);
      y += 20;
    }
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

private:
  std::ostringstream out_;
};

double y_of(double v, const Range& r) {
  return kTop + SvgWriter::plot_h() * (1.0 - (v - r.lo) / r.span());
}

void validate(const ChartSpec& spec, const ChartData& data) {
  if (data.series.empty()) throw Error(Error::Kind::Data, "render_chart: no series");
  for (const auto& s : data.series) {
    if (s.values.size() != spec.x_labels.size()) {
      throw Error(Error::Kind::Data, "render_chart: series '" + s.label + "' has " +
                                         std::to_string(s.values.size()) + " values for " +
                                         std::to_string(spec.x_labels.size()) + " x labels");
    }
  }
}

std::string render_bars(const ChartSpec& spec, const ChartData& data) {
  Range range = value_range(data, true);
  SvgWriter svg(spec);
  svg.axes(range);

  const std::size_t groups = spec.x_labels.size();
  const std::size_t per_group = data.series.size();
  double group_w = SvgWriter::plot_w() / static_cast<double>(groups);
  double bar_w = group_w * 0.8 / static_cast<double>(per_group);

  for (std::size_t s = 0; s < per_group; ++s) {
    for (std::size_t g = 0; g < groups; ++g) {
      const auto& v = data.series[s].values[g];
      if (!v) continue;  // gap: no rect at all
      double x = kLeft + group_w * static_cast<double>(g) + group_w * 0.1 +
                 bar_w * static_cast<double>(s);
      double y0 = y_of(std::max(0.0, range.lo), range);
      double y1 = y_of(*v, range);
      svg.rect(x, std::min(y0, y1), bar_w, std::abs(y0 - y1), "bar",
               per_group > 1 ? kSeriesColors[s % std::size(kSeriesColors)] : "");
    }
  }
  for (std::size_t g = 0; g < groups; ++g) {
    svg.text(kLeft + group_w * (static_cast<double>(g) + 0.5), kTop + SvgWriter::plot_h() + 16,
             spec.x_labels[g], "middle");
  }
  if (per_group > 1) svg.legend(data.series);
  return svg.finish();
}

std::string render_lines(const ChartSpec& spec, const ChartData& data) {
  Range range = value_range(data, false);
  SvgWriter svg(spec);
  svg.axes(range);

  const std::size_t n = spec.x_labels.size();
  double step = n > 1 ? SvgWriter::plot_w() / static_cast<double>(n - 1) : 0.0;
  auto x_of = [&](std::size_t i) {
    return n > 1 ? kLeft + step * static_cast<double>(i) : kLeft + SvgWriter::plot_w() / 2;
  };

  for (std::size_t s = 0; s < data.series.size(); ++s) {
    const char* color = kSeriesColors[s % std::size(kSeriesColors)];
    std::vector<std::pair<double, double>> segment;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = data.series[s].values[i];
      if (v) {
        segment.emplace_back(x_of(i), y_of(*v, range));
      } else if (!segment.empty()) {
        svg.polyline(segment, color);  // gap breaks the line
        segment.clear();
      }
    }
    if (!segment.empty()) svg.polyline(segment, color);
  }
  for (std::size_t i = 0; i < n; ++i) {
    svg.text(x_of(i), kTop + SvgWriter::plot_h() + 16, spec.x_labels[i], "middle");
  }
  svg.legend(data.series);
  return svg.finish();
}

std::string render_heatmap(const ChartSpec& spec, const ChartData& data) {
  if (data.heat_levels.size() != data.series.size()) {
    throw Error(Error::Kind::Data, "render_chart: heat_levels shape mismatch");
  }
  SvgWriter svg(spec);
  const std::size_t rows = data.series.size();
  const std::size_t cols = spec.x_labels.size();
  double cell_w = SvgWriter::plot_w() / static_cast<double>(cols);
  double cell_h = SvgWriter::plot_h() / static_cast<double>(rows);

  for (std::size_t r = 0; r < rows; ++r) {
    if (data.heat_levels[r].size() != cols) {
      throw Error(Error::Kind::Data, "render_chart: heat_levels shape mismatch");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& v = data.series[r].values[c];
      double x = kLeft + cell_w * static_cast<double>(c);
      double y = kTop + cell_h * static_cast<double>(r);
      if (!v) continue;  // missing cell stays blank
      int level = std::clamp(data.heat_levels[r][c], 0, 3);
      svg.rect(x + 1, y + 1, cell_w - 2, cell_h - 2, "lv" + std::to_string(level));
      svg.text(x + cell_w / 2, y + cell_h / 2 + 4, num(*v), "middle");
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    svg.text(kLeft + cell_w * (static_cast<double>(c) + 0.5), kTop + SvgWriter::plot_h() + 16,
             spec.x_labels[c], "middle");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    svg.text(kLeft - 6, kTop + cell_h * (static_cast<double>(r) + 0.5) + 4,
             data.series[r].label, "end");
  }
  return svg.finish();
}

}  // namespace

std::string render_chart(const ChartSpec& spec, const ChartData& data) {
  validate(spec, data);
  switch (spec.kind) {
    case ChartKind::Bars: return render_bars(spec, data);
    case ChartKind::Lines: return render_lines(spec, data);
    case ChartKind::Heatmap: return render_heatmap(spec, data);
  }
  throw Error(Error::Kind::Config, "render_chart: unknown chart kind");
}

}  // namespace dialoscope
