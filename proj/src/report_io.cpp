// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dualpress {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << content;
}

namespace {

void append_error_group(std::ostringstream& os, const ConvergenceReport& rep,
                        int k) {
  const ErrorRecord& e = rep.levels[k].err;
  os << "," << format_number(e.u_l2) << "," << format_number(e.u_h1) << ","
     << format_number(e.p_l2);
  if (k == 0) {
    os << ",nan,nan,nan";
  } else {
    const ErrorRecord& c = rep.levels[k - 1].err;
    os << "," << format_number(convergence_rate(c.u_l2, e.u_l2)) << ","
       << format_number(convergence_rate(c.u_h1, e.u_h1)) << ","
       << format_number(convergence_rate(c.p_l2, e.p_l2));
  }
}

const char* kErrorColumns = "err_u_L2,err_u_H1,err_p_L2,rate_u_L2,rate_u_H1,rate_p_L2";

}  // namespace

std::string csv_beam(const ConvergenceReport& primary,
                     const ConvergenceReport* secondary) {
  std::ostringstream os;
  os << "level,n_elems,h";
  if (secondary == nullptr) {
    os << "," << kErrorColumns << "\n";
  } else {
    std::string cols(kErrorColumns);
    std::string mixed = cols, standard = cols;
    auto suffix = [](std::string s, const std::string& suf) {
      std::string out;
      std::istringstream in(s);
      std::string col;
      while (std::getline(in, col, ',')) out += "," + col + suf;
      return out;
    };
    os << suffix(cols, "_mixed") << suffix(cols, "_standard") << "\n";
  }
  for (std::size_t k = 0; k < primary.levels.size(); ++k) {
    const ConvergenceLevel& lvl = primary.levels[k];
    os << lvl.level << "," << lvl.n_elems << "," << format_number(lvl.h);
    append_error_group(os, primary, static_cast<int>(k));
    if (secondary) append_error_group(os, *secondary, static_cast<int>(k));
    os << "\n";
  }
  return os.str();
}

std::string csv_cook(const ConvergenceReport& primary,
                     const ConvergenceReport* secondary) {
  std::ostringstream os;
  os << "level,n,n_elems,h";
  if (secondary == nullptr) {
    os << ",tip\n";
  } else {
    os << ",tip_mixed,tip_standard\n";
  }
  for (std::size_t k = 0; k < primary.levels.size(); ++k) {
    const ConvergenceLevel& lvl = primary.levels[k];
    os << lvl.level << "," << (2 << lvl.level) << "," << lvl.n_elems << ","
       << format_number(lvl.h) << "," << format_number(lvl.tip);
    if (secondary) os << "," << format_number(secondary->levels[k].tip);
    os << "\n";
  }
  return os.str();
}

std::string csv_infsup(const InfSupReport& report) {
  std::ostringstream os;
  os << "level,h,beta_h\n";
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    os << k << "," << format_number(report.levels[k].h) << ","
       << format_number(report.levels[k].beta) << "\n";
  }
  return os.str();
}

namespace {

double axis_map(double v, bool log, double lo, double hi, double p0,
                double p1) {
  double t;
  if (log) {
    t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
  } else {
    t = (v - lo) / (hi - lo);
  }
  return p0 + t * (p1 - p0);
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

}  // namespace

std::string svg_plot(const std::vector<PlotSeries>& series,
                     const std::string& xlabel, const std::string& ylabel,
                     bool logx, bool logy) {
  const double width = 640, height = 480;
  const double left = 80, right = 620, top = 30, bottom = 430;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const PlotSeries& s : series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + (ymin == 0.0 ? 1.0 : std::abs(ymin));
  if (logx) xmin *= 0.9, xmax *= 1.1;
  if (logy) ymin *= 0.9, ymax *= 1.1;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
     << right - left << "\" height=\"" << bottom - top
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Tick marks: decades on log axes, five uniform ticks otherwise.
  auto emit_xtick = [&](double v) {
    const double px = axis_map(v, logx, xmin, xmax, left, right);
    os << "<line x1=\"" << px << "\" y1=\"" << bottom << "\" x2=\"" << px
       << "\" y2=\"" << bottom + 6 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << bottom + 20
       << "\" font-size=\"11\" text-anchor=\"middle\">" << format_number(v)
       << "</text>\n";
  };
  auto emit_ytick = [&](double v) {
    const double py = axis_map(v, logy, ymin, ymax, bottom, top);
    os << "<line x1=\"" << left - 6 << "\" y1=\"" << py << "\" x2=\"" << left
       << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 10 << "\" y=\"" << py + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << format_number(v)
       << "</text>\n";
  };
  if (logx) {
    for (int d = static_cast<int>(std::floor(std::log10(xmin)));
         d <= static_cast<int>(std::ceil(std::log10(xmax))); ++d) {
      const double v = std::pow(10.0, d);
      if (v >= xmin && v <= xmax) emit_xtick(v);
    }
  } else {
    for (int i = 0; i <= 4; ++i) emit_xtick(xmin + (xmax - xmin) * i / 4.0);
  }
  if (logy) {
    for (int d = static_cast<int>(std::floor(std::log10(ymin)));
         d <= static_cast<int>(std::ceil(std::log10(ymax))); ++d) {
      const double v = std::pow(10.0, d);
      if (v >= ymin && v <= ymax) emit_ytick(v);
    }
  } else {
    for (int i = 0; i <= 4; ++i) emit_ytick(ymin + (ymax - ymin) * i / 4.0);
  }

  os << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 15
     << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (top + bottom) / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (top + bottom) / 2 << ")\">" << ylabel << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = kPalette[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double px = axis_map(s.x[i], logx, xmin, xmax, left, right);
      const double py = axis_map(s.y[i], logy, ymin, ymax, bottom, top);
      os << px << "," << py << " ";
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double px = axis_map(s.x[i], logx, xmin, xmax, left, right);
      const double py = axis_map(s.y[i], logy, ymin, ymax, bottom, top);
      os << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3\" fill=\""
         << color << "\"/>\n";
    }
    os << "<text x=\"" << right - 10 << "\" y=\"" << top + 18 + 16 * si
       << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">"
       << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dualpress
