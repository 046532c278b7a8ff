#include "msr/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "msr/errors.hpp"

namespace msr {

int CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

constexpr double kW = 640, kH = 420, kL = 70, kR = 30, kT = 40, kB = 60;

struct Axes {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double px(double x) const { return kL + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (kW - kL - kR); }
  double py(double y) const { return kH - kB - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (kH - kT - kB); }
};

void frame(std::ostringstream& os, const Axes& a, const std::string& title, const std::string& xl,
           const std::string& yl) {
  os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << xl << "</text>\n";
  os << "<text x=\"18\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 18 " << kH / 2 << ")\" text-anchor=\"middle\">"
     << yl << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = a.x0 + (a.x1 - a.x0) * i / 4.0, y = a.y0 + (a.y1 - a.y0) * i / 4.0;
    os << "<text class=\"tick\" x=\"" << fmt(a.px(x)) << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\">"
       << fmt(x) << "</text>\n";
    os << "<text class=\"tick\" x=\"" << kL - 6 << "\" y=\"" << fmt(a.py(y) + 4) << "\" text-anchor=\"end\">" << fmt(y)
       << "</text>\n";
  }
}

std::string color(double rate) {
  rate = std::clamp(rate, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * (1.0 - rate)));
  const int g = static_cast<int>(std::lround(60 + 160 * rate));
  const int b = static_cast<int>(std::lround(80 * (1.0 - rate)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

double num(const std::string& s) {
  try {
    return std::stod(s);
  } catch (...) {
    return std::nan("");
  }
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open " + path.string());
  return read_csv(is);
}

PlotKind plot_kind_from_string(const std::string& s) {
  if (s == "heatmap") return PlotKind::heatmap;
  if (s == "threshold-overlay") return PlotKind::threshold_overlay;
  if (s == "deviation-scatter") return PlotKind::deviation_scatter;
  throw DomainError("unknown plot kind: " + s);
}

std::vector<std::string> required_columns(PlotKind kind) {
  switch (kind) {
    case PlotKind::heatmap: return {"separation", "noise", "success"};
    case PlotKind::threshold_overlay: return {"separation", "success", "threshold"};
    case PlotKind::deviation_scatter: return {"separation", "max_deviation"};
  }
  return {};
}

std::string plot_svg(const CsvTable& table, PlotKind kind, const std::string& title) {
  const auto need = required_columns(kind);
  if (!table.header.empty()) {
    std::string missing;
    for (const auto& c : need)
      if (table.column(c) < 0) missing += (missing.empty() ? "" : ", ") + c;
    if (!missing.empty()) throw DomainError("CSV is missing columns: " + missing);
  }
  auto col = [&](std::size_t r, const std::string& name) {
    const int c = table.column(name);
    return c >= 0 && static_cast<std::size_t>(c) < table.rows[r].size() ? num(table.rows[r][c]) : std::nan("");
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW
     << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  Axes ax;
  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double x = col(r, "separation");
    if (std::isfinite(x)) xs.push_back(x);
  }
  if (!xs.empty()) {
    ax.x0 = *std::min_element(xs.begin(), xs.end());
    ax.x1 = *std::max_element(xs.begin(), xs.end());
  }

  if (kind == PlotKind::heatmap) {
    std::map<std::pair<double, double>, std::pair<double, int>> cells;
    std::vector<double> seps, noises;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double s = col(r, "separation"), z = col(r, "noise"), ok = col(r, "success");
      if (!std::isfinite(s) || !std::isfinite(z) || !std::isfinite(ok)) continue;
      auto& c = cells[{s, z}];
      c.first += ok;
      c.second += 1;
      seps.push_back(s);
      noises.push_back(z);
    }
    std::sort(seps.begin(), seps.end());
    seps.erase(std::unique(seps.begin(), seps.end()), seps.end());
    std::sort(noises.begin(), noises.end());
    noises.erase(std::unique(noises.begin(), noises.end()), noises.end());
    Axes cellax{0, static_cast<double>(std::max<std::size_t>(seps.size(), 1)), 0,
                static_cast<double>(std::max<std::size_t>(noises.size(), 1))};
    frame(os, ax, title.empty() ? "success rate" : title, "separation", "noise level (row)");
    for (std::size_t i = 0; i < seps.size(); ++i)
      for (std::size_t j = 0; j < noises.size(); ++j) {
        auto it = cells.find({seps[i], noises[j]});
        if (it == cells.end()) continue;
        const double rate = it->second.first / it->second.second;
        const double x = cellax.px(i), y = cellax.py(j + 1.0);
        const double w = cellax.px(i + 1.0) - x, h = cellax.py(j) - y;
        os << "<rect class=\"cell\" x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\""
           << fmt(h) << "\" fill=\"" << color(rate) << "\" data-separation=\"" << fmt(seps[i]) << "\" data-noise=\""
           << fmt(noises[j]) << "\" data-value=\"" << fmt(rate) << "\"/>\n";
      }
  } else if (kind == PlotKind::threshold_overlay) {
    std::map<double, std::pair<double, int>> rate;
    double thr_sum = 0.0;
    int thr_n = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double s = col(r, "separation"), ok = col(r, "success"), th = col(r, "threshold");
      if (std::isfinite(s) && std::isfinite(ok)) {
        rate[s].first += ok;
        rate[s].second += 1;
      }
      if (std::isfinite(th)) {
        thr_sum += th;
        ++thr_n;
      }
    }
    const double thr = thr_n ? thr_sum / thr_n : std::nan("");
    if (std::isfinite(thr)) {
      if (xs.empty()) ax.x0 = ax.x1 = thr;
      ax.x0 = std::min(ax.x0, thr);
      ax.x1 = std::max(ax.x1, thr);
    }
    if (ax.x1 == ax.x0) ax.x1 = ax.x0 + 1.0;
    frame(os, ax, title.empty() ? "success rate and threshold" : title, "separation", "success rate");
    std::string pts;
    for (const auto& [s, c] : rate) pts += fmt(ax.px(s)) + "," + fmt(ax.py(c.first / c.second)) + " ";
    if (!pts.empty())
      os << "<polyline class=\"rate\" fill=\"none\" stroke=\"navy\" stroke-width=\"2\" points=\"" << pts << "\"/>\n";
    if (std::isfinite(thr))
      os << "<line class=\"threshold\" data-x=\"" << fmt(thr) << "\" x1=\"" << fmt(ax.px(thr)) << "\" x2=\""
         << fmt(ax.px(thr)) << "\" y1=\"" << kT << "\" y2=\"" << kH - kB
         << "\" stroke=\"crimson\" stroke-dasharray=\"6 4\"/>\n";
  } else {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double d = col(r, "max_deviation");
      if (std::isfinite(d)) ys.push_back(d);
    }
    if (!ys.empty()) ax.y1 = *std::max_element(ys.begin(), ys.end());
    if (ax.y1 <= ax.y0) ax.y1 = ax.y0 + 1.0;
    if (ax.x1 == ax.x0) ax.x1 = ax.x0 + 1.0;
    frame(os, ax, title.empty() ? "matched deviations" : title, "separation", "max deviation");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double s = col(r, "separation"), d = col(r, "max_deviation");
      if (!std::isfinite(s) || !std::isfinite(d)) continue;
      os << "<circle class=\"point\" cx=\"" << fmt(ax.px(s)) << "\" cy=\"" << fmt(ax.py(d)) << "\" r=\"3\" fill=\"navy\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void plot_file(const std::filesystem::path& csv, PlotKind kind, const std::filesystem::path& svg) {
  const auto table = read_csv(csv);
  std::ofstream os(svg);
  if (!os) throw DomainError("cannot write " + svg.string());
  os << plot_svg(table, kind, csv.stem().string());
}

}  // namespace msr
