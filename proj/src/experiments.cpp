#include "tubekit/experiments.hpp"

#include "tubekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace tubekit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

// ---- config ---------------------------------------------------------------------------------

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw UsageError("parameter " + key + " must be an integer, got '" + it->second + "'");
  }
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw UsageError("parameter " + key + " must be a number, got '" + it->second + "'");
  }
}

std::vector<long long> ExperimentConfig::get_int_list(const std::string& key,
                                                      const std::vector<long long>& fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<long long> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    ExperimentConfig one;
    one.params[key] = trim(item);
    out.push_back(one.get_int(key, 0));
  }
  if (out.empty()) throw UsageError("parameter " + key + " is an empty list");
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    if (key == "experiment")
      cfg.name = value;
    else
      cfg.params[key] = value;
  }
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& tokens) {
  for (const auto& t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + t + "'");
    const std::string key = t.substr(0, eq), value = t.substr(eq + 1);
    if (key == "experiment")
      cfg.name = value;
    else
      cfg.params[key] = value;
  }
}

// ---- tables ---------------------------------------------------------------------------------

std::string fmt(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(long long v) { return std::to_string(v); }

std::string Table::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw UsageError("no column '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  for (const auto& r : rows) {
    try {
      out.push_back(std::stod(r.at(idx)));
    } catch (const std::exception&) {
      throw UsageError("column '" + name + "' holds a non-numeric value");
    }
  }
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = cells;
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw ParseError("csv row width differs from the header");
      t.rows.push_back(cells);
    }
  }
  if (first) throw ParseError("empty csv");
  return t;
}

bool ExperimentResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

std::string ExperimentResult::summary_text() const {
  std::string out = "experiment: " + name + "\n";
  for (const auto& s : summary) out += s + "\n";
  for (const auto& a : assertions)
    out += std::string(a.pass ? "PASS " : "FAIL ") + a.name + (a.detail.empty() ? "" : " (" + a.detail + ")") + "\n";
  out += std::string("result: ") + (passed() ? "pass" : "fail") + "\n";
  return out;
}

// ---- svg ------------------------------------------------------------------------------------

std::string render_svg(const Table& t, const PlotSpec& spec, const std::string& title) {
  const double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << title << "</text>\n";
  if (t.rows.empty()) {
    o << "</svg>\n";
    return o.str();
  }
  const std::vector<double> xs = t.column(spec.x);
  std::vector<std::vector<double>> ys;
  for (const auto& y : spec.ys) {
    auto col = t.column(y);
    if (spec.log_y)
      for (double& v : col) v = v > 0 ? std::log2(v) : 0;
    ys.push_back(col);
  }
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = 1e300, y1 = -1e300;
  for (const auto& c : ys)
    for (double v : c) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return std::string(buf);
  };
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(x0)
    << "</text>\n";
  o << "<text x=\"" << W - R << "\" y=\"" << H - B + 18
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(x1) << "</text>\n";
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << spec.x << "</text>\n";
  o << "<text x=\"" << L - 6 << "\" y=\"" << H - B
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(y0) << "</text>\n";
  o << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
    << num(y1) << "</text>\n";
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (std::size_t c = 0; c < ys.size(); ++c) {
    o << "<polyline fill=\"none\" stroke=\"" << colors[c % 5] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) o << (i ? " " : "") << num(px(xs[i])) << "," << num(py(ys[c][i]));
    o << "\"/>\n";
    o << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (c + 1) << "\" text-anchor=\"end\" fill=\"" << colors[c % 5]
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << (spec.log_y ? "log2 " : "") << spec.ys[c] << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_artifacts(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& file, const std::string& body) {
    std::ofstream f(dir / file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / file).string());
    f << body;
  };
  put(r.name + ".csv", r.table.to_csv());
  put(r.name + ".summary.txt", r.summary_text());
  if (r.plot) put(r.name + ".svg", render_svg(r.table, *r.plot, r.name));
}

}  // namespace tubekit
