#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "abeltv/grid.hpp"
#include "abeltv/metrics.hpp"
#include "abeltv/operators.hpp"
#include "abeltv/phantoms.hpp"
#include "abeltv/solver.hpp"

namespace abeltv::io {

using nlohmann::json;

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t'))
    s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("parse_double: bad number '" + std::string(s) + "'");
  return v;
}

inline void write_matrix_rows(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

/// "# grid n_r=.. n_z=.. h=..", then one line per radial index.
template <class Tag>
void write_field_csv(std::ostream& os, const GridField<Tag>& f) {
  os << "# grid n_r=" << f.grid.n_r << " n_z=" << f.grid.n_z
     << " h=" << format_double(f.grid.h) << '\n';
  write_matrix_rows(os, f.values);
}

template <class Tag>
GridField<Tag> read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# grid", 0) != 0)
    throw std::invalid_argument("field csv: missing '# grid' header");
  int n_r = 0, n_z = 0;
  double h = 0.0;
  std::istringstream hdr(line.substr(6));
  std::string tok;
  while (hdr >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n_r") n_r = std::stoi(val);
    else if (key == "n_z") n_z = std::stoi(val);
    else if (key == "h") h = parse_double(val);
  }
  const GridRZ g(n_r);
  if (g.n_z != n_z || g.h != h)
    throw std::invalid_argument("field csv: header is not a valid grid");
  Matrix m(n_r, n_z);
  for (int i = 0; i < n_r; ++i) {
    if (!std::getline(is, line))
      throw std::invalid_argument("field csv: expected " + std::to_string(n_r) + " rows");
    std::string_view rest(line);
    for (int j = 0; j < n_z; ++j) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (j == n_z - 1))
        throw std::invalid_argument("field csv: row " + std::to_string(i) +
                                    " has the wrong number of columns");
      m(i, j) = parse_double(rest.substr(0, comma));
      if (!std::isfinite(m(i, j)))
        throw std::invalid_argument("field csv: non-finite value");
      if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
  }
  return GridField<Tag>(g, std::move(m));
}

inline json grid_to_json(const GridRZ& g) { return {{"n_r", g.n_r}, {"n_z", g.n_z}, {"h", g.h}}; }

template <class Tag>
json field_to_json(const GridField<Tag>& f) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < f.values.cols(); ++j) row.push_back(f.values(i, j));
    rows.push_back(std::move(row));
  }
  return {{"grid", grid_to_json(f.grid)}, {"values", std::move(rows)}};
}

template <class Tag>
GridField<Tag> field_from_json(const json& j) {
  const GridRZ g(j.at("grid").at("n_r").get<int>());
  if (j.at("grid").at("n_z").get<int>() != g.n_z || j.at("grid").at("h").get<double>() != g.h)
    throw std::invalid_argument("field json: inconsistent grid");
  const auto& rows = j.at("values");
  if (rows.size() != static_cast<std::size_t>(g.n_r))
    throw std::invalid_argument("field json: wrong number of rows");
  Matrix m(g.n_r, g.n_z);
  for (int i = 0; i < g.n_r; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(g.n_z))
      throw std::invalid_argument("field json: wrong number of columns");
    for (int k = 0; k < g.n_z; ++k) m(i, k) = rows[i][k].get<double>();
  }
  return GridField<Tag>(g, std::move(m));
}

inline void write_abel_matrix_csv(std::ostream& os, const AbelMatrix& a) {
  write_matrix_rows(os, a.entries);
}

inline void write_energy_trace_csv(std::ostream& os, const std::vector<EnergySample>& trace) {
  os << "iteration,energy\n";
  for (const auto& s : trace) os << s.iteration << ',' << format_double(s.energy) << '\n';
}

/// sigma2, err, resid, M1, c, M, C*.
inline void write_bound_report_row(std::ostream& os, double sigma2_frac, const BoundReport& r) {
  os << format_double(sigma2_frac) << ',' << format_double(r.err_l2_uh) << ','
     << format_double(r.resid_l2_vh) << ',' << format_double(r.M1) << ',' << format_double(r.c)
     << ',' << format_double(r.M) << ',' << format_double(r.c_star) << '\n';
}

inline PhantomSpec phantom_from_json(const json& j) {
  PhantomSpec spec;
  for (const auto& s : j.at("shapes")) {
    const auto kind = s.at("kind").get<std::string>();
    const auto r = s.at("r").get<std::vector<double>>();
    const auto z = s.at("z").get<std::vector<double>>();
    if (r.size() != 2 || z.size() != 2)
      throw std::invalid_argument("phantom json: 'r' and 'z' need two entries each");
    PhantomShape shape;
    shape.level = s.at("level").get<double>();
    if (kind == "rect")
      shape.region = RectRegion{r[0], r[1], z[0], z[1]};
    else if (kind == "half_ellipse")
      shape.region = HalfEllipseRegion{r[0], r[1], z[0], z[1]};
    else
      throw std::invalid_argument("phantom json: unknown shape kind '" + kind + "'");
    spec.shapes.push_back(shape);
  }
  return spec;
}

inline json phantom_to_json(const PhantomSpec& spec) {
  json shapes = json::array();
  for (const auto& s : spec.shapes) {
    if (const auto* q = std::get_if<RectRegion>(&s.region))
      shapes.push_back({{"kind", "rect"}, {"r", {q->r0, q->r1}}, {"z", {q->z0, q->z1}},
                        {"level", s.level}});
    else {
      const auto& e = std::get<HalfEllipseRegion>(s.region);
      shapes.push_back({{"kind", "half_ellipse"}, {"r", {e.r_center, e.r_semi}},
                        {"z", {e.z_center, e.z_semi}}, {"level", s.level}});
    }
  }
  return {{"shapes", shapes}};
}

template <class Tag>
void save_field_csv(const std::string& path, const GridField<Tag>& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field_csv(os, f);
}

}  // namespace abeltv::io
