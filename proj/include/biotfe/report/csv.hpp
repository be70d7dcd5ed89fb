// Experiment rows as CSV: '#' parameter lines, a header, one row per (kappa, N).

#ifndef BIOTFE_REPORT_CSV_HPP
#define BIOTFE_REPORT_CSV_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/algorithm/string.hpp>

#include "biotfe/verify/study.hpp"

namespace biotfe::report {

using HeaderLines = std::vector<std::pair<std::string, std::string>>;

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "experiment", "scheme",       "kappa",      "N",    "h",     "err_u_energy", "err_p_l2",  "err_w_l2",
      "rate_u",     "rate_p",       "gamma_h",    "eta",  "err_u_linear", "err_u_full", "dofs", "status"};
  return cols;
}

/// Shortest round-trip text for a double; "nan" for NaN.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<verify::ExperimentRow>& rows, const HeaderLines& header = {}) {
  for (const auto& [k, v] : header) os << "# " << k << " = " << v << '\n';
  os << boost::join(csv_columns(), ",") << '\n';
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.scheme << ',' << format_number(r.kappa) << ',' << r.n << ',' << format_number(r.h)
       << ',' << format_number(r.err_u_energy) << ',' << format_number(r.err_p_l2) << ','
       << format_number(r.err_w_l2) << ',' << format_number(r.rate_u) << ',' << format_number(r.rate_p) << ','
       << format_number(r.gamma_h) << ',' << format_number(r.eta) << ',' << format_number(r.err_u_linear) << ','
       << format_number(r.err_u_full) << ',' << r.dofs << ',' << r.status << '\n';
  }
}

struct CsvTable {
  HeaderLines header;
  std::vector<verify::ExperimentRow> rows;
};

namespace detail {

inline double parse_number(const std::string& s) {
  if (s.empty() || s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace detail

/// Reads a CSV in the schema above. Columns are matched by name, so missing
/// optional columns stay NaN.
inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  std::vector<std::string> cols;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    boost::trim_right_if(line, boost::is_any_of("\r"));
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos)
        t.header.emplace_back(boost::trim_copy(line.substr(1, eq - 1)), boost::trim_copy(line.substr(eq + 1)));
      continue;
    }
    std::vector<std::string> f;
    boost::split(f, line, boost::is_any_of(","));
    if (cols.empty()) {
      cols = f;
      for (const char* need : {"scheme", "h", "err_u_energy", "err_p_l2"})
        if (std::find(cols.begin(), cols.end(), need) == cols.end())
          throw std::invalid_argument(std::string("csv: missing column '") + need + "'");
      continue;
    }
    if (f.size() != cols.size()) throw std::invalid_argument("csv: line " + std::to_string(lineno) + " has wrong width");
    verify::ExperimentRow r;
    try {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const std::string& c = cols[i];
        const std::string& v = f[i];
        if (c == "experiment") r.experiment = v;
        else if (c == "scheme") r.scheme = v;
        else if (c == "kappa") r.kappa = detail::parse_number(v);
        else if (c == "N") r.n = static_cast<Index>(detail::parse_number(v));
        else if (c == "h") r.h = detail::parse_number(v);
        else if (c == "err_u_energy") r.err_u_energy = detail::parse_number(v);
        else if (c == "err_p_l2") r.err_p_l2 = detail::parse_number(v);
        else if (c == "err_w_l2") r.err_w_l2 = detail::parse_number(v);
        else if (c == "rate_u") r.rate_u = detail::parse_number(v);
        else if (c == "rate_p") r.rate_p = detail::parse_number(v);
        else if (c == "gamma_h") r.gamma_h = detail::parse_number(v);
        else if (c == "eta") r.eta = detail::parse_number(v);
        else if (c == "err_u_linear") r.err_u_linear = detail::parse_number(v);
        else if (c == "err_u_full") r.err_u_full = detail::parse_number(v);
        else if (c == "dofs") r.dofs = static_cast<Index>(detail::parse_number(v));
        else if (c == "status") r.status = v;
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("csv: line " + std::to_string(lineno) + ": " + e.what());
    }
    t.rows.push_back(std::move(r));
  }
  if (cols.empty()) throw std::invalid_argument("csv: empty file");
  return t;
}

}  // namespace biotfe::report

#endif  // BIOTFE_REPORT_CSV_HPP
