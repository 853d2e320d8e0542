#include "tinsim/psd_csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tinsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

void write_psd_csv(std::ostream& out, const Psd& psd) {
  out << "# units=" << to_string(psd.units) << " sidedness=" << to_string(psd.sidedness) << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < psd.values.size(); ++i) {
    out << psd.grid.frequency(i) << ',' << psd.values[i] << '\n';
  }
}

void write_psd_csv(const std::string& path, const Psd& psd) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_psd_csv(out, psd);
}

Psd read_psd_csv(std::istream& in) {
  PsdUnits units = PsdUnits::relative;
  Sidedness sidedness = Sidedness::one_sided;
  std::size_t f_col = 0;
  std::size_t v_col = 1;
  std::vector<double> f;
  std::vector<double> v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::stringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "units") units = parse_units(val);
        if (key == "sidedness") sidedness = parse_sidedness(val);
      }
      continue;
    }
    const auto cols = split(line, ',');
    if (!cols.empty() && !is_number(cols[0])) {
      bool have_f = false;
      bool have_v = false;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c] == "frequency_hz" || cols[c] == "frequency" || cols[c] == "f") {
          f_col = c;
          have_f = true;
        } else if (cols[c] == "value" || cols[c] == "psd") {
          v_col = c;
          have_v = true;
        }
      }
      if (!have_f || !have_v) {
        throw std::invalid_argument("psd csv line " + std::to_string(line_no) +
                                    ": header must name frequency and value columns");
      }
      continue;
    }
    if (cols.size() <= std::max(f_col, v_col)) {
      throw std::invalid_argument("psd csv line " + std::to_string(line_no) + ": too few columns");
    }
    if (!is_number(cols[f_col]) || !is_number(cols[v_col])) {
      throw std::invalid_argument("psd csv line " + std::to_string(line_no) + ": not a number");
    }
    f.push_back(std::stod(cols[f_col]));
    v.push_back(std::stod(cols[v_col]));
  }
  if (f.size() < 2) throw std::invalid_argument("psd csv: need at least two rows");
  const double df = (f.back() - f.front()) / static_cast<double>(f.size() - 1);
  if (!(df > 0.0)) throw std::invalid_argument("psd csv: frequencies must increase");
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double step = f[i] - f[i - 1];
    if (!(step > 0.0)) throw std::invalid_argument("psd csv: frequencies must increase");
    if (std::abs(f[i] - (f.front() + df * static_cast<double>(i))) > 1e-6 * df) {
      throw std::invalid_argument("psd csv: frequency grid is not uniform");
    }
  }
  return Psd(FrequencyGrid{f.front(), df, f.size()}, std::move(v), units, sidedness);
}

Psd read_psd_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_psd_csv(in);
}

}  // namespace tinsim
