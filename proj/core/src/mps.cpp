#include "eh2/mps.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "eh2/units.hpp"

namespace eh2 {

namespace {

std::string row_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "R%07d", i + 1);
  return buf;
}

std::string col_name(int j) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "C%07d", j + 1);
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

char sense_tag(RowSense s) {
  switch (s) {
    case RowSense::le: return 'L';
    case RowSense::ge: return 'G';
    case RowSense::eq: return 'E';
  }
  return 'E';
}

}  // namespace

void write_mps(const LinearProgram& lp, const std::string& path,
               const std::string& model_name) {
  if (!lp.finalized()) throw std::logic_error("write_mps: LP must be finalized");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_mps: cannot open " + path);

  f << "NAME          " << model_name << "\n";
  f << "ROWS\n";
  f << " N  OBJ\n";
  for (int i = 0; i < lp.n_rows(); ++i)
    f << " " << sense_tag(lp.senses()[i]) << "  " << row_name(i) << "\n";

  // column-major traversal of the row-ordered triplets
  const auto& rows = lp.coef_rows();
  const auto& cols = lp.coef_cols();
  const auto& vals = lp.coef_values();
  std::vector<int> col_start(lp.n_cols() + 1, 0);
  for (int32_t c : cols) col_start[c + 1]++;
  for (int j = 0; j < lp.n_cols(); ++j) col_start[j + 1] += col_start[j];
  std::vector<int> entry(vals.size());
  {
    std::vector<int> cursor(col_start.begin(), col_start.end() - 1);
    for (std::size_t k = 0; k < vals.size(); ++k) entry[cursor[cols[k]]++] = static_cast<int>(k);
  }

  f << "COLUMNS\n";
  for (int j = 0; j < lp.n_cols(); ++j) {
    const std::string cn = col_name(j);
    if (lp.objective()[j] != 0.0)
      f << "    " << cn << "  OBJ  " << num(lp.objective()[j]) << "\n";
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) {
      const int e = entry[k];
      f << "    " << cn << "  " << row_name(rows[e]) << "  " << num(vals[e]) << "\n";
    }
  }

  f << "RHS\n";
  for (int i = 0; i < lp.n_rows(); ++i) {
    if (lp.rhs()[i] != 0.0)
      f << "    RHS  " << row_name(i) << "  " << num(lp.rhs()[i]) << "\n";
  }

  f << "BOUNDS\n";
  for (int j = 0; j < lp.n_cols(); ++j) {
    const double lb = lp.lower_bounds()[j];
    const double ub = lp.upper_bounds()[j];
    const bool lb_inf = is_unbounded(lb);
    const bool ub_inf = is_unbounded(ub);
    const std::string cn = col_name(j);
    if (!lb_inf && !ub_inf && lb == ub) {
      f << " FX BND  " << cn << "  " << num(lb) << "\n";
      continue;
    }
    if (lb_inf && ub_inf) {
      f << " FR BND  " << cn << "\n";
      continue;
    }
    if (lb_inf)
      f << " MI BND  " << cn << "\n";
    else if (lb != 0.0)
      f << " LO BND  " << cn << "  " << num(lb) << "\n";
    if (!ub_inf) f << " UP BND  " << cn << "  " << num(ub) << "\n";
  }
  f << "ENDATA\n";
  if (!f) throw std::runtime_error("write_mps: write failed on " + path);
}

void write_mps_sidecar(const LinearProgram& lp, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_mps_sidecar: cannot open " + path);
  f << "kind,name,label\n";
  f << "row,OBJ,objective\n";
  for (int i = 0; i < lp.n_rows(); ++i)
    f << "row," << row_name(i) << "," << lp.row_label(i) << "\n";
  for (int j = 0; j < lp.n_cols(); ++j)
    f << "col," << col_name(j) << "," << lp.col_label(j) << "\n";
}

namespace {

struct Tokens {
  std::vector<std::string> t;
  bool header;  // section headers start in column 1
};

bool next_line(std::istream& in, Tokens& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    out.header = !std::isspace(static_cast<unsigned char>(line[0]));
    out.t.clear();
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.t.push_back(tok);
    if (!out.t.empty()) return true;
  }
  return false;
}

double parse_num(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error("read_mps: bad number '" + s + "' in " + ctx);
  return v;
}

}  // namespace

MpsModel read_mps(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_mps: cannot open " + path);

  MpsModel mdl;
  std::map<std::string, int> row_ix, col_ix;
  std::string obj_row;
  enum class Section { none, rows, columns, rhs, ranges, bounds, done } sec = Section::none;

  auto col_of = [&](const std::string& name) {
    auto it = col_ix.find(name);
    if (it != col_ix.end()) return it->second;
    const int j = mdl.n_cols();
    col_ix.emplace(name, j);
    mdl.col_names.push_back(name);
    mdl.obj.push_back(0.0);
    mdl.lb.push_back(0.0);
    mdl.ub.push_back(kUnbounded);
    return j;
  };

  Tokens ln;
  while (next_line(f, ln)) {
    if (ln.header) {
      const std::string& h = ln.t[0];
      if (h == "NAME") { if (ln.t.size() > 1) mdl.name = ln.t[1]; }
      else if (h == "ROWS") sec = Section::rows;
      else if (h == "COLUMNS") sec = Section::columns;
      else if (h == "RHS") sec = Section::rhs;
      else if (h == "RANGES") sec = Section::ranges;
      else if (h == "BOUNDS") sec = Section::bounds;
      else if (h == "ENDATA") { sec = Section::done; break; }
      else throw std::runtime_error("read_mps: unknown section " + h);
      continue;
    }
    switch (sec) {
      case Section::rows: {
        if (ln.t.size() != 2) throw std::runtime_error("read_mps: malformed ROWS line");
        const std::string& tag = ln.t[0];
        const std::string& name = ln.t[1];
        if (tag == "N") {
          if (obj_row.empty()) obj_row = name;  // first N row is the objective
          continue;
        }
        RowSense s;
        if (tag == "L") s = RowSense::le;
        else if (tag == "G") s = RowSense::ge;
        else if (tag == "E") s = RowSense::eq;
        else throw std::runtime_error("read_mps: unknown row tag " + tag);
        row_ix.emplace(name, mdl.n_rows());
        mdl.row_names.push_back(name);
        mdl.senses.push_back(s);
        mdl.rhs.push_back(0.0);
        break;
      }
      case Section::columns: {
        if (ln.t.size() != 3 && ln.t.size() != 5)
          throw std::runtime_error("read_mps: malformed COLUMNS line");
        const int j = col_of(ln.t[0]);
        for (std::size_t k = 1; k + 1 < ln.t.size(); k += 2) {
          const std::string& rname = ln.t[k];
          const double v = parse_num(ln.t[k + 1], "COLUMNS");
          if (rname == obj_row) {
            mdl.obj[j] += v;
          } else {
            auto it = row_ix.find(rname);
            if (it == row_ix.end())
              throw std::runtime_error("read_mps: unknown row " + rname + " in COLUMNS");
            mdl.rows.push_back(it->second);
            mdl.cols.push_back(j);
            mdl.vals.push_back(v);
          }
        }
        break;
      }
      case Section::rhs: {
        if (ln.t.size() != 3 && ln.t.size() != 5)
          throw std::runtime_error("read_mps: malformed RHS line");
        for (std::size_t k = 1; k + 1 < ln.t.size(); k += 2) {
          if (ln.t[k] == obj_row) continue;  // objective offset unsupported, ignore
          auto it = row_ix.find(ln.t[k]);
          if (it == row_ix.end())
            throw std::runtime_error("read_mps: unknown row " + ln.t[k] + " in RHS");
          mdl.rhs[it->second] = parse_num(ln.t[k + 1], "RHS");
        }
        break;
      }
      case Section::ranges:
        throw std::runtime_error("read_mps: RANGES not supported");
      case Section::bounds: {
        if (ln.t.size() < 3) throw std::runtime_error("read_mps: malformed BOUNDS line");
        const std::string& tag = ln.t[0];
        const int j = col_of(ln.t[2]);
        if (tag == "FR") { mdl.lb[j] = -kUnbounded; mdl.ub[j] = kUnbounded; }
        else if (tag == "MI") mdl.lb[j] = -kUnbounded;
        else if (tag == "PL") mdl.ub[j] = kUnbounded;
        else {
          if (ln.t.size() != 4) throw std::runtime_error("read_mps: malformed BOUNDS line");
          const double v = parse_num(ln.t[3], "BOUNDS");
          if (tag == "LO") mdl.lb[j] = v;
          else if (tag == "UP") mdl.ub[j] = v;
          else if (tag == "FX") { mdl.lb[j] = v; mdl.ub[j] = v; }
          else throw std::runtime_error("read_mps: unknown bound tag " + tag);
        }
        break;
      }
      case Section::none:
      case Section::done:
        throw std::runtime_error("read_mps: data line outside any section");
    }
  }
  if (sec != Section::done) throw std::runtime_error("read_mps: missing ENDATA");
  return mdl;
}

bool mps_matches(const LinearProgram& lp, const MpsModel& mdl, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (mdl.n_rows() != lp.n_rows()) return fail("row count differs");
  if (mdl.n_cols() != lp.n_cols()) return fail("column count differs");
  for (int i = 0; i < lp.n_rows(); ++i) {
    if (mdl.senses[i] != lp.senses()[i]) return fail("sense differs on row " + std::to_string(i));
    if (mdl.rhs[i] != lp.rhs()[i]) return fail("rhs differs on row " + std::to_string(i));
  }
  auto same_bound = [](double a, double b) {
    if (is_unbounded(a) || is_unbounded(b))
      return is_unbounded(a) && is_unbounded(b) && ((a > 0) == (b > 0));
    return a == b;
  };
  for (int j = 0; j < lp.n_cols(); ++j) {
    if (mdl.obj[j] != lp.objective()[j])
      return fail("objective differs on column " + std::to_string(j));
    if (!same_bound(mdl.lb[j], lp.lower_bounds()[j]))
      return fail("lower bound differs on column " + std::to_string(j));
    if (!same_bound(mdl.ub[j], lp.upper_bounds()[j]))
      return fail("upper bound differs on column " + std::to_string(j));
  }
  if (mdl.vals.size() != lp.coef_values().size()) return fail("nonzero count differs");
  // both sides hold one entry per (row, col); compare as sorted coordinate maps
  std::map<std::pair<int32_t, int32_t>, double> a, b;
  for (std::size_t k = 0; k < mdl.vals.size(); ++k)
    a[{mdl.rows[k], mdl.cols[k]}] = mdl.vals[k];
  for (std::size_t k = 0; k < lp.coef_values().size(); ++k)
    b[{lp.coef_rows()[k], lp.coef_cols()[k]}] = lp.coef_values()[k];
  if (a != b) return fail("coefficient matrices differ");
  return true;
}

}  // namespace eh2
