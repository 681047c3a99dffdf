// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

namespace quadrelax {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

MiqcqpInstance parse_native(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_native_stream(in);
}

MiqcqpInstance parse_native_stream(std::istream& in) {
  MiqcqpInstance inst;
  bool have_n = false;
  std::map<int, QuadForm*> constraints;
  std::string line;
  int lineno = 0;

  auto form_of = [&](int j, int lineno_) -> QuadForm& {
    if (j < 1) throw ParseError("constraint index must be >= 1", lineno_);
    while (static_cast<int>(inst.constraints.size()) < j) {
      inst.constraints.push_back(QuadForm{});
      inst.constraints.back().c.assign(inst.n, 0.0);
      inst.constraints.back().d.assign(inst.k, 0.0);
    }
    return inst.constraints[j - 1];
  };

  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;

    auto need = [&](auto& v, const char* what) {
      if (!(ls >> v)) throw ParseError(std::string("expected ") + what, lineno);
    };

    if (key == "nvars") {
      need(inst.n, "variable count");
      if (inst.n < 0) throw ParseError("nvars must be >= 0", lineno);
      inst.bounds.assign(inst.n, Interval{0.0, 1.0});
      inst.objective.c.assign(inst.n, 0.0);
      have_n = true;
    } else if (key == "nbins") {
      need(inst.k, "binary count");
      if (inst.k < 0) throw ParseError("nbins must be >= 0", lineno);
      inst.objective.d.assign(inst.k, 0.0);
    } else if (key == "bound") {
      int i;
      double lo, hi;
      need(i, "variable index");
      need(lo, "lower bound");
      need(hi, "upper bound");
      if (!have_n || i < 1 || i > inst.n) throw ParseError("bound index out of range", lineno);
      if (lo > hi) throw ValidationError("bound with lo > hi at line " + std::to_string(lineno));
      inst.bounds[i - 1] = Interval{lo, hi};
    } else if (key == "obj" || key == "con") {
      QuadForm* form = &inst.objective;
      if (key == "con") {
        int j;
        need(j, "constraint index");
        form = &form_of(j, lineno);
      }
      std::string field;
      need(field, "field (q|c|d|b|rhs)");
      if (field == "q") {
        QuadTriplet t;
        need(t.i, "row index");
        need(t.k, "column index");
        need(t.coeff, "coefficient");
        if (t.i < 1 || t.k < 1 || t.i > inst.n || t.k > inst.n)
          throw ParseError("quadratic index out of range", lineno);
        if (t.i > t.k) throw ParseError("quadratic triplets require i <= k", lineno);
        --t.i;
        --t.k;
        form->q.push_back(t);
      } else if (field == "c") {
        int i;
        double v;
        need(i, "variable index");
        need(v, "coefficient");
        if (i < 1 || i > inst.n) throw ParseError("linear index out of range", lineno);
        form->c[i - 1] += v;
      } else if (field == "d") {
        int j;
        double v;
        need(j, "binary index");
        need(v, "coefficient");
        if (j < 1 || j > inst.k) throw ParseError("binary index out of range", lineno);
        form->d[j - 1] += v;
      } else if (field == "b" || field == "rhs") {
        double v;
        need(v, "constant");
        form->b += v;
      } else {
        throw ParseError("unknown field '" + field + "'", lineno);
      }
    } else {
      throw ParseError("unknown keyword '" + key + "'", lineno);
    }
  }
  if (!have_n) throw ParseError("missing nvars header");
  for (auto& g : inst.constraints) {
    if (g.c.size() != static_cast<size_t>(inst.n)) g.c.assign(inst.n, 0.0);
    if (g.d.size() != static_cast<size_t>(inst.k)) g.d.assign(inst.k, 0.0);
  }
  if (inst.objective.d.size() != static_cast<size_t>(inst.k)) inst.objective.d.assign(inst.k, 0.0);
  inst.validate();
  return inst;
}

void write_native(const MiqcqpInstance& inst, const std::string& path) {
  std::ofstream out = open_output(path);
  write_native_stream(inst, out);
}

void write_native_stream(const MiqcqpInstance& inst, std::ostream& out) {
  out << "nvars " << inst.n << "\n";
  out << "nbins " << inst.k << "\n";
  for (int i = 0; i < inst.n; ++i)
    out << "bound " << i + 1 << " " << fmt(inst.bounds[i].lo) << " " << fmt(inst.bounds[i].hi)
        << "\n";
  auto dump_form = [&](const QuadForm& f, const std::string& prefix) {
    for (const auto& t : f.q)
      out << prefix << " q " << t.i + 1 << " " << t.k + 1 << " " << fmt(t.coeff) << "\n";
    for (size_t i = 0; i < f.c.size(); ++i) {
      if (f.c[i] != 0.0) out << prefix << " c " << i + 1 << " " << fmt(f.c[i]) << "\n";
    }
    for (size_t j = 0; j < f.d.size(); ++j) {
      if (f.d[j] != 0.0) out << prefix << " d " << j + 1 << " " << fmt(f.d[j]) << "\n";
    }
    if (f.b != 0.0) out << prefix << " b " << fmt(f.b) << "\n";
  };
  dump_form(inst.objective, "obj");
  for (size_t j = 0; j < inst.constraints.size(); ++j)
    dump_form(inst.constraints[j], "con " + std::to_string(j + 1));
}

BoxQpParseResult parse_boxqp(const std::string& path, bool maximize) {
  std::ifstream in = open_input(path);
  return parse_boxqp_stream(in, maximize);
}

BoxQpParseResult parse_boxqp_stream(std::istream& in, bool maximize) {
  int n = 0;
  if (!(in >> n) || n <= 0) throw ParseError("boxQP header must be a positive variable count");
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> c[i])) throw ParseError("boxQP linear vector ended early");
  }
  std::vector<double> q(static_cast<size_t>(n) * n);
  for (size_t t = 0; t < q.size(); ++t) {
    if (!(in >> q[t])) throw ParseError("boxQP matrix ended early");
  }

  BoxQpParseResult res;
  const double sign = maximize ? -1.0 : 1.0;
  MiqcqpInstance& inst = res.instance;
  inst.n = n;
  inst.k = 0;
  inst.bounds.assign(n, Interval{0.0, 1.0});
  inst.objective.c.resize(n);
  for (int i = 0; i < n; ++i) inst.objective.c[i] = sign * c[i];
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) {
      const double qik = q[static_cast<size_t>(i) * n + k];
      const double qki = q[static_cast<size_t>(k) * n + i];
      if (std::abs(qik - qki) > 1e-9) res.symmetrized = true;
      // min (1/2) x'Qx: the diagonal contributes Q_ii/2, off-diagonals merge.
      const double coeff = i == k ? 0.5 * qik : 0.5 * (qik + qki);
      if (coeff != 0.0) inst.objective.q.push_back(QuadTriplet{i, k, sign * coeff});
    }
  }
  return res;
}

void export_lp_file(const MipModel& model, const std::string& path) {
  std::ofstream out = open_output(path);
  export_lp_stream(model, out);
}

void export_lp_stream(const MipModel& model, std::ostream& out) {
  out << "\\ quadrelax model export\n";
  out << "Minimize\n obj:";
  for (const auto& [v, coeff] : model.objective_terms()) {
    out << (coeff < 0 ? " - " : " + ") << fmt(std::abs(coeff)) << " " << model.var(v).name;
  }
  if (model.objective_constant() != 0.0) {
    const double c = model.objective_constant();
    out << (c < 0 ? " - " : " + ") << fmt(std::abs(c));
  }
  out << "\nSubject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const Row& r = model.row(i);
    out << " " << (r.name.empty() ? "r" + std::to_string(i + 1) : r.name) << ":";
    if (r.coeffs.empty()) out << " 0 " << (model.num_vars() > 0 ? model.var(0).name : "x0");
    for (const auto& [v, coeff] : r.coeffs) {
      out << (coeff < 0 ? " - " : " + ") << fmt(std::abs(coeff)) << " " << model.var(v).name;
    }
    switch (r.sense) {
      case RowSense::LE: out << " <= "; break;
      case RowSense::GE: out << " >= "; break;
      case RowSense::EQ: out << " = "; break;
    }
    out << fmt(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    if (model.var(v).kind == VarKind::Binary) continue;
    const Interval& b = model.var(v).bounds;
    out << " " << fmt(b.lo) << " <= " << model.var(v).name << " <= " << fmt(b.hi) << "\n";
  }
  bool any_binary = false;
  for (int v = 0; v < model.num_vars(); ++v) any_binary |= model.var(v).kind == VarKind::Binary;
  if (any_binary) {
    out << "Binaries\n";
    for (int v = 0; v < model.num_vars(); ++v) {
      if (model.var(v).kind == VarKind::Binary) out << " " << model.var(v).name;
    }
    out << "\n";
  }
  out << "End\n";
}

MipModel parse_lp_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_lp_stream(in);
}

namespace {

// Tokenizes an LP body expression "a x1 - 2 x2 + 3" into (coeff, name) pairs
// plus a constant. Names start with a letter or underscore.
struct LpExprParse {
  std::vector<std::pair<std::string, double>> terms;
  double constant = 0.0;
};

LpExprParse parse_lp_expr(const std::vector<std::string>& tokens, size_t begin, size_t end) {
  LpExprParse e;
  double sign = 1.0;
  double pending = 1.0;
  bool have_coeff = false;
  for (size_t t = begin; t < end; ++t) {
    const std::string& tok = tokens[t];
    if (tok == "+") {
      if (have_coeff) e.constant += sign * pending;
      sign = 1.0;
      pending = 1.0;
      have_coeff = false;
    } else if (tok == "-") {
      if (have_coeff) e.constant += sign * pending;
      sign = -1.0;
      pending = 1.0;
      have_coeff = false;
    } else if (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.') {
      pending = std::stod(tok);
      have_coeff = true;
    } else {
      e.terms.emplace_back(tok, sign * pending);
      sign = 1.0;
      pending = 1.0;
      have_coeff = false;
    }
  }
  if (have_coeff) e.constant += sign * pending;
  return e;
}

}  // namespace

MipModel parse_lp_stream(std::istream& in) {
  enum class Section { None, Objective, Rows, Bounds, Binaries, Done };
  Section section = Section::None;

  struct PendingRow {
    std::string name;
    std::vector<std::string> tokens;
  };
  std::vector<std::string> obj_tokens;
  std::vector<PendingRow> rows;
  std::vector<std::tuple<std::string, double, double>> bounds;
  std::vector<std::string> binaries;

  std::string line;
  int lineno = 0;
  PendingRow* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t comment = line.find('\\');
    if (comment != std::string::npos) line.erase(comment);
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;

    std::string lowered;
    for (char ch : toks[0]) lowered.push_back(static_cast<char>(std::tolower(ch)));
    const std::string joined = lowered + (toks.size() > 1 ? " " + toks[1] : "");
    if (lowered == "minimize" || lowered == "min") {
      section = Section::Objective;
      continue;
    }
    if (lowered == "maximize" || lowered == "max")
      throw ParseError("maximization LP files are not supported", lineno);
    if (lowered == "subject" || lowered == "st" || lowered == "s.t.") {
      section = Section::Rows;
      current = nullptr;
      continue;
    }
    if (lowered == "bounds") {
      section = Section::Bounds;
      continue;
    }
    if (lowered == "binaries" || lowered == "binary" || lowered == "bin") {
      section = Section::Binaries;
      continue;
    }
    if (lowered == "end") {
      section = Section::Done;
      break;
    }
    (void)joined;

    switch (section) {
      case Section::Objective: {
        for (auto& t : toks) {
          if (!t.empty() && t.back() == ':') continue;  // objective label
          obj_tokens.push_back(t);
        }
        break;
      }
      case Section::Rows: {
        size_t start = 0;
        if (!toks[0].empty() && toks[0].back() == ':') {
          rows.push_back(PendingRow{toks[0].substr(0, toks[0].size() - 1), {}});
          current = &rows.back();
          start = 1;
        } else if (current == nullptr) {
          rows.push_back(PendingRow{"", {}});
          current = &rows.back();
        }
        for (size_t t = start; t < toks.size(); ++t) current->tokens.push_back(toks[t]);
        if (!current->tokens.empty()) {
          for (const std::string& t : current->tokens) {
            if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">") {
              // Sense seen; the row completes once its rhs token arrives.
            }
          }
        }
        break;
      }
      case Section::Bounds: {
        // "LO <= name <= HI"
        if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
          bounds.emplace_back(toks[2], std::stod(toks[0]), std::stod(toks[4]));
        } else if (toks.size() == 3 && toks[1] == "<=") {
          bounds.emplace_back(toks[0], -std::numeric_limits<double>::infinity(),
                              std::stod(toks[2]));
        } else {
          throw ParseError("unsupported bounds line", lineno);
        }
        break;
      }
      case Section::Binaries: {
        for (auto& t : toks) binaries.push_back(t);
        break;
      }
      default:
        throw ParseError("content outside any LP section", lineno);
    }
  }

  // Assemble: collect variable names in first-appearance order.
  std::vector<std::string> names;
  std::map<std::string, VarId> ids;
  auto intern = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    const VarId v = static_cast<VarId>(names.size());
    names.push_back(name);
    ids.emplace(name, v);
    return v;
  };

  const LpExprParse obj = parse_lp_expr(obj_tokens, 0, obj_tokens.size());
  for (const auto& [name, coeff] : obj.terms) intern(name);

  struct ParsedRow {
    LpExprParse lhs;
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
    std::string name;
  };
  std::vector<ParsedRow> parsed_rows;
  for (const auto& pr : rows) {
    if (pr.tokens.empty()) continue;
    size_t sense_pos = pr.tokens.size();
    RowSense sense = RowSense::LE;
    for (size_t t = 0; t < pr.tokens.size(); ++t) {
      const std::string& s = pr.tokens[t];
      if (s == "<=" || s == "<") {
        sense_pos = t;
        sense = RowSense::LE;
        break;
      }
      if (s == ">=" || s == ">") {
        sense_pos = t;
        sense = RowSense::GE;
        break;
      }
      if (s == "=") {
        sense_pos = t;
        sense = RowSense::EQ;
        break;
      }
    }
    if (sense_pos >= pr.tokens.size() || sense_pos + 1 >= pr.tokens.size())
      throw ParseError("row '" + pr.name + "' has no sense/rhs");
    ParsedRow row;
    row.lhs = parse_lp_expr(pr.tokens, 0, sense_pos);
    row.sense = sense;
    row.rhs = std::stod(pr.tokens[sense_pos + 1]);
    row.name = pr.name;
    for (const auto& [name, coeff] : row.lhs.terms) intern(name);
    parsed_rows.push_back(std::move(row));
  }
  for (const auto& [name, lo, hi] : bounds) intern(name);
  for (const auto& name : binaries) intern(name);

  MipModel m;
  std::map<std::string, bool> is_binary;
  for (const auto& b : binaries) is_binary[b] = true;
  std::map<std::string, Interval> bnd;
  for (const auto& [name, lo, hi] : bounds) bnd[name] = Interval{lo, hi};
  for (const auto& name : names) {
    if (is_binary.count(name)) {
      m.add_binary(name);
    } else {
      auto it = bnd.find(name);
      if (it == bnd.end())
        m.add_continuous(name, 0.0, std::numeric_limits<double>::infinity());
      else
        m.add_continuous(name, it->second.lo, it->second.hi);
    }
  }
  LinExpr obj_expr;
  for (const auto& [name, coeff] : obj.terms) obj_expr.add(ids[name], coeff);
  obj_expr.compact();
  m.add_objective(obj_expr);
  m.set_objective_constant(obj.constant);
  for (const auto& row : parsed_rows) {
    LinExpr e;
    for (const auto& [name, coeff] : row.lhs.terms) e.add(ids[name], coeff);
    e.constant = row.lhs.constant;
    m.add_row(std::move(e), row.sense, row.rhs, row.name);
  }
  return m;
}

void write_term_map_json(const RelaxationResult& result, const std::string& path) {
  nlohmann::json j;
  j["method"] = to_string(result.config.method);
  j["L"] = result.config.L;
  j["L1"] = result.config.L1;
  j["lambda"] = result.config.lambda;
  j["counts"] = {{"digit_binaries", result.actual_counts.binaries},
                 {"rows", result.actual_counts.rows},
                 {"predicted_digit_binaries", result.predicted_counts.binaries},
                 {"predicted_rows", result.predicted_counts.rows},
                 {"variables", result.model.num_vars()}};
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : result.term_map.terms) {
    nlohmann::json jt;
    jt["i"] = t.i + 1;
    jt["k"] = t.k + 1;
    jt["aux"] = result.model.var(t.z).name;
    if (t.discretized >= 0) jt["discretized"] = t.discretized + 1;
    terms.push_back(jt);
  }
  j["terms"] = terms;
  nlohmann::json digits = nlohmann::json::object();
  for (const auto& [vi, d] : result.term_map.per_var) {
    nlohmann::json jd;
    nlohmann::json beta = nlohmann::json::array();
    for (VarId b : d.digits.beta) beta.push_back(result.model.var(b).name);
    jd["beta"] = beta;
    jd["delta"] = result.model.var(d.digits.delta).name;
    if (!d.sawtooth_g.empty()) {
      nlohmann::json g = nlohmann::json::array();
      for (VarId gv : d.sawtooth_g) g.push_back(result.model.var(gv).name);
      jd["sawtooth_g"] = g;
    }
    digits["x" + std::to_string(vi + 1)] = jd;
  }
  j["discretizations"] = digits;

  std::ofstream out = open_output(path);
  out << j.dump(2) << "\n";
}

void write_error_report_header(std::ostream& out) {
  out << "method,surface,L,L1,lambda,max_error_theory,max_error_empirical,"
         "avg_width_theory,avg_width_empirical,avg_width_stderr,lp_volume,lp_volume_stderr\n";
}

void write_error_report_row(std::ostream& out, const ErrorReportRow& row) {
  out << to_string(row.method) << "," << to_string(row.surface) << "," << row.L << "," << row.L1
      << "," << fmt(row.lambda) << "," << fmt(row.max_error_theory) << ","
      << fmt(row.max_error_empirical) << "," << fmt(row.avg_width_theory) << ","
      << fmt(row.avg_width_empirical) << "," << fmt(row.avg_width_stderr) << ","
      << fmt(row.lp_volume) << "," << fmt(row.lp_volume_stderr) << "\n";
}

void write_bench_header(std::ostream& out) {
  out << "instance,method,L,L1,status,dual_bound,primal,gap,nodes,wall_seconds\n";
}

void write_bench_row(std::ostream& out, const BenchRow& row) {
  out << row.instance << "," << to_string(row.method) << "," << row.L << "," << row.L1 << ","
      << row.status << "," << fmt(row.dual_bound) << "," << fmt(row.primal) << ","
      << fmt(row.gap) << "," << row.nodes << "," << fmt(row.wall_seconds) << "\n";
}

std::vector<BenchRow> read_bench_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty runs CSV");
  std::vector<BenchRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 10) throw ParseError("runs CSV row has too few columns", lineno);
    BenchRow row;
    row.instance = cells[0];
    row.method = method_from_string(cells[1]);
    row.L = std::stoi(cells[2]);
    row.L1 = std::stoi(cells[3]);
    row.status = cells[4];
    row.dual_bound = std::stod(cells[5]);
    row.primal = std::stod(cells[6]);
    row.gap = std::stod(cells[7]);
    row.nodes = std::stol(cells[8]);
    row.wall_seconds = std::stod(cells[9]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_profile_csv(const ProfileTable& table, std::ostream& out) {
  out << "solver,tau,p\n";
  for (size_t s = 0; s < table.solver_names.size(); ++s) {
    for (const ProfileStep& step : table.steps[s]) {
      out << table.solver_names[s] << "," << fmt(step.tau) << "," << fmt(step.p) << "\n";
    }
  }
}

void write_sgm_csv(const std::vector<SgmRow>& rows, double shift, std::ostream& out) {
  out << "solver,shifted_geomean_seconds,shift,instances\n";
  for (const auto& r : rows) {
    out << r.solver << "," << fmt(r.sgm_seconds) << "," << fmt(shift) << "," << r.instances
        << "\n";
  }
}

}  // namespace quadrelax
