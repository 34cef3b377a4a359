#include "statlin/spec_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace statlin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw SpecError(message); }

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) fail(std::string("missing required field '") + key + "'");
  return j.at(key);
}

int require_int(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Rat rational_at(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + " must be a rational string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
}

RatVec rational_vector(const json& v, int expected, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != expected) {
    fail(where + " must be an array of " + std::to_string(expected) + " rational strings");
  }
  RatVec out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational_at(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

RatMatrix rational_matrix(const json& v, int rows, int cols, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    fail(where + " must be an array of " + std::to_string(rows) + " rows");
  }
  RatMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const RatVec row = rational_vector(v[static_cast<std::size_t>(i)], cols, where + " row " + std::to_string(i));
    for (int j = 0; j < cols; ++j) out(i, j) = row[static_cast<std::size_t>(j)];
  }
  return out;
}

Polynomial parse_polynomial(const json& terms, int n, const std::string& where) {
  if (!terms.is_array()) fail(where + " must be an array of terms");
  Polynomial p(n);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const json& term = terms[t];
    const std::string at = where + " term " + std::to_string(t);
    if (!term.is_object()) fail(at + " must be an object");
    const json& exps = require(term, "exps");
    if (!exps.is_array() || static_cast<int>(exps.size()) != n) {
      fail(at + ": 'exps' must list " + std::to_string(n) + " exponents");
    }
    std::vector<unsigned> e;
    e.reserve(exps.size());
    for (const json& x : exps) {
      if (!x.is_number_integer() || x.get<int>() < 0) fail(at + ": exponents must be nonnegative integers");
      e.push_back(static_cast<unsigned>(x.get<int>()));
    }
    p.add_term(e, rational_at(require(term, "coeff"), at + " coeff"));
  }
  return p;
}

json polynomial_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const Term& t : p.terms()) {
    json term;
    term["exps"] = t.exps;
    term["coeff"] = to_string(t.coeff);
    terms.push_back(std::move(term));
  }
  return terms;
}

std::pair<int, int> offset_to_line_col(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

SystemSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = offset_to_line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw SpecError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                        ": " + e.what(),
                    line, col);
  }

  SystemSpec spec;
  spec.schema = require_int(j, "schema");
  if (spec.schema != 1) fail("unsupported schema version " + std::to_string(spec.schema));
  spec.n = require_int(j, "n");
  spec.m_u = require_int(j, "m_u");
  spec.d = require_int(j, "d");
  if (spec.n < 1 || spec.m_u < 0 || spec.d < 0) fail("dimensions must satisfy n>=1, m_u>=0, d>=0");

  const bool has_drift = j.contains("drift");
  const bool has_biaffine = j.contains("biaffine");
  if (has_drift == has_biaffine) fail("exactly one of 'drift' and 'biaffine' must be given");

  if (has_biaffine) {
    const json& b = j.at("biaffine");
    const json& a_list = require(b, "A");
    if (!a_list.is_array() || static_cast<int>(a_list.size()) != spec.m_u + 1) {
      fail("'biaffine.A' must list m_u+1 matrices");
    }
    std::vector<RatMatrix> a;
    a.reserve(a_list.size());
    for (std::size_t i = 0; i < a_list.size(); ++i) {
      a.push_back(rational_matrix(a_list[i], spec.n, spec.n, "biaffine.A[" + std::to_string(i) + "]"));
    }
    RatMatrix g(spec.n, spec.d);
    if (spec.d > 0) g = rational_matrix(require(b, "g"), spec.n, spec.d, "biaffine.g");
    spec.biaffine = BiaffineSystem(std::move(a), std::move(g));
    spec.system = spec.biaffine->to_control_affine();
  } else {
    const json& drift = j.at("drift");
    if (!drift.is_array() || static_cast<int>(drift.size()) != spec.m_u + 1) {
      fail("'drift' must list m_u+1 vector fields");
    }
    std::vector<PolyVectorField> fields;
    fields.reserve(drift.size());
    for (std::size_t i = 0; i < drift.size(); ++i) {
      const json& fj = drift[i];
      const std::string where = "drift[" + std::to_string(i) + "]";
      if (!fj.is_array() || static_cast<int>(fj.size()) != spec.n) {
        fail(where + " must list n components");
      }
      std::vector<Polynomial> comps;
      comps.reserve(fj.size());
      for (std::size_t c = 0; c < fj.size(); ++c) {
        comps.push_back(parse_polynomial(fj[c], spec.n, where + " component " + std::to_string(c)));
      }
      fields.emplace_back(std::move(comps));
    }
    PolyMatrixMap g(spec.n, spec.d, spec.n);
    if (spec.d > 0) {
      const json& gj = require(j, "diffusion");
      if (!gj.is_array() || static_cast<int>(gj.size()) != spec.n) fail("'diffusion' must list n rows");
      for (int r = 0; r < spec.n; ++r) {
        const json& row = gj[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != spec.d) {
          fail("'diffusion' row " + std::to_string(r) + " must list d entries");
        }
        for (int c = 0; c < spec.d; ++c) {
          g.at(r, c) = parse_polynomial(row[static_cast<std::size_t>(c)], spec.n,
                                        "diffusion[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
      }
    }
    spec.system = ControlAffineSystem(std::move(fields), std::move(g));
  }

  if (j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array()) fail("'points' must be an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      spec.points.push_back(rational_vector(pts[i], spec.n, "points[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("state_points")) {
    const json& sp = j.at("state_points");
    if (!sp.is_array()) fail("'state_points' must be an array");
    for (std::size_t i = 0; i < sp.size(); ++i) {
      const std::string where = "state_points[" + std::to_string(i) + "]";
      const json& x = sp[i];
      RatVec m = rational_vector(require(x, "m"), spec.n, where + ".m");
      RatMatrix p = rational_matrix(require(x, "P"), spec.n, spec.n, where + ".P");
      if (!p.is_symmetric()) fail(where + ".P must be symmetric");
      spec.state_points.emplace_back(std::move(m), std::move(p));
    }
  }
  if (j.contains("control")) {
    const json& c = j.at("control");
    const double horizon = require(c, "horizon").get<double>();
    const double dt = require(c, "dt").get<double>();
    const json& vals = require(c, "values");
    if (!vals.is_array() || static_cast<int>(vals.size()) != spec.m_u) {
      fail("'control.values' must list m_u rows");
    }
    const int steps = static_cast<int>(std::llround(horizon / dt));
    Eigen::MatrixXd values(spec.m_u, steps);
    for (int r = 0; r < spec.m_u; ++r) {
      const json& row = vals[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != steps) {
        fail("'control.values' rows must have horizon/dt entries");
      }
      for (int k = 0; k < steps; ++k) values(r, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    try {
      spec.control = ControlSignal(horizon, dt, std::move(values));
    } catch (const std::invalid_argument& e) {
      fail(std::string("'control': ") + e.what());
    }
  }
  if (j.contains("sim")) {
    const json& s = j.at("sim");
    if (s.contains("horizon")) spec.sim.horizon = s.at("horizon").get<double>();
    if (s.contains("dt")) spec.sim.dt = s.at("dt").get<double>();
    if (s.contains("paths")) spec.sim.paths = s.at("paths").get<int>();
  }
  if (j.contains("m0")) spec.m0 = rational_vector(j.at("m0"), spec.n, "m0");
  if (j.contains("P0")) {
    RatMatrix p0 = rational_matrix(j.at("P0"), spec.n, spec.n, "P0");
    if (!p0.is_symmetric()) fail("P0 must be symmetric");
    spec.p0 = std::move(p0);
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();

  return spec;
}

SystemSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

json spec_to_json(const SystemSpec& spec) {
  json j;
  j["schema"] = spec.schema;
  j["n"] = spec.n;
  j["m_u"] = spec.m_u;
  j["d"] = spec.d;

  if (spec.biaffine) {
    json b;
    json a_list = json::array();
    for (const RatMatrix& a : spec.biaffine->A) {
      json rows = json::array();
      for (int i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < a.cols(); ++k) row.push_back(to_string(a(i, k)));
        rows.push_back(std::move(row));
      }
      a_list.push_back(std::move(rows));
    }
    b["A"] = std::move(a_list);
    if (spec.d > 0) {
      json rows = json::array();
      for (int i = 0; i < spec.biaffine->g.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < spec.biaffine->g.cols(); ++k) row.push_back(to_string(spec.biaffine->g(i, k)));
        rows.push_back(std::move(row));
      }
      b["g"] = std::move(rows);
    }
    j["biaffine"] = std::move(b);
  } else {
    json drift = json::array();
    for (const PolyVectorField& f : spec.system.fields) {
      json comps = json::array();
      for (const Polynomial& p : f.components()) comps.push_back(polynomial_to_json(p));
      drift.push_back(std::move(comps));
    }
    j["drift"] = std::move(drift);
    if (spec.d > 0) {
      json g = json::array();
      for (int r = 0; r < spec.n; ++r) {
        json row = json::array();
        for (int c = 0; c < spec.d; ++c) row.push_back(polynomial_to_json(spec.system.diffusion.at(r, c)));
        g.push_back(std::move(row));
      }
      j["diffusion"] = std::move(g);
    }
  }

  if (!spec.points.empty()) {
    json pts = json::array();
    for (const RatVec& p : spec.points) {
      json row = json::array();
      for (const Rat& q : p) row.push_back(to_string(q));
      pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
  }
  if (!spec.state_points.empty()) {
    json sp = json::array();
    for (const StatePoint& x : spec.state_points) {
      json xj;
      json m = json::array();
      for (const Rat& q : x.m) m.push_back(to_string(q));
      xj["m"] = std::move(m);
      json rows = json::array();
      for (int i = 0; i < x.P.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < x.P.cols(); ++k) row.push_back(to_string(x.P(i, k)));
        rows.push_back(std::move(row));
      }
      xj["P"] = std::move(rows);
      sp.push_back(std::move(xj));
    }
    j["state_points"] = std::move(sp);
  }
  if (spec.control) {
    json c;
    c["horizon"] = spec.control->horizon;
    c["dt"] = spec.control->dt;
    json rows = json::array();
    for (int r = 0; r < spec.control->values.rows(); ++r) {
      json row = json::array();
      for (int k = 0; k < spec.control->values.cols(); ++k) row.push_back(spec.control->values(r, k));
      rows.push_back(std::move(row));
    }
    c["values"] = std::move(rows);
    j["control"] = std::move(c);
  }
  j["sim"] = {{"horizon", spec.sim.horizon}, {"dt", spec.sim.dt}, {"paths", spec.sim.paths}};
  if (spec.m0) {
    json m = json::array();
    for (const Rat& q : *spec.m0) m.push_back(to_string(q));
    j["m0"] = std::move(m);
  }
  if (spec.p0) {
    json rows = json::array();
    for (int i = 0; i < spec.p0->rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < spec.p0->cols(); ++k) row.push_back(to_string((*spec.p0)(i, k)));
      rows.push_back(std::move(row));
    }
    j["P0"] = std::move(rows);
  }
  if (spec.seed) j["seed"] = *spec.seed;
  return j;
}

namespace {

void csv_header(std::ostream& os, int n, bool with_se) {
  os << "time";
  for (int i = 0; i < n; ++i) os << ",m" << i;
  for (int i = 0; i < n; ++i) os << ",P" << i << i;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) os << ",P" << i << k;
  if (with_se) {
    for (int i = 0; i < n; ++i) os << ",se_m" << i;
    for (int i = 0; i < n; ++i) os << ",se_P" << i << i;
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) os << ",se_P" << i << k;
  }
  os << "\n";
}

void csv_row_core(std::ostream& os, double t, const Eigen::VectorXd& m, const Eigen::MatrixXd& p) {
  os << t;
  for (int i = 0; i < m.size(); ++i) os << "," << m[i];
  for (int i = 0; i < p.rows(); ++i) os << "," << p(i, i);
  for (int i = 0; i < p.rows(); ++i)
    for (int k = i + 1; k < p.cols(); ++k) os << "," << p(i, k);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const SimulationResult& result) {
  const int n = result.mean.empty() ? 0 : static_cast<int>(result.mean.front().size());
  csv_header(os, n, false);
  os.precision(17);
  for (std::size_t k = 0; k < result.times.size(); ++k) {
    csv_row_core(os, result.times[k], result.mean[k], result.cov[k]);
    os << "\n";
  }
}

void write_moments_csv(std::ostream& os, const MomentEstimates& est) {
  const int n = est.mean.empty() ? 0 : static_cast<int>(est.mean.front().size());
  csv_header(os, n, true);
  os.precision(17);
  for (std::size_t k = 0; k < est.times.size(); ++k) {
    csv_row_core(os, est.times[k], est.mean[k], est.cov[k]);
    const Eigen::VectorXd& sm = est.se_mean[k];
    const Eigen::MatrixXd& sc = est.se_cov[k];
    for (int i = 0; i < n; ++i) os << "," << sm[i];
    for (int i = 0; i < n; ++i) os << "," << sc(i, i);
    for (int i = 0; i < n; ++i)
      for (int c = i + 1; c < n; ++c) os << "," << sc(i, c);
    os << "\n";
  }
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json mat_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

json simulation_summary_json(const SimulationResult& result) {
  json j;
  j["status"] = result.status == SimStatus::ok ? "ok" : "truncated-blow-up";
  if (result.truncated_at >= 0) j["truncated_at_step"] = result.truncated_at;
  if (!result.message.empty()) j["message"] = result.message;
  j["steps"] = result.times.empty() ? 0 : result.times.size() - 1;
  if (!result.times.empty()) {
    j["final_time"] = result.times.back();
    j["final_mean"] = vec_json(result.mean.back());
    j["final_cov"] = mat_json(result.cov.back());
    j["min_eigenvalue_overall"] = *std::min_element(result.min_eig.begin(), result.min_eig.end());
    j["positive_definite_throughout"] = result.positive_definite_throughout();
  }
  return j;
}

json moments_summary_json(const MomentEstimates& est) {
  json j;
  j["paths"] = est.paths;
  j["excluded_paths"] = est.excluded_paths;
  j["seed"] = est.seed;
  if (!est.times.empty()) {
    j["final_time"] = est.times.back();
    j["final_mean"] = vec_json(est.mean.back());
    j["final_cov"] = mat_json(est.cov.back());
    j["final_se_mean"] = vec_json(est.se_mean.back());
    j["final_se_cov"] = mat_json(est.se_cov.back());
  }
  return j;
}

}  // namespace statlin
