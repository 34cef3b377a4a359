#include "statlin/biaffine.hpp"

#include <algorithm>

namespace statlin {

BiaffineSystem::BiaffineSystem(std::vector<RatMatrix> a_matrices, RatMatrix g_in)
    : A(std::move(a_matrices)), g(std::move(g_in)) {
  if (A.empty()) throw std::invalid_argument("biaffine system needs at least the drift matrix");
  n = A.front().rows();
  m_u = static_cast<int>(A.size()) - 1;
  for (const RatMatrix& a : A) {
    if (a.rows() != n || a.cols() != n) throw std::invalid_argument("drift matrices must be n×n");
  }
  if (g.rows() == 0 && g.cols() == 0) g = RatMatrix(n, 0);
  if (g.rows() != n) throw std::invalid_argument("diffusion must have n rows");
  d = g.cols();
}

ControlAffineSystem BiaffineSystem::to_control_affine() const {
  std::vector<PolyVectorField> fields;
  fields.reserve(A.size());
  for (const RatMatrix& a : A) fields.push_back(PolyVectorField::linear(a));
  return ControlAffineSystem(std::move(fields), PolyMatrixMap::constant(g, n));
}

namespace {

RatVec flatten(const RatMatrix& m) {
  RatVec v;
  v.reserve(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

}  // namespace

MatrixLieResult matrix_lie_dim(std::span<const RatMatrix> generators) {
  if (generators.empty()) throw std::invalid_argument("matrix Lie algebra needs at least one generator");
  MatrixLieResult result;
  RationalRowReducer span_tracker;

  std::vector<RatMatrix> basis;
  for (const RatMatrix& a : generators) {
    if (span_tracker.add(flatten(a))) basis.push_back(a);
  }

  // Commutator closure: new pairs only, until a sweep adds nothing.
  std::size_t processed = 0;
  while (processed < basis.size()) {
    const std::size_t upto = basis.size();
    for (std::size_t i = processed; i < upto; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        RatMatrix c = commutator(basis[i], basis[j]);
        if (c.is_zero()) continue;
        if (span_tracker.add(flatten(c))) basis.push_back(std::move(c));
      }
    }
    processed = upto;
  }

  result.dim = span_tracker.rank();
  result.basis = std::move(basis);
  return result;
}

RatMatrix b0j(const RatMatrix& a_j, const RatMatrix& g) {
  if (a_j.rows() != g.rows()) throw std::invalid_argument("b0j dimension mismatch");
  const RatMatrix gram = g * g.transpose();
  return a_j * gram + gram * a_j.transpose();
}

int psi_rank(std::span<const Rat> m, const RatMatrix& p) {
  const int n = p.rows();
  if (static_cast<int>(m.size()) != n) throw std::invalid_argument("psi_rank dimension mismatch");
  if (!p.is_positive_definite()) throw std::domain_error("psi_rank requires positive definite P");

  RationalRowReducer red;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      RatMatrix e(n, n);
      e(r, c) = 1;
      TangentValue image;
      image.v = mat_vec(e, m);
      image.Q = e * p + p * e.transpose();
      red.add(vectorize(image));
    }
  }
  return red.rank();
}

Rat alpha_witness(std::span<const Rat> m, const RatMatrix& p, const RatMatrix& a0, const RatMatrix& ai,
                  const RatMatrix& g) {
  if (!p.is_positive_definite()) throw std::domain_error("alpha_witness requires positive definite P");
  const auto p_inv_opt = p.inverse();
  if (!p_inv_opt) throw std::domain_error("covariance not invertible");
  const RatMatrix& p_inv = *p_inv_opt;

  // Bracket of the lifted drift with the i-th lifted control, evaluated at (m,P).
  const auto [a_bracket, b_part] = biaffine_bracket(a0, g * g.transpose(), ai, RatMatrix(p.rows(), p.rows()));
  const RatVec v = mat_vec(a_bracket, m);
  const RatMatrix q = a_bracket * p + p * a_bracket.transpose() + b_part;

  const RatVec w = mat_vec(p_inv, m);  // P⁻¹ m
  const RatVec qw = mat_vec(q, w);
  Rat acc(0);
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * (v[i] - qw[i] / 2);
  return acc;
}

std::pair<RatMatrix, RatMatrix> biaffine_bracket(const RatMatrix& a1, const RatMatrix& b1,
                                                 const RatMatrix& a2, const RatMatrix& b2) {
  const RatMatrix a = a2 * a1 - a1 * a2;
  const RatMatrix b = a2 * b1 - a1 * b2 + b1 * a2.transpose() - b2 * a1.transpose();
  return {a, b};
}

BiaffineSufficiencyReport check_biaffine_sufficiency(const BiaffineSystem& sys, const BiaffineSufficiencyOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("sample count must be positive");

  BiaffineSufficiencyReport report;
  report.lie_dim_required = sys.n * sys.n;

  if (sys.m_u >= 1) {
    const MatrixLieResult lie = matrix_lie_dim(std::span<const RatMatrix>(sys.A.data() + 1, sys.A.size() - 1));
    report.lie_dim = lie.dim;
    report.lie_dim_holds = lie.dim == report.lie_dim_required;
  }

  for (int i = 1; i <= sys.m_u; ++i) {
    if (!b0j(sys.A[static_cast<std::size_t>(i)], sys.g).is_zero()) {
      report.b0i_nonzero = true;
      report.b0i_witness_index = i;
      break;
    }
  }
  report.hypotheses_hold = report.lie_dim_holds && report.b0i_nonzero;
  if (!report.hypotheses_hold) return report;

  // Certificate state: random (m,P) with nonzero quadratic witness, bounded retries.
  Rng rng(opts.seed);
  const RatMatrix b = b0j(sys.A[static_cast<std::size_t>(report.b0i_witness_index)], sys.g);
  for (int attempt = 0; attempt < opts.witness_retries; ++attempt) {
    RatVec m;
    for (int i = 0; i < sys.n; ++i) m.push_back(rng.rational(8, 8));
    RatMatrix p = random_pd_matrix(sys.n, rng);
    const RatMatrix p_inv = *p.inverse();
    const RatVec w = mat_vec(p_inv, m);
    const RatVec bw = mat_vec(b, w);
    Rat quad(0);
    for (std::size_t i = 0; i < w.size(); ++i) quad += w[i] * bw[i];
    if (sgn(quad) != 0) {
      report.witness_state = StatePoint(m, p);
      report.witness_alpha = -quad / 2;
      break;
    }
  }

  // Empirical pass fraction of the lifted zero-time family at random states.
  const std::vector<StatePoint> states = random_states(sys.n, opts.samples, opts.seed ^ 0xabcdef12345ULL);
  RankCheckOptions rank_opts;
  rank_opts.tol = opts.tol;
  rank_opts.depth_cap = opts.depth_cap;
  rank_opts.probe_seed = opts.seed ^ 0x77u;
  RankReport ranks = check_rank_at_state(sys.to_control_affine(), states, BasisMode::zero_time_ideal, rank_opts);

  report.samples = opts.samples;
  report.passes = static_cast<int>(
      std::count_if(ranks.points.begin(), ranks.points.end(),
                    [](const PointVerdict& pv) { return pv.verdict == Verdict::pass; }));
  report.pass_fraction = static_cast<double>(report.passes) / static_cast<double>(opts.samples);
  report.sampled_ranks = std::move(ranks);
  return report;
}

nlohmann::json BiaffineSufficiencyReport::to_json() const {
  nlohmann::json j;
  j["lie_dim"] = {{"dim", lie_dim}, {"required", lie_dim_required}, {"holds", lie_dim_holds}};
  j["b0i"] = {{"nonzero", b0i_nonzero}, {"witness_index", b0i_witness_index}};
  j["conclusion"] = hypotheses_hold ? "fixed-time-accessible-generic" : "no-conclusion";
  if (hypotheses_hold) {
    j["samples"] = {{"total", samples}, {"passes", passes}, {"fraction", pass_fraction}};
    if (witness_alpha) j["witness_alpha"] = to_string(*witness_alpha);
    if (witness_state) {
      nlohmann::json w;
      nlohmann::json mj = nlohmann::json::array();
      for (const Rat& q : witness_state->m) mj.push_back(to_string(q));
      w["m"] = std::move(mj);
      nlohmann::json rows = nlohmann::json::array();
      for (int i = 0; i < witness_state->P.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < witness_state->P.cols(); ++k) row.push_back(to_string(witness_state->P(i, k)));
        rows.push_back(std::move(row));
      }
      w["P"] = std::move(rows);
      j["witness_state"] = std::move(w);
    }
  }
  return j;
}

}  // namespace statlin
