#include "statlin/rank.hpp"

#include <algorithm>

namespace statlin {

std::string to_string(BasisMode mode) {
  switch (mode) {
    case BasisMode::full_lie: return "full_lie";
    case BasisMode::zero_time_ideal: return "zero_time_ideal";
    case BasisMode::control_only: return "control_only";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive_at_cap: return "inconclusive-at-cap";
  }
  return "?";
}

namespace {

/// Policy for flat families: probe by the 1-jet (f(p), Df(p)).
struct FlatPolicy {
  using Field = PolyVectorField;
  using Probe = RatVec;

  static Field bracket(const Field& a, const Field& b) { return lie_bracket(a, b); }
  static bool is_zero(const Field& f) { return f.is_zero(); }

  static RatVec probe_eval(const Field& f, const Probe& p) {
    RatVec jet = eval_field(f, p);
    const RatMatrix df = jacobian(f).eval(p);
    jet.reserve(jet.size() + static_cast<std::size_t>(df.rows()) * df.cols());
    for (int i = 0; i < df.rows(); ++i)
      for (int j = 0; j < df.cols(); ++j) jet.push_back(df(i, j));
    return jet;
  }
};

/// Policy for lifted families: probe by the vectorized tangent value.
struct LiftedPolicy {
  using Field = LiftedField;
  using Probe = StatePoint;

  static Field bracket(const Field& a, const Field& b) { return lifted_bracket(a, b); }
  static bool is_zero(const Field& f) { return f.is_zero(); }

  static RatVec probe_eval(const Field& f, const Probe& x) { return vectorize(eval_lifted(f, x)); }
};

template <class Policy>
BracketBasis<typename Policy::Field> saturate_impl(
    std::span<const typename Policy::Field> generators, BasisMode mode, const SaturationOptions& opts,
    std::span<const typename Policy::Probe> probes,
    const std::function<bool(const BasisElement<typename Policy::Field>&)>& on_retain) {
  using Field = typename Policy::Field;

  if (generators.empty()) throw std::invalid_argument("saturation needs at least one generator");
  if (probes.empty()) throw std::invalid_argument("saturation needs at least one probe point");

  BracketBasis<Field> basis;
  basis.mode = mode;
  basis.depth_cap = std::max(opts.depth_cap, 1);

  RationalRowReducer span_tracker;
  auto stacked_eval = [&](const Field& f) {
    RatVec stacked;
    for (const auto& p : probes) {
      RatVec part = Policy::probe_eval(f, p);
      stacked.insert(stacked.end(), part.begin(), part.end());
    }
    return stacked;
  };

  bool stop_requested = false;
  auto try_retain = [&](Field field, std::string expr, int depth) {
    if (Policy::is_zero(field)) return;
    if (!span_tracker.add(stacked_eval(field))) return;
    basis.elements.push_back({std::move(field), std::move(expr), depth});
    basis.depth_reached = std::max(basis.depth_reached, depth);
    if (on_retain && on_retain(basis.elements.back())) stop_requested = true;
  };

  // Seed elements. The drift generator participates only in full_lie mode.
  const bool drift_is_seed = mode == BasisMode::full_lie;
  const std::size_t first_seed = drift_is_seed ? 0 : 1;
  for (std::size_t i = first_seed; i < generators.size(); ++i) {
    try_retain(generators[i], "f" + std::to_string(i), 1);
    if (stop_requested) return basis;
  }

  const Field* drift = (mode == BasisMode::zero_time_ideal) ? &generators[0] : nullptr;

  for (int depth = 2; depth <= basis.depth_cap; ++depth) {
    const std::size_t before = basis.elements.size();

    // Brackets of the drift against retained elements (ideal mode only).
    if (drift) {
      for (std::size_t i = 0; i < before && !stop_requested; ++i) {
        if (basis.elements[i].depth + 1 != depth) continue;
        try_retain(Policy::bracket(*drift, basis.elements[i].field),
                   "[f0," + basis.elements[i].expr + "]", depth);
      }
    }

    // Brackets between retained elements; one orientation suffices by antisymmetry.
    for (std::size_t i = 0; i < before && !stop_requested; ++i) {
      for (std::size_t j = i + 1; j < before && !stop_requested; ++j) {
        if (basis.elements[i].depth + basis.elements[j].depth != depth) continue;
        try_retain(Policy::bracket(basis.elements[i].field, basis.elements[j].field),
                   "[" + basis.elements[i].expr + "," + basis.elements[j].expr + "]", depth);
      }
    }

    if (stop_requested) return basis;
    if (basis.elements.size() == before) {
      // No candidate at this depth enlarged the span: brackets of spanned
      // fields stay in the span, so deeper levels cannot contribute either.
      basis.closed = true;
      return basis;
    }
  }
  return basis;
}

}  // namespace

FlatBasis saturate(std::span<const PolyVectorField> generators, BasisMode mode, const SaturationOptions& opts,
                   std::span<const RatVec> probe_points,
                   const std::function<bool(const BasisElement<PolyVectorField>&)>& on_retain) {
  return saturate_impl<FlatPolicy>(generators, mode, opts, probe_points, on_retain);
}

LiftedBasis saturate_lifted(std::span<const LiftedField> generators, BasisMode mode,
                            const SaturationOptions& opts, std::span<const StatePoint> probe_states,
                            const std::function<bool(const BasisElement<LiftedField>&)>& on_retain) {
  return saturate_impl<LiftedPolicy>(generators, mode, opts, probe_states, on_retain);
}

RatVec condition_vector(const PolyVectorField& f, std::span<const Rat> m) {
  const int n = f.dim();
  RatVec out = eval_field(f, m);
  const RatMatrix df = jacobian(f).eval(m);
  out.reserve(static_cast<std::size_t>(lifted_dim(n)));
  for (int i = 0; i < n; ++i) out.push_back(df(i, i) + df(i, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(df(i, j) + df(j, i));
  return out;
}

std::vector<RatVec> random_points(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RatVec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    RatVec p;
    p.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p.push_back(rng.rational(8, 8));
    out.push_back(std::move(p));
  }
  return out;
}

RatMatrix random_pd_matrix(int n, Rng& rng, const Rat& eps) {
  RatMatrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) l(i, j) = rng.rational(4, 8);
    // Diagonal bounded away from zero keeps the factor nonsingular.
    Rat diag = rng.rational(4, 8);
    l(i, i) = Rat(1) + diag / 4;
  }
  RatMatrix p = l * l.transpose();
  for (int i = 0; i < n; ++i) p(i, i) += eps;
  return p;
}

std::vector<StatePoint> random_states(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<StatePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    RatVec m;
    m.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) m.push_back(rng.rational(8, 8));
    out.emplace_back(std::move(m), random_pd_matrix(n, rng));
  }
  return out;
}

namespace {

nlohmann::json point_to_json(const RatVec& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const Rat& q : m) j.push_back(to_string(q));
  return j;
}

nlohmann::json state_to_json(const StatePoint& x) {
  nlohmann::json j;
  j["m"] = point_to_json(x.m);
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < x.P.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < x.P.cols(); ++k) row.push_back(to_string(x.P(i, k)));
    rows.push_back(std::move(row));
  }
  j["P"] = std::move(rows);
  return j;
}

int default_depth_cap(int requested, int target) { return requested > 0 ? requested : 2 * target + 1; }

Verdict classify(int rank, int target, bool closed) {
  if (rank >= target) return Verdict::pass;
  return closed ? Verdict::fail : Verdict::inconclusive_at_cap;
}

/// Shared driver for the three flat condition checks.
RankReport flat_check(const ControlAffineSystem& sys, std::span<const RatVec> points, BasisMode mode,
                      const std::string& condition_id, const RankCheckOptions& opts) {
  const int big_n = sys.lifted_dim();
  RankReport report;
  report.condition = condition_id;
  report.target = big_n;
  report.tol = opts.tol;
  report.depth_cap = default_depth_cap(opts.depth_cap, big_n);

  for (const RatVec& p : points) {
    if (static_cast<int>(p.size()) != sys.n) throw std::invalid_argument("evaluation point dimension mismatch");
  }

  // Probes: the evaluation points themselves plus random rational points.
  std::vector<RatVec> probes(points.begin(), points.end());
  std::optional<RatVec> generic_point;
  if (opts.generic) {
    Rng grng(opts.probe_seed ^ 0x9e3779b97f4a7c15ULL);
    RatVec gp;
    for (int i = 0; i < sys.n; ++i) gp.push_back(grng.rational(1 << 20, 1 << 20));
    generic_point = gp;
    probes.push_back(std::move(gp));
  }
  for (RatVec& extra : random_points(sys.n, opts.extra_probes, opts.probe_seed)) {
    probes.push_back(std::move(extra));
  }

  std::vector<RationalRowReducer> reducers(points.size());
  RationalRowReducer generic_reducer;
  auto all_hit_target = [&]() {
    for (const auto& r : reducers) {
      if (r.rank() < big_n) return false;
    }
    return !(generic_point && generic_reducer.rank() < big_n);
  };

  SaturationOptions sat;
  sat.depth_cap = report.depth_cap;
  sat.extra_probes = opts.extra_probes;
  sat.probe_seed = opts.probe_seed;

  auto on_retain = [&](const BasisElement<PolyVectorField>& el) {
    for (std::size_t k = 0; k < points.size(); ++k) reducers[k].add(condition_vector(el.field, points[k]));
    if (generic_point) generic_reducer.add(condition_vector(el.field, *generic_point));
    return all_hit_target();
  };

  const FlatBasis basis = saturate(sys.fields, mode, sat, probes, on_retain);
  report.depth_used = basis.depth_reached;
  report.closed = basis.closed;
  for (const auto& el : basis.elements) report.basis.push_back(el.expr);

  for (std::size_t k = 0; k < points.size(); ++k) {
    PointVerdict pv;
    pv.point = point_to_json(points[k]);
    pv.rank = reducers[k].rank();
    pv.verdict = classify(pv.rank, big_n, basis.closed);
    report.points.push_back(std::move(pv));
  }
  if (generic_point) {
    PointVerdict pv;
    pv.point = point_to_json(*generic_point);
    pv.rank = generic_reducer.rank();
    pv.verdict = classify(pv.rank, big_n, basis.closed);
    report.generic = std::move(pv);
  }
  return report;
}

}  // namespace

RankReport check_condition_1(const ControlAffineSystem& sys, std::span<const RatVec> points,
                             const RankCheckOptions& opts) {
  return flat_check(sys, points, BasisMode::full_lie, "cond1", opts);
}

RankReport check_condition_2(const ControlAffineSystem& sys, std::span<const RatVec> points,
                             const RankCheckOptions& opts) {
  return flat_check(sys, points, BasisMode::zero_time_ideal, "cond2", opts);
}

RankReport check_hormander_lifted(const ControlAffineSystem& sys, std::span<const RatVec> points,
                                  const RankCheckOptions& opts) {
  if (sys.m_u < 1) {
    // No control fields: the family is empty, every point fails outright.
    RankReport report;
    report.condition = "hormander";
    report.target = sys.lifted_dim();
    report.tol = opts.tol;
    report.depth_cap = default_depth_cap(opts.depth_cap, report.target);
    report.closed = true;
    for (const RatVec& p : points) {
      PointVerdict pv;
      pv.point = point_to_json(p);
      pv.rank = 0;
      pv.verdict = Verdict::fail;
      report.points.push_back(std::move(pv));
    }
    return report;
  }
  return flat_check(sys, points, BasisMode::control_only, "hormander", opts);
}

RankReport check_rank_at_state(const ControlAffineSystem& sys, std::span<const StatePoint> states,
                               BasisMode mode, const RankCheckOptions& opts) {
  const int big_n = sys.lifted_dim();
  RankReport report;
  report.condition = "lifted_at_state";
  report.target = big_n;
  report.tol = opts.tol;
  report.depth_cap = default_depth_cap(opts.depth_cap, big_n);

  for (const StatePoint& x : states) {
    if (x.dim() != sys.n) throw std::invalid_argument("state dimension mismatch");
    if (!x.is_positive_definite()) throw std::domain_error("state covariance must be positive definite");
  }

  const std::vector<LiftedField> generators = lift_system(sys);

  std::vector<StatePoint> probes(states.begin(), states.end());
  for (StatePoint& extra : random_states(sys.n, opts.extra_probes, opts.probe_seed)) {
    probes.push_back(std::move(extra));
  }

  std::vector<RationalRowReducer> reducers(states.size());
  auto all_hit_target = [&]() {
    return std::all_of(reducers.begin(), reducers.end(),
                       [&](const RationalRowReducer& r) { return r.rank() >= big_n; });
  };

  SaturationOptions sat;
  sat.depth_cap = report.depth_cap;
  sat.extra_probes = opts.extra_probes;
  sat.probe_seed = opts.probe_seed;

  auto on_retain = [&](const BasisElement<LiftedField>& el) {
    for (std::size_t k = 0; k < states.size(); ++k) {
      reducers[k].add(vectorize(eval_lifted(el.field, states[k])));
    }
    return all_hit_target();
  };

  const LiftedBasis basis = saturate_lifted(generators, mode, sat, probes, on_retain);
  report.depth_used = basis.depth_reached;
  report.closed = basis.closed;
  for (const auto& el : basis.elements) report.basis.push_back(el.expr);

  for (std::size_t k = 0; k < states.size(); ++k) {
    PointVerdict pv;
    pv.point = state_to_json(states[k]);
    pv.rank = reducers[k].rank();
    pv.verdict = classify(pv.rank, big_n, basis.closed);
    report.points.push_back(std::move(pv));
  }
  return report;
}

Verdict RankReport::overall() const {
  bool inconclusive = false;
  for (const PointVerdict& pv : points) {
    if (pv.verdict == Verdict::fail) return Verdict::fail;
    if (pv.verdict == Verdict::inconclusive_at_cap) inconclusive = true;
  }
  return inconclusive ? Verdict::inconclusive_at_cap : Verdict::pass;
}

nlohmann::json RankReport::to_json() const {
  nlohmann::json j;
  j["condition"] = condition;
  j["target"] = target;
  j["depth_cap"] = depth_cap;
  j["depth_used"] = depth_used;
  j["closed"] = closed;
  j["tolerance"] = tol;
  j["basis"] = basis;
  nlohmann::json pts = nlohmann::json::array();
  for (const PointVerdict& pv : points) {
    nlohmann::json p;
    p["point"] = pv.point;
    p["rank"] = pv.rank;
    p["verdict"] = to_string(pv.verdict);
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  if (generic) {
    nlohmann::json p;
    p["point"] = generic->point;
    p["rank"] = generic->rank;
    p["verdict"] = to_string(generic->verdict);
    j["generic"] = std::move(p);
  }
  j["overall"] = to_string(overall());
  return j;
}

}  // namespace statlin
