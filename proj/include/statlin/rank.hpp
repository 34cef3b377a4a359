/**
 * @file rank.hpp
 * @brief Bracket saturation and rank-condition checks.
 *
 * Saturation generates brackets breadth-first. A candidate is retained only
 * when its exact evaluation at the probe points enlarges the span of the
 * family seen so far, which both prunes dependent elements (losslessly, by
 * bilinearity of the bracket) and bounds the basis size. Hitting the depth
 * cap yields "inconclusive", never "fail": the underlying conditions are
 * sufficient-only.
 */
#pragma once

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statlin/lift.hpp"
#include "statlin/rng.hpp"
#include "statlin/system.hpp"

namespace statlin {

enum class BasisMode { full_lie, zero_time_ideal, control_only };
enum class Verdict { pass, fail, inconclusive_at_cap };

[[nodiscard]] std::string to_string(BasisMode mode);
[[nodiscard]] std::string to_string(Verdict v);

struct SaturationOptions {
  int depth_cap = 0;               // 0 means "use 2N+1"
  int extra_probes = 3;            // random probe points added to the targets
  std::uint64_t probe_seed = 0x51a7u;
};

/// A retained element together with its bracket expression, e.g. "[f0,[f0,f1]]".
template <typename FieldT>
struct BasisElement {
  FieldT field;
  std::string expr;
  int depth = 1;
};

template <typename FieldT>
struct BracketBasis {
  BasisMode mode = BasisMode::full_lie;
  int depth_cap = 0;
  int depth_reached = 0;
  bool closed = false;  // saturation reached a fixpoint below the cap
  std::vector<BasisElement<FieldT>> elements;
};

using FlatBasis = BracketBasis<PolyVectorField>;
using LiftedBasis = BracketBasis<LiftedField>;

/**
 * @brief Saturate a flat family of polynomial fields under the Lie bracket.
 *
 * generators[0] is treated as the drift. In zero_time_ideal mode the drift is
 * never an element itself but may be bracketed against retained elements; in
 * control_only mode it is ignored entirely. Retention probes each field by
 * its 1-jet (f(p), Df(p)) at every probe point. `on_retain` (optional) is
 * called per retained element and may return true to stop early.
 */
[[nodiscard]] FlatBasis saturate(
    std::span<const PolyVectorField> generators, BasisMode mode, const SaturationOptions& opts,
    std::span<const RatVec> probe_points,
    const std::function<bool(const BasisElement<PolyVectorField>&)>& on_retain = nullptr);

/// Lifted-family analogue; probes by vectorized evaluation at probe states.
[[nodiscard]] LiftedBasis saturate_lifted(
    std::span<const LiftedField> generators, BasisMode mode, const SaturationOptions& opts,
    std::span<const StatePoint> probe_states,
    const std::function<bool(const BasisElement<LiftedField>&)>& on_retain = nullptr);

struct PointVerdict {
  nlohmann::json point;  // serialized evaluation point
  int rank = 0;
  Verdict verdict = Verdict::fail;
};

struct RankReport {
  std::string condition;
  int target = 0;
  int depth_cap = 0;
  int depth_used = 0;
  bool closed = false;
  double tol = 0.0;
  std::vector<PointVerdict> points;
  std::optional<PointVerdict> generic;
  std::vector<std::string> basis;

  [[nodiscard]] Verdict overall() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct RankCheckOptions {
  int depth_cap = 0;        // 0 -> default 2N+1
  double tol = 1e-8;
  int extra_probes = 3;
  std::uint64_t probe_seed = 0x51a7u;
  bool generic = false;     // add a symbolic generic-rank pseudo-point
};

/// Accessibility condition on the full Lie algebra of the drift family.
[[nodiscard]] RankReport check_condition_1(const ControlAffineSystem& sys,
                                           std::span<const RatVec> points,
                                           const RankCheckOptions& opts = {});

/// Fixed-time variant: generators restricted to the zero-time ideal.
[[nodiscard]] RankReport check_condition_2(const ControlAffineSystem& sys,
                                           std::span<const RatVec> points,
                                           const RankCheckOptions& opts = {});

/// Controllability condition using the control fields only.
[[nodiscard]] RankReport check_hormander_lifted(const ControlAffineSystem& sys,
                                                std::span<const RatVec> points,
                                                const RankCheckOptions& opts = {});

/// Direct rank of the lifted family (diffusion included) at given states.
[[nodiscard]] RankReport check_rank_at_state(const ControlAffineSystem& sys,
                                             std::span<const StatePoint> states,
                                             BasisMode mode = BasisMode::zero_time_ideal,
                                             const RankCheckOptions& opts = {});

/// Condition vector (f(m), upper(Df + Dfᵀ)(m)) ∈ ℚᴺ used by the flat checks.
[[nodiscard]] RatVec condition_vector(const PolyVectorField& f, std::span<const Rat> m);

/// Random rational probe points/states for saturation.
[[nodiscard]] std::vector<RatVec> random_points(int n, int count, std::uint64_t seed);
[[nodiscard]] std::vector<StatePoint> random_states(int n, int count, std::uint64_t seed);

/// Random positive definite rational matrix P = L Lᵀ + eps·I.
[[nodiscard]] RatMatrix random_pd_matrix(int n, Rng& rng, const Rat& eps = Rat(1, 4));

}  // namespace statlin
