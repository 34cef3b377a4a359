/**
 * @file biaffine.hpp
 * @brief Closed forms for systems with linear drift fields and constant diffusion.
 */
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "statlin/rank.hpp"
#include "statlin/ratmat.hpp"
#include "statlin/system.hpp"

namespace statlin {

/// Drift fields f_i(x) = A_i x (i = 0..m_u) with constant diffusion g ∈ ℝ^{n×d}.
struct BiaffineSystem {
  int n = 0;
  int m_u = 0;
  int d = 0;
  std::vector<RatMatrix> A;  // size m_u + 1, A[0] is the drift matrix
  RatMatrix g;

  BiaffineSystem() = default;
  BiaffineSystem(std::vector<RatMatrix> a_matrices, RatMatrix g_in);

  /// Polynomial representation (linear fields, constant diffusion).
  [[nodiscard]] ControlAffineSystem to_control_affine() const;
};

struct MatrixLieResult {
  int dim = 0;
  std::vector<RatMatrix> basis;
};

/// Dimension and basis of the matrix Lie algebra generated under [A,B] = AB − BA.
[[nodiscard]] MatrixLieResult matrix_lie_dim(std::span<const RatMatrix> generators);

/// The symmetric matrix A_j g gᵀ + g gᵀ A_jᵀ.
[[nodiscard]] RatMatrix b0j(const RatMatrix& a_j, const RatMatrix& g);

/// Rank of A ↦ (A m, A P + P Aᵀ) over all of M_n(ℝ); exact, P must be positive definite.
[[nodiscard]] int psi_rank(std::span<const Rat> m, const RatMatrix& p);

/**
 * @brief Scalar witness α(v,Q) = mᵀP⁻¹(v − Q P⁻¹ m / 2) evaluated on the
 *        bracket of the lifted drift with the i-th lifted control at (m,P).
 *
 * A nonzero value certifies that the bracket leaves the span of the
 * control-generated family at that state.
 */
[[nodiscard]] Rat alpha_witness(std::span<const Rat> m, const RatMatrix& p, const RatMatrix& a0,
                                const RatMatrix& ai, const RatMatrix& g);

struct BiaffineSufficiencyReport {
  bool lie_dim_holds = false;
  int lie_dim = 0;
  int lie_dim_required = 0;
  bool b0i_nonzero = false;
  int b0i_witness_index = -1;  // 1-based control index with nonzero B_{0i}
  bool hypotheses_hold = false;

  // Populated only when both hypotheses hold.
  int samples = 0;
  int passes = 0;
  double pass_fraction = 0.0;
  std::optional<RankReport> sampled_ranks;

  // Certificate state with nonzero witness value, when found.
  std::optional<StatePoint> witness_state;
  std::optional<Rat> witness_alpha;

  [[nodiscard]] nlohmann::json to_json() const;
};

struct BiaffineSufficiencyOptions {
  int samples = 100;
  std::uint64_t seed = 0x213u;
  double tol = 1e-8;
  int depth_cap = 0;
  int witness_retries = 50;
};

/**
 * @brief Sufficient accessibility test for biaffine systems.
 *
 * Checks (i) the control matrices generate a full matrix Lie algebra and
 * (ii) some B_{0i} is nonzero; when both hold, samples random states and
 * reports the fraction at which the lifted zero-time family has full rank.
 */
[[nodiscard]] BiaffineSufficiencyReport check_biaffine_sufficiency(const BiaffineSystem& sys, const BiaffineSufficiencyOptions& opts = {});

/**
 * @brief Closed-form bracket of two constant-B lifted fields with linear f.
 *
 * Matches lifted_bracket on the corresponding polynomial representations:
 * the flat part is (A2 A1 − A1 A2) x and the B part is
 * A2 B1 − A1 B2 + B1 A2ᵀ − B2 A1ᵀ.
 */
[[nodiscard]] std::pair<RatMatrix, RatMatrix> biaffine_bracket(const RatMatrix& a1, const RatMatrix& b1,
                                                               const RatMatrix& a2, const RatMatrix& b2);

}  // namespace statlin
