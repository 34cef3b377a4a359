/**
 * @file system.hpp
 * @brief Control-affine stochastic system description.
 */
#pragma once

#include <vector>

#include "statlin/vector_field.hpp"

namespace statlin {

/**
 * @brief Drift family f(x,u) = f0(x) + Σ u_i f_i(x) plus diffusion g(x) ∈ ℝ^{n×d}.
 *
 * fields[0] is the uncontrolled drift; fields[1..m_u] are the control fields.
 * d may be zero (no diffusion).
 */
struct ControlAffineSystem {
  int n = 0;
  int m_u = 0;
  int d = 0;
  std::vector<PolyVectorField> fields;  // size m_u + 1
  PolyMatrixMap diffusion;              // n x d in n variables

  ControlAffineSystem() = default;
  ControlAffineSystem(std::vector<PolyVectorField> drift_fields, PolyMatrixMap g);

  [[nodiscard]] const PolyVectorField& drift() const { return fields.front(); }
  [[nodiscard]] const PolyVectorField& control_field(int i) const {
    return fields[static_cast<std::size_t>(i) + 1];
  }

  /// Lifted state dimension N = n + n(n+1)/2.
  [[nodiscard]] int lifted_dim() const { return n + n * (n + 1) / 2; }
};

}  // namespace statlin
