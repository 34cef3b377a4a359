/**
 * @file spec_io.hpp
 * @brief System-spec JSON format (schema 1), report serialization, CSV output.
 *
 * All structural coefficients are rational strings ("1/2", "-3", "0.25") so
 * the exact pipeline never sees floating point. Simulation-only parameters
 * (horizons, steps, path counts) are plain JSON numbers.
 */
#pragma once

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

#include "statlin/biaffine.hpp"
#include "statlin/simulate.hpp"
#include "statlin/system.hpp"

namespace statlin {

/// Parse failure with 1-based line/column positions when available.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string message, int line = -1, int column = -1)
      : std::runtime_error(std::move(message)), line_(line), column_(column) {}

  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct SimParams {
  double horizon = 1.0;
  double dt = 1e-3;
  int paths = 10000;
};

struct SystemSpec {
  int schema = 1;
  int n = 0;
  int m_u = 0;
  int d = 0;

  ControlAffineSystem system;
  std::optional<BiaffineSystem> biaffine;  // present iff the spec used matrix form

  std::vector<RatVec> points;
  std::vector<StatePoint> state_points;
  std::optional<ControlSignal> control;
  SimParams sim;
  std::optional<RatVec> m0;
  std::optional<RatMatrix> p0;
  std::optional<std::uint64_t> seed;
};

/// Parse a spec from JSON text; throws SpecError with position info on bad input.
[[nodiscard]] SystemSpec parse_spec(const std::string& text);
[[nodiscard]] SystemSpec load_spec_file(const std::string& path);

/// Canonical serialization; parse ∘ serialize is the identity on parsed specs.
[[nodiscard]] nlohmann::json spec_to_json(const SystemSpec& spec);

/// CSV: time, mean components, covariance upper triangle (diagonal first).
void write_trajectory_csv(std::ostream& os, const SimulationResult& result);

/// CSV: time, sample mean, sample covariance upper triangle, standard errors.
void write_moments_csv(std::ostream& os, const MomentEstimates& est);

[[nodiscard]] nlohmann::json simulation_summary_json(const SimulationResult& result);
[[nodiscard]] nlohmann::json moments_summary_json(const MomentEstimates& est);

}  // namespace statlin
