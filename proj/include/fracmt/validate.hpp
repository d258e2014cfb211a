#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fracmt/grid.hpp"

namespace fracmt {

// Random smooth function supported in [lo, hi]: a sum of 1-3 bumps
// a (1 - t^2)^3 (C^2) with random centers, widths and amplitudes in (0, 1].
GridFunction random_smooth_bumps(std::mt19937_64& rng, GridPtr grid, double lo, double hi, bool allow_negative = false);
// Random nonnegative piecewise-constant-plus-noise data on the interior of the grid interval.
GridFunction random_nonnegative(std::mt19937_64& rng, GridPtr grid);

struct ValidationCheck {
  std::string name;
  double value;
  double bound;
  bool passed;
  std::string relation;  // "<=", ">=", "=="
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
  // Deterministic text: one line per check, numbers with 17 significant digits.
  std::string text() const;
};

// The full deterministic invariant suite (seeded).
ValidationReport run_validation(std::uint64_t seed);

}  // namespace fracmt
