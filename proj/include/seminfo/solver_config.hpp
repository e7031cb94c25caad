#pragma once

#include <cstddef>
#include <cstdint>

namespace seminfo {

// Shared knobs for the iterative solvers. tol is an absolute duality-gap
// threshold (bits) for the alternating-minimization solvers and a relative
// objective-change threshold for the simplex ascent; max_iter caps a single
// solve; starts and seed drive the multi-start ascent; grid_step is the
// default resolution for the exhaustive oracles.
struct SolverConfig {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  std::size_t starts = 32;
  std::uint64_t seed = 0;
  double grid_step = 1e-2;
};

}  // namespace seminfo
