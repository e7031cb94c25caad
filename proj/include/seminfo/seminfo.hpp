#pragma once

// Semantic information toolkit: entropy, mutual information, channel
// capacity and rate-distortion trade-offs for finite sources whose symbols
// carry shared meanings, plus a meaning-preserving codec and a seeded
// channel simulator.

#include "seminfo/capacity.hpp"
#include "seminfo/codec.hpp"
#include "seminfo/distortion.hpp"
#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/model_io.hpp"
#include "seminfo/prior.hpp"
#include "seminfo/rate_distortion.hpp"
#include "seminfo/rng.hpp"
#include "seminfo/simulate.hpp"
#include "seminfo/solver_config.hpp"
#include "seminfo/synonymous.hpp"

namespace seminfo {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace seminfo
