#pragma once

#include <cstdint>

#include "trace.hpp"

namespace geodyn::tools {

enum class RadiusDist { Uniform, PowerLaw };

struct GenParams {
  TraceHeader header;
  std::uint64_t seed = 1;
  std::size_t n = 100;        // inserts to emit when steps == 0
  std::size_t steps = 0;      // if > 0, emit exactly this many records
  std::size_t max_live = 0;   // if > 0, delete whenever this many are live
  double churn = 0;           // probability that a record is a deletion
  double range = 100;         // positions (disk centers, box corners) in [0, range)^dim
  double rmin = 1;            // smallest radius, or smallest box side
  double spread = 2;          // largest / smallest radius or side
  RadiusDist dist = RadiusDist::Uniform;
  double alpha = 2;           // power-law density exponent, r^-alpha
  double phi = 2;             // box kind: side lengths of one box within a factor phi
};

// Deterministic in params: the same params give the same trace on every
// platform (only the mt19937_64 bit stream is used).
Trace gen_instance(const GenParams& p);

}  // namespace geodyn::tools
