#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trace.hpp"

namespace geodyn::tools {

struct RunParams {
  double eps = 0.3;
  double gamma = 0;  // <= 0: preset value
  double delta = 0;  // <= 0: preset value
  double phi = 2;
  std::string preset;  // empty: picked from kind and bipartite flag
  std::uint64_t seed = 1;
  std::size_t oracle_every = 50;  // 0 samples only at Q records
  bool timing = true;             // false writes ns = 0 so output is reproducible
};

struct RunRow {
  std::size_t step = 0;  // 1-based record index
  char op = 'Q';
  std::uint64_t size = 0;
  bool sampled = false;
  std::optional<std::uint64_t> oracle;  // empty at a sampled step means the budget ran out
  bool valid = true;
  std::uint64_t ns = 0;
  bool rebuild = false;
};

struct RunSummary {
  std::size_t steps = 0;
  std::size_t sampled = 0;
  std::size_t budget_hits = 0;
  bool all_valid = true;
  // Cover size / optimum for vc, optimum / matching size for matchings, so
  // larger is worse in both cases.
  double max_ratio = 1;
  std::uint64_t rebuilds = 0;
  std::uint64_t guess_switches = 0;
  std::uint64_t b_min = 0;
  std::uint64_t max_update_ops = 0;
  double mean_update_ops = 0;
  std::uint64_t mwu_iterations = 0;
  std::uint64_t aug_paths = 0;
  double seconds = 0;
};

struct RunReport {
  std::vector<RunRow> rows;
  RunSummary summary;
};

// Replays t through the C API. Throws std::runtime_error when the engine
// rejects an update.
RunReport run_trace(const Trace& t, const RunParams& params);

extern const char* const kCsvHeader;  // step,op,size,oracle,valid,ns,rebuild
void write_csv(std::ostream& out, const RunReport& r);
std::string summary_json(const RunReport& r, const Trace& t, const RunParams& params);

}  // namespace geodyn::tools
