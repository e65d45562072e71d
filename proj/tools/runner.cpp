#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "geodyn/geodyn.h"

namespace geodyn::tools {

const char* const kCsvHeader = "step,op,size,oracle,valid,ns,rebuild";

namespace {

using Clock = std::chrono::steady_clock;

struct Engine {
  geodyn_engine* e = nullptr;
  ~Engine() { geodyn_destroy(e); }
  void check(geodyn_status s, const char* what) const {
    if (s != GEODYN_OK)
      throw std::runtime_error(std::string(what) + ": " + geodyn_status_name(s) + ": " +
                               geodyn_last_error(e));
  }
};

int side_code(char c) {
  return c == 'L' ? GEODYN_SIDE_LEFT : c == 'R' ? GEODYN_SIDE_RIGHT : GEODYN_SIDE_NONE;
}

}  // namespace

RunReport run_trace(const Trace& t, const RunParams& params) {
  const auto& h = t.header;
  geodyn_config cfg;
  geodyn_config_default(&cfg);
  cfg.mode = h.mode == Mode::Vc ? GEODYN_MODE_VC
             : h.mode == Mode::Mcm ? GEODYN_MODE_MCM
                                   : GEODYN_MODE_MCM_GENERAL;
  cfg.kind = h.kind == Kind::Disk ? GEODYN_KIND_DISK
             : h.kind == Kind::Rect ? GEODYN_KIND_RECT
                                    : GEODYN_KIND_BOX;
  cfg.dim = h.dim;
  cfg.bipartite = h.bipartite ? 1 : 0;
  cfg.eps = params.eps;
  cfg.gamma = params.gamma;
  cfg.delta = params.delta;
  cfg.phi = params.phi;
  cfg.preset = params.preset.empty() ? nullptr : params.preset.c_str();
  cfg.seed = params.seed;

  Engine eng;
  if (auto s = geodyn_create(&cfg, &eng.e); s != GEODYN_OK)
    throw std::runtime_error(std::string("create: ") + geodyn_status_name(s) + ": " +
                             geodyn_last_error(nullptr));

  RunReport rep;
  auto& sum = rep.summary;
  auto t0 = Clock::now();
  geodyn_stats st{};
  eng.check(geodyn_get_stats(eng.e, &st), "stats");
  std::uint64_t rebuilds = st.rebuilds;

  for (std::size_t i = 0; i < t.ops.size(); ++i) {
    const auto& op = t.ops[i];
    RunRow row;
    row.step = i + 1;
    row.op = static_cast<char>(op.type);
    auto start = Clock::now();
    if (op.type == TraceOp::Insert) {
      if (h.kind == Kind::Disk) {
        eng.check(geodyn_insert_disk(eng.e, op.id, side_code(op.side), op.params[0], op.params[1],
                                     op.params[2]),
                  "insert");
      } else {
        double lo[4], hi[4];
        for (int k = 0; k < h.dim; ++k) {
          lo[k] = op.params[2 * k];
          hi[k] = op.params[2 * k + 1];
        }
        eng.check(geodyn_insert_box(eng.e, op.id, side_code(op.side), lo, hi), "insert");
      }
    } else if (op.type == TraceOp::Delete) {
      eng.check(geodyn_erase(eng.e, op.id), "delete");
    }
    auto stop = Clock::now();
    if (params.timing)
      row.ns = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());

    eng.check(geodyn_get_stats(eng.e, &st), "stats");
    row.rebuild = st.rebuilds != rebuilds;
    rebuilds = st.rebuilds;
    eng.check(geodyn_solution_size(eng.e, &row.size), "size");

    row.sampled = op.type == TraceOp::Query ||
                  (params.oracle_every > 0 && row.step % params.oracle_every == 0);
    if (row.sampled) {
      ++sum.sampled;
      int valid = 0;
      eng.check(geodyn_validate(eng.e, &valid), "validate");
      row.valid = valid != 0;
      sum.all_valid = sum.all_valid && row.valid;
      std::uint64_t opt = 0;
      geodyn_status s = geodyn_oracle(eng.e, &opt);
      if (s == GEODYN_E_BUDGET) {
        ++sum.budget_hits;
      } else {
        eng.check(s, "oracle");
        row.oracle = opt;
        std::uint64_t num = h.mode == Mode::Vc ? row.size : opt;
        std::uint64_t den = h.mode == Mode::Vc ? opt : row.size;
        double ratio = num == 0 ? 1.0
                       : den == 0 ? std::numeric_limits<double>::infinity()
                                  : static_cast<double>(num) / static_cast<double>(den);
        sum.max_ratio = std::max(sum.max_ratio, ratio);
      }
    }
    rep.rows.push_back(row);
  }

  sum.steps = t.ops.size();
  sum.rebuilds = st.rebuilds;
  sum.guess_switches = st.guess_switches;
  sum.b_min = st.b_min;
  sum.max_update_ops = st.max_update_ops;
  if (st.updates > 0)
    sum.mean_update_ops = static_cast<double>(st.total_update_ops) / static_cast<double>(st.updates);
  sum.mwu_iterations = st.mwu_iterations;
  sum.aug_paths = st.aug_paths;
  if (params.timing) sum.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

void write_csv(std::ostream& out, const RunReport& r) {
  out << kCsvHeader << '\n';
  for (const auto& row : r.rows) {
    out << row.step << ',' << row.op << ',' << row.size << ',';
    if (row.sampled) out << (row.oracle ? std::to_string(*row.oracle) : "budget");
    out << ',';
    if (row.sampled) out << (row.valid ? 1 : 0);
    out << ',' << row.ns << ',' << (row.rebuild ? 1 : 0) << '\n';
  }
}

std::string summary_json(const RunReport& r, const Trace& t, const RunParams& params) {
  const auto& s = r.summary;
  nlohmann::ordered_json j;
  j["mode"] = std::string(mode_name(t.header.mode));
  j["kind"] = std::string(kind_name(t.header.kind));
  j["dim"] = t.header.dim;
  j["bipartite"] = t.header.bipartite;
  j["eps"] = params.eps;
  j["seed"] = params.seed;
  j["steps"] = s.steps;
  j["sampled"] = s.sampled;
  j["budget_hits"] = s.budget_hits;
  j["all_valid"] = s.all_valid;
  j["max_ratio"] = s.max_ratio;
  j["rebuilds"] = s.rebuilds;
  j["guess_switches"] = s.guess_switches;
  j["b_min"] = s.b_min;
  j["max_update_ops"] = s.max_update_ops;
  j["mean_update_ops"] = s.mean_update_ops;
  j["mwu_iterations"] = s.mwu_iterations;
  j["aug_paths"] = s.aug_paths;
  j["seconds"] = s.seconds;
  return j.dump(2);
}

}  // namespace geodyn::tools
