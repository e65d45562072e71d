#include "geodyn/geodyn.h"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "geodyn/dyn_vc.hpp"
#include "geodyn/general_matching.hpp"
#include "geodyn/matching.hpp"
#include "geodyn/oracles.hpp"

using namespace geodyn;

struct geodyn_engine {
  geodyn_config cfg{};
  std::string preset;
  std::variant<std::unique_ptr<DynamicVc>, std::unique_ptr<DynamicMatching>,
               std::unique_ptr<DynamicGeneralMatching>>
      impl;
  std::map<ObjectId, GeomObject> live;
  mutable std::string error;
};

namespace {

thread_local std::string g_create_error;

geodyn_status fail(const geodyn_engine* e, geodyn_status s, const std::string& msg) {
  if (e)
    e->error = msg;
  else
    g_create_error = msg;
  return s;
}

// Runs f, mapping exceptions to status codes and recording the message.
template <class F>
geodyn_status guarded(const geodyn_engine* e, F&& f) {
  try {
    if (e) e->error.clear();
    return f();
  } catch (const oracles::OracleBudgetExceeded& ex) {
    return fail(e, GEODYN_E_BUDGET, ex.what());
  } catch (const ContractViolation& ex) {
    return fail(e, GEODYN_E_CONTRACT, ex.what());
  } catch (const std::exception& ex) {
    return fail(e, GEODYN_E_INTERNAL, ex.what());
  }
}

bool side_from(int s, Side* out) {
  switch (s) {
    case GEODYN_SIDE_NONE: *out = Side::None; return true;
    case GEODYN_SIDE_LEFT: *out = Side::Left; return true;
    case GEODYN_SIDE_RIGHT: *out = Side::Right; return true;
  }
  return false;
}

std::string default_preset(const geodyn_config& c) {
  if (c.bipartite) return "bipartite";
  if (c.kind == GEODYN_KIND_RECT) return "rect";
  return c.kind == GEODYN_KIND_DISK ? "disks" : "fat";
}

geodyn_status do_insert(geodyn_engine* e, const GeomObject& o) {
  validate(o);
  if ((e->cfg.kind == GEODYN_KIND_DISK) != (o.kind() == ShapeKind::Disk))
    throw ContractViolation("shape does not match the engine kind");
  if ((e->cfg.bipartite != 0) != (o.side != Side::None))
    throw ContractViolation(e->cfg.bipartite ? "bipartite engine needs side L or R"
                                             : "side tags need a bipartite engine");
  if (e->live.count(o.id)) throw ContractViolation("duplicate id " + std::to_string(o.id));
  std::visit([&](auto& p) { p->insert(o); }, e->impl);
  e->live.emplace(o.id, o);
  return GEODYN_OK;
}

std::vector<GeomObject> live_objects(const geodyn_engine* e) {
  std::vector<GeomObject> out;
  out.reserve(e->live.size());
  for (const auto& [id, o] : e->live) out.push_back(o);
  return out;
}

std::vector<MatchEdge> matching_of(const geodyn_engine* e) {
  if (auto* m = std::get_if<std::unique_ptr<DynamicMatching>>(&e->impl)) return (*m)->matching();
  if (auto* g = std::get_if<std::unique_ptr<DynamicGeneralMatching>>(&e->impl))
    return (*g)->matching();
  return {};
}

}  // namespace

extern "C" {

void geodyn_config_default(geodyn_config* cfg) {
  if (!cfg) return;
  *cfg = geodyn_config{};
  cfg->mode = GEODYN_MODE_VC;
  cfg->kind = GEODYN_KIND_DISK;
  cfg->dim = 2;
  cfg->bipartite = 0;
  cfg->eps = 0.3;
  cfg->gamma = 0;
  cfg->delta = 0;
  cfg->phi = 2.0;
  cfg->preset = nullptr;
  cfg->seed = 1;
}

geodyn_status geodyn_create(const geodyn_config* cfg, geodyn_engine** out) {
  if (!cfg || !out) return fail(nullptr, GEODYN_E_ARG, "null argument");
  *out = nullptr;
  if (cfg->mode < GEODYN_MODE_VC || cfg->mode > GEODYN_MODE_MCM_GENERAL)
    return fail(nullptr, GEODYN_E_ARG, "bad mode");
  if (cfg->kind < GEODYN_KIND_DISK || cfg->kind > GEODYN_KIND_BOX)
    return fail(nullptr, GEODYN_E_ARG, "bad kind");
  auto e = std::make_unique<geodyn_engine>();
  e->cfg = *cfg;
  e->cfg.preset = nullptr;
  geodyn_status s = guarded(nullptr, [&] {
    ShapeKind kind = cfg->kind == GEODYN_KIND_DISK ? ShapeKind::Disk : ShapeKind::Box;
    int dim = cfg->kind == GEODYN_KIND_BOX ? cfg->dim : 2;
    Backend backend = default_backend(kind);
    switch (cfg->mode) {
      case GEODYN_MODE_VC: {
        e->preset = cfg->preset ? cfg->preset : default_preset(*cfg);
        DynVcParams p = vc_preset(e->preset, cfg->eps);
        if (cfg->gamma > 0) p.gamma = cfg->gamma;
        if (cfg->delta > 0) p.delta = cfg->delta;
        if (cfg->phi > 0) p.fat.phi = cfg->phi;
        e->impl = std::make_unique<DynamicVc>(backend, kind, dim, cfg->bipartite != 0, p);
        break;
      }
      case GEODYN_MODE_MCM:
        if (!cfg->bipartite) throw ContractViolation("bipartite matching needs bipartite=1");
        e->impl = std::make_unique<DynamicMatching>(backend, kind, dim, cfg->eps);
        break;
      default:
        if (cfg->bipartite) throw ContractViolation("general matching needs bipartite=0");
        e->impl = std::make_unique<DynamicGeneralMatching>(backend, kind, dim, cfg->eps, cfg->seed);
        break;
    }
    return GEODYN_OK;
  });
  if (s != GEODYN_OK) return s;
  *out = e.release();
  return GEODYN_OK;
}

void geodyn_destroy(geodyn_engine* e) { delete e; }

geodyn_status geodyn_insert_disk(geodyn_engine* e, uint64_t id, int side, double x, double y,
                                 double r) {
  if (!e) return fail(nullptr, GEODYN_E_ARG, "null engine");
  Side sd;
  if (!side_from(side, &sd)) return fail(e, GEODYN_E_ARG, "bad side");
  return guarded(e, [&] { return do_insert(e, make_disk(id, x, y, r, sd)); });
}

geodyn_status geodyn_insert_box(geodyn_engine* e, uint64_t id, int side, const double* lo,
                                const double* hi) {
  if (!e || !lo || !hi) return fail(e, GEODYN_E_ARG, "null argument");
  Side sd;
  if (!side_from(side, &sd)) return fail(e, GEODYN_E_ARG, "bad side");
  int dim = e->cfg.kind == GEODYN_KIND_BOX ? e->cfg.dim : 2;
  return guarded(e, [&] {
    return do_insert(e, make_box(id, std::vector<double>(lo, lo + dim),
                                 std::vector<double>(hi, hi + dim), sd));
  });
}

geodyn_status geodyn_erase(geodyn_engine* e, uint64_t id) {
  if (!e) return fail(nullptr, GEODYN_E_ARG, "null engine");
  return guarded(e, [&] {
    if (!e->live.count(id)) throw ContractViolation("unknown id " + std::to_string(id));
    std::visit([&](auto& p) { p->erase(id); }, e->impl);
    e->live.erase(id);
    return GEODYN_OK;
  });
}

geodyn_status geodyn_solution_size(const geodyn_engine* e, uint64_t* out) {
  if (!e || !out) return fail(e, GEODYN_E_ARG, "null argument");
  if (auto* v = std::get_if<std::unique_ptr<DynamicVc>>(&e->impl))
    *out = (*v)->cover_size();
  else
    *out = matching_of(e).size();
  return GEODYN_OK;
}

geodyn_status geodyn_cover(const geodyn_engine* e, uint64_t* ids, size_t cap, size_t* count) {
  if (!e || !count) return fail(e, GEODYN_E_ARG, "null argument");
  auto* v = std::get_if<std::unique_ptr<DynamicVc>>(&e->impl);
  if (!v) return fail(e, GEODYN_E_ARG, "cover requested from a matching engine");
  auto c = (*v)->cover();
  *count = c.size();
  if (c.size() > cap || (!ids && !c.empty())) return fail(e, GEODYN_E_ARG, "buffer too small");
  std::copy(c.begin(), c.end(), ids);
  return GEODYN_OK;
}

geodyn_status geodyn_matching(const geodyn_engine* e, uint64_t* pairs, size_t cap, size_t* count) {
  if (!e || !count) return fail(e, GEODYN_E_ARG, "null argument");
  if (std::holds_alternative<std::unique_ptr<DynamicVc>>(e->impl))
    return fail(e, GEODYN_E_ARG, "matching requested from a cover engine");
  auto m = matching_of(e);
  *count = m.size();
  if (m.size() > cap || (!pairs && !m.empty())) return fail(e, GEODYN_E_ARG, "buffer too small");
  for (std::size_t i = 0; i < m.size(); ++i) {
    pairs[2 * i] = m[i].a;
    pairs[2 * i + 1] = m[i].b;
  }
  return GEODYN_OK;
}

geodyn_status geodyn_get_stats(const geodyn_engine* e, geodyn_stats* out) {
  if (!e || !out) return fail(e, GEODYN_E_ARG, "null argument");
  *out = geodyn_stats{};
  out->live = e->live.size();
  if (auto* v = std::get_if<std::unique_ptr<DynamicVc>>(&e->impl)) {
    const auto& s = (*v)->stats();
    out->updates = s.updates;
    out->rebuilds = s.rebuilds;
    out->guess_switches = s.guess_switches;
    out->b = s.b;
    out->b_min = s.b_min;
    out->phase_budget = s.phase_budget;
    out->max_update_ops = s.max_update_ops;
    out->total_update_ops = s.total_update_ops;
    out->kernel_size = s.kernel_size;
    out->mwu_iterations = s.mwu_iterations;
  } else if (auto* m = std::get_if<std::unique_ptr<DynamicMatching>>(&e->impl)) {
    const auto& s = (*m)->stats();
    const auto& a = (*m)->aug_stats();
    out->updates = s.updates;
    out->rebuilds = s.rebuilds;
    out->phase_budget = s.phase_budget;
    out->aug_paths = a.paths;
    out->candidate_repeats = a.candidate_repeats;
    out->nonsimple_paths = a.nonsimple_paths;
  } else {
    const auto& g = *std::get<std::unique_ptr<DynamicGeneralMatching>>(e->impl);
    const auto& s = g.stats();
    const auto& gs = g.engine_stats();
    out->updates = s.updates;
    out->rebuilds = s.rebuilds;
    out->phase_budget = s.phase_budget;
    out->aug_paths = gs.aug.paths;
    out->candidate_repeats = gs.aug.candidate_repeats;
    out->nonsimple_paths = gs.aug.nonsimple_paths;
    out->z_runs = gs.z_runs;
    out->relabels = gs.relabels_up + gs.relabels_down;
  }
  return GEODYN_OK;
}

geodyn_status geodyn_validate(const geodyn_engine* e, int* valid) {
  if (!e || !valid) return fail(e, GEODYN_E_ARG, "null argument");
  return guarded(e, [&] {
    auto objs = live_objects(e);
    if (auto* v = std::get_if<std::unique_ptr<DynamicVc>>(&e->impl)) {
      *valid = oracles::is_vertex_cover(objs, (*v)->cover());
    } else {
      std::vector<oracles::IdPair> p;
      for (const auto& m : matching_of(e)) p.emplace_back(m.a, m.b);
      *valid = oracles::is_valid_matching(objs, p, e->cfg.bipartite != 0);
    }
    return GEODYN_OK;
  });
}

geodyn_status geodyn_oracle(const geodyn_engine* e, uint64_t* opt) {
  if (!e || !opt) return fail(e, GEODYN_E_ARG, "null argument");
  return guarded(e, [&] {
    auto objs = live_objects(e);
    auto g = oracles::ExplicitGraph::from_objects(objs);
    if (e->cfg.mode == GEODYN_MODE_VC && !g.bipartite)
      *opt = oracles::exact_mvc(g).size();
    else if (g.bipartite)
      *opt = oracles::exact_bipartite_mcm(g).size();  // equals the minimum cover by Koenig
    else
      *opt = oracles::exact_mcm_general(g).size();
    return GEODYN_OK;
  });
}

const char* geodyn_last_error(const geodyn_engine* e) {
  return e ? e->error.c_str() : g_create_error.c_str();
}

const char* geodyn_status_name(geodyn_status s) {
  switch (s) {
    case GEODYN_OK: return "ok";
    case GEODYN_E_ARG: return "bad argument";
    case GEODYN_E_CONTRACT: return "contract violation";
    case GEODYN_E_BUDGET: return "oracle budget exceeded";
    case GEODYN_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

}  // extern "C"
