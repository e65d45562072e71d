#include "geodyn/dyn_vc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "geodyn/static_vc.hpp"

namespace geodyn {

DynVcParams vc_preset(std::string_view name, double eps) {
  if (!(eps > 0 && eps <= 1)) throw ContractViolation("eps must be in (0, 1]");
  DynVcParams p;
  p.eps = eps;
  if (name == "disks" || name == "fat" || name == "rect") {
    p.engine = name == "rect" ? VcEngine::Rect : VcEngine::Fat;
    p.gamma = 0.225;
    p.delta = std::min(eps * eps, 0.9 * p.gamma);
  } else if (name == "bipartite") {
    p.engine = VcEngine::Bipartite;
    p.gamma = std::min(eps, 0.24);
    p.delta = std::min(eps * eps * eps, 0.9 * p.gamma);
  } else {
    throw ContractViolation("unknown preset " + std::string(name));
  }
  return p;
}

namespace {

std::uint64_t guess_for(std::size_t m0) {
  return std::bit_ceil(std::max<std::uint64_t>(1, m0));
}

std::uint64_t budget_for(double eps, std::uint64_t b) {
  auto k = static_cast<std::uint64_t>(std::ceil(eps * static_cast<double>(b) - 1e-9));
  return std::max<std::uint64_t>(k, 1);
}

}  // namespace

DynamicVc::DynamicVc(Backend backend, ShapeKind kind, int dim, bool bipartite,
                     const DynVcParams& params)
    : params_(params), store_(backend, kind, dim, bipartite), m0_(backend, kind, dim, bipartite) {
  if (!(params.eps > 0 && params.eps <= 1)) throw ContractViolation("eps must be in (0, 1]");
  if (!(0 < params.delta && params.delta < params.gamma && params.gamma < 0.25))
    throw ContractViolation("need 0 < delta < gamma < 1/4");
  if ((params.engine == VcEngine::Bipartite) != bipartite)
    throw ContractViolation("the bipartite engine goes with two-sided instances only");
  if (params.engine == VcEngine::Rect && (kind != ShapeKind::Box || dim != 2))
    throw ContractViolation("the rectangle engine needs 2-D boxes");
  stats_.phase_budget = budget_for(params_.eps, stats_.b);
}

std::uint64_t DynamicVc::update_ops() const {
  const auto& s = store_.stats();
  return s.store_ops + s.nodes_touched + m0_.work();
}

void DynamicVc::insert(const GeomObject& obj) {
  auto before = update_ops();
  store_.insert(obj);
  m0_.insert(obj);
  cover_.insert(obj.id);
  after_update(before);
}

void DynamicVc::erase(ObjectId id) {
  auto before = update_ops();
  store_.erase(id);
  m0_.erase(id);
  cover_.erase(id);
  after_update(before);
}

void DynamicVc::after_update(std::uint64_t ops_before) {
  ++stats_.updates;
  std::uint64_t ops = update_ops() - ops_before;
  stats_.max_update_ops = std::max(stats_.max_update_ops, ops);
  stats_.total_update_ops += ops;
  std::uint64_t est = m0_.size();
  if ((2 * est < stats_.b || est >= 2 * stats_.b) && guess_for(est) != stats_.b) {
    stats_.b = guess_for(est);
    stats_.phase_budget = budget_for(params_.eps, stats_.b);
    ++stats_.guess_switches;
    rebuild();
    return;
  }
  if (++in_phase_ >= stats_.phase_budget) {
    ++stats_.phase_rebuilds;
    rebuild();
  }
}

void DynamicVc::rebuild() {
  in_phase_ = 0;
  ++stats_.rebuilds;
  stats_.b_min = stats_.rebuilds == 1 ? stats_.b : std::min(stats_.b_min, stats_.b);
  cover_.clear();
  stats_.kernel_size = stats_.high_size = 0;
  stats_.lp_size = 0;
  if (store_.size() == 0) {
    lp_floor_ = 0;
    updates_at_rebuild_ = stats_.updates;
    return;
  }

  LpSolveStats lp;
  // The LP value drops by at most one per update, which turns the last
  // result into a floor for the search.
  double floor = std::max(0.0, lp_floor_ - static_cast<double>(stats_.updates - updates_at_rebuild_));
  updates_at_rebuild_ = stats_.updates;
  FractionalCover fc = solve_fractional_vc(store_, params_.delta, &lp, floor);
  lp_floor_ = fc.z() / ((1 + params_.delta) * (1 + params_.delta));
  stats_.mwu_iterations += lp.total_iterations;
  stats_.lp_size = fc.size();
  Kernel k = build_kernel(fc, params_.gamma, params_.delta);
  stats_.kernel_size = k.K.size();
  stats_.high_size = k.H.size();

  std::vector<GeomObject> kobjs;
  kobjs.reserve(k.K.size());
  for (ObjectId id : k.K) kobjs.push_back(store_.object(id));
  std::vector<ObjectId> s_k;
  if (!kobjs.empty()) {
    switch (params_.engine) {
      case VcEngine::Fat: s_k = static_vc_fat(kobjs, params_.eps, params_.fat); break;
      case VcEngine::Rect: s_k = static_vc_rect(kobjs, params_.eps); break;
      case VcEngine::Bipartite: s_k = static_vc_bipartite(kobjs); break;
    }
  }
  for (ObjectId id : lift_cover(k, s_k, &store_)) cover_.insert(id);
}

std::vector<ObjectId> DynamicVc::cover() const {
  std::vector<ObjectId> out(cover_.begin(), cover_.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace geodyn
