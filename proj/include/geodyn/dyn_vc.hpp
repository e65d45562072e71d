#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "geodyn/lp_kernel.hpp"
#include "geodyn/matching.hpp"
#include "geodyn/minpair.hpp"

namespace geodyn {

enum class VcEngine : std::uint8_t { Fat, Rect, Bipartite };

struct DynVcParams {
  double eps = 0.3;
  double gamma = 0.225;
  double delta = 0.09;
  VcEngine engine = VcEngine::Fat;
  FatnessConfig fat;
};

// "disks" / "fat": fat engine, gamma = 0.225, delta = eps^2 (kept below gamma).
// "rect": same with the rectangle engine.
// "bipartite": smaller-side engine, gamma = eps (kept below 1/4), delta = eps^3.
DynVcParams vc_preset(std::string_view name, double eps);

struct DynVcStats {
  std::uint64_t updates = 0;
  std::uint64_t rebuilds = 0;
  std::uint64_t phase_rebuilds = 0;
  std::uint64_t guess_switches = 0;
  std::uint64_t b = 1;
  std::uint64_t b_min = 1;  // smallest guess any phase ran with
  std::uint64_t phase_budget = 1;
  std::size_t kernel_size = 0;  // |K| at the last rebuild
  std::size_t high_size = 0;    // |H| at the last rebuild
  double lp_size = 0;
  std::uint64_t mwu_iterations = 0;
  // Store work caused by updates, excluding rebuilds: weight-tree nodes on
  // the update path, secondary store inserts and erases, and the queries and
  // grid cells of the maximal matching.
  std::uint64_t max_update_ops = 0;
  std::uint64_t total_update_ops = 0;
};

// Vertex cover kept under insertions and deletions. Inserted objects join the
// cover and deleted ones leave it; every ceil(eps * b) updates the cover is
// recomputed through LP, kernel and the static engine on the kernel. The
// guess b follows a maximal matching M0 as 2^ceil(log2 max(1, |M0|)) and a
// change of guess also triggers a rebuild.
class DynamicVc {
 public:
  DynamicVc(Backend backend, ShapeKind kind, int dim, bool bipartite, const DynVcParams& params);

  void insert(const GeomObject& obj);
  void erase(ObjectId id);

  std::vector<ObjectId> cover() const;  // sorted
  bool in_cover(ObjectId id) const { return cover_.count(id) != 0; }
  std::size_t cover_size() const { return cover_.size(); }
  std::size_t size() const { return store_.size(); }
  const GeomObject& object(ObjectId id) const { return store_.object(id); }
  std::vector<ObjectId> ids() const { return store_.ids(); }

  void rebuild();

  const DynVcParams& params() const { return params_; }
  const DynVcStats& stats() const { return stats_; }
  const MaximalMatching& estimator() const { return m0_; }

 private:
  std::uint64_t update_ops() const;
  void after_update(std::uint64_t ops_before);

  DynVcParams params_;
  WeightedStore store_;
  MaximalMatching m0_;
  std::unordered_set<ObjectId> cover_;
  std::uint64_t in_phase_ = 0;
  double lp_floor_ = 0;  // lower bound on the LP value at the last rebuild
  std::uint64_t updates_at_rebuild_ = 0;
  DynVcStats stats_;
};

}  // namespace geodyn
