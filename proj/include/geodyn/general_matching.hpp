#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "geodyn/matching.hpp"

namespace geodyn {

// Random subsets Z of the label set [n] such that every disjoint (A, B) with
// |A| + |B| <= ell has some Z with A inside Z and B outside.
class ColorFamily {
 public:
  int n = 0;
  int ell = 0;
  std::uint64_t seed = 0;
  bool verified = false;

  std::size_t size() const { return count_; }
  bool in(std::size_t z, int label) const {
    return (bits_[z * words_ + static_cast<std::size_t>(label) / 64] >> (label % 64)) & 1u;
  }

 private:
  friend ColorFamily build_color_family(int n, int ell, std::uint64_t seed);
  std::size_t count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// ceil(2^ell (ell+2) ln max(n, 2)).
std::size_t color_family_size(int n, int ell);

// For n <= 16 and ell <= 4 the family is checked exhaustively and redrawn
// with a fresh seed on failure; throws after 8 failed draws.
ColorFamily build_color_family(int n, int ell, std::uint64_t seed);

// Exhaustive separation check; n <= 20.
bool separates_all(const ColorFamily& f);

struct GeneralStats {
  AugStats aug;
  std::uint64_t z_runs = 0;
  std::uint64_t z_productive = 0;
  std::uint64_t prechecks = 0;
  std::uint64_t precheck_budget_hits = 0;
  std::uint64_t families_built = 0;
  std::uint64_t relabels_up = 0;
  std::uint64_t relabels_down = 0;
};

// Augmenting-path engine for one-sided (non-bipartite) instances. Objects get
// labels in [n]; a Z of the color family turns G into the bipartite subgraph
// with edges between Z and its complement, searched with the layered DFS.
// The label universe doubles when the live count exceeds n and halves when it
// drops below n/4, relabelling everything.
class GeneralMatcher {
 public:
  GeneralMatcher(Backend backend, ShapeKind kind, int dim, std::uint64_t seed = 1);

  void insert(const GeomObject& obj);
  void erase(ObjectId id);
  const GeomObject& object(ObjectId id) const;
  std::size_t size() const { return objs_.size(); }
  int label(ObjectId id) const { return labels_.at(id); }
  int label_universe() const { return n_; }

  // Family for the current label universe, built on first use.
  const ColorFamily& family(int ell);

  // Maximal set of disjoint augmenting paths of length 2*ell+1, assuming no
  // shorter ones exist. Uses the family with parameter 2*ell+2.
  std::vector<std::vector<ObjectId>> maximal_aug_paths(const Mates& mates, int ell);
  void improve(Mates& mates, int rounds, const RoundHook& hook = {});

  const GeneralStats& stats() const { return stats_; }

  // Node budget of the exact pre-search that decides whether any augmenting
  // path of the current length avoids the paths found so far.
  static constexpr std::uint64_t kPrecheckBudget = 2'000'000;

 private:
  friend struct GeneralPolicy;
  void relabel(int new_n);

  Backend backend_;
  ShapeKind kind_;
  int dim_;
  std::uint64_t seed_;
  int n_ = 4;
  std::unordered_map<ObjectId, GeomObject> objs_;
  std::unordered_map<ObjectId, int> labels_;
  std::set<int> free_labels_;
  std::map<int, ColorFamily> families_;
  DetectStore all_;
  GeneralStats stats_;
};

// Maximal matching followed by ceil(1/eps) rounds over the color families.
// Objects must not carry side tags.
McmResult approx_mcm_general(std::span<const GeomObject> objs, double eps, Backend backend,
                             const RoundHook& hook = {}, GeneralStats* stats = nullptr);
McmResult approx_mcm_general(std::span<const GeomObject> objs, double eps);

// Same phase logic as DynamicMatching on one-sided instances.
class DynamicGeneralMatching {
 public:
  DynamicGeneralMatching(Backend backend, ShapeKind kind, int dim, double eps,
                         std::uint64_t seed = 1);

  void insert(const GeomObject& obj);
  void erase(ObjectId id);

  std::vector<MatchEdge> matching() const { return edges_of(mates_); }
  std::size_t size() const { return mates_.size() / 2; }
  std::size_t maximal_size() const { return m0_.size(); }
  const DynMatchingStats& stats() const { return stats_; }
  const GeneralStats& engine_stats() const { return engine_.stats(); }
  void rebuild();

 private:
  void tick();

  double eps_;
  MaximalMatching m0_;
  GeneralMatcher engine_;
  Mates mates_;
  std::uint64_t in_phase_ = 0;
  DynMatchingStats stats_;
};

}  // namespace geodyn
