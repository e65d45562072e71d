#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "geodyn/detect.hpp"

namespace geodyn {

struct MatchEdge {
  ObjectId a, b;  // a < b
  bool operator==(const MatchEdge&) const = default;
};

using Mates = std::unordered_map<ObjectId, ObjectId>;

std::vector<MatchEdge> edges_of(const Mates& mates);

// Greedy matching kept maximal under insertions and deletions. Unmatched
// objects sit in detection stores (one per side when bipartite).
class MaximalMatching {
 public:
  MaximalMatching(Backend backend, ShapeKind kind, int dim, bool bipartite);

  void insert(const GeomObject& obj);
  void erase(ObjectId id);

  std::optional<ObjectId> mate(ObjectId id) const;
  const Mates& mates() const { return mate_; }
  std::size_t size() const { return mate_.size() / 2; }
  std::vector<MatchEdge> edges() const { return edges_of(mate_); }
  bool bipartite() const { return bipartite_; }
  bool contains(ObjectId id) const { return objs_.count(id) != 0; }
  const GeomObject& object(ObjectId id) const;
  const std::unordered_map<ObjectId, GeomObject>& objects() const { return objs_; }
  std::uint64_t store_ops() const { return store_ops_; }
  // store_ops plus the queries and grid cells its stores spent.
  std::uint64_t work() const;

 private:
  void place(ObjectId id);
  DetectStore& parking(Side s);
  DetectStore& partners_for(Side s);

  bool bipartite_;
  std::unordered_map<ObjectId, GeomObject> objs_;
  Mates mate_;
  std::vector<DetectStore> free_;
  std::uint64_t store_ops_ = 0;
};

struct AugStats {
  std::uint64_t iterations = 0;
  std::uint64_t extend_calls = 0;
  std::uint64_t paths = 0;
  std::uint64_t candidate_repeats = 0;  // a vertex tried twice as u_i in one layer
  std::uint64_t nonsimple_paths = 0;
  std::uint64_t store_ops = 0;
};

// Number of augmentation rounds for a given eps: ceil(1/eps).
int rounds_for(double eps);

// Called after each round with the round number and the current matching.
using RoundHook = std::function<void(int ell, const Mates& mates)>;

// Bipartite augmenting-path engine over a live object set. Keeps one
// detection store per side holding every live object; rounds temporarily
// remove matched vertices from them and put them back afterwards.
class BipartiteMatcher {
 public:
  BipartiteMatcher(Backend backend, ShapeKind kind, int dim);

  void insert(const GeomObject& obj);
  void erase(ObjectId id);
  const GeomObject& object(ObjectId id) const;
  std::size_t size() const { return objs_.size(); }

  // Maximal set of disjoint augmenting paths of length 2*ell+1 w.r.t. mates.
  // Assumes no shorter augmenting path exists.
  std::vector<std::vector<ObjectId>> maximal_aug_paths(const Mates& mates, int ell);

  // Rounds 1..rounds, augmenting after each.
  void improve(Mates& mates, int rounds, const RoundHook& hook = {});

  const AugStats& stats() const { return stats_; }

 private:
  friend struct BipartitePolicy;
  Backend backend_;
  ShapeKind kind_;
  int dim_;
  std::unordered_map<ObjectId, GeomObject> objs_;
  DetectStore all_[2];  // Left, Right
  AugStats stats_;
};

struct McmResult {
  std::vector<MatchEdge> matching;
  AugStats stats;
};

// Maximal matching followed by ceil(1/eps) augmentation rounds. Objects must
// carry side tags.
McmResult approx_mcm(std::span<const GeomObject> objs, double eps, Backend backend,
                     const RoundHook& hook = {});
McmResult approx_mcm(std::span<const GeomObject> objs, double eps);

struct DynMatchingStats {
  std::uint64_t updates = 0;
  std::uint64_t rebuilds = 0;
  std::uint64_t phase_budget = 1;
};

// Lazy dynamic matching: recomputed every ceil(eps * |M0|) updates, in
// between insertions are ignored and deletions drop their matched edge.
class DynamicMatching {
 public:
  DynamicMatching(Backend backend, ShapeKind kind, int dim, double eps);

  void insert(const GeomObject& obj);
  void erase(ObjectId id);

  std::vector<MatchEdge> matching() const { return edges_of(mates_); }
  std::size_t size() const { return mates_.size() / 2; }
  std::size_t maximal_size() const { return m0_.size(); }
  const DynMatchingStats& stats() const { return stats_; }
  const AugStats& aug_stats() const { return engine_.stats(); }
  void rebuild();

 private:
  void tick();

  double eps_;
  MaximalMatching m0_;
  BipartiteMatcher engine_;
  Mates mates_;
  std::uint64_t in_phase_ = 0;
  DynMatchingStats stats_;
};

}  // namespace geodyn
