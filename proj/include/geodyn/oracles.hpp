#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geodyn/geometry.hpp"

// Exact reference solvers for small instances. Nothing here shares code with
// the approximation pipeline beyond the intersection predicate.
namespace geodyn::oracles {

struct OracleBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExplicitGraph {
  std::vector<ObjectId> ids;
  std::vector<Side> sides;
  std::vector<std::vector<int>> adj;
  bool bipartite = false;

  static ExplicitGraph from_objects(std::span<const GeomObject> objs);
  // Vertices 0..n-1 labelled by index; sides optional (empty = none).
  static ExplicitGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                                  const std::vector<Side>& sides = {});

  int n() const { return static_cast<int>(ids.size()); }
  std::size_t edge_count() const;
  int index_of(ObjectId id) const;

 private:
  std::unordered_map<ObjectId, int> index_;
  void finish();
};

using IdPair = std::pair<ObjectId, ObjectId>;

inline constexpr std::uint64_t kDefaultNodeBudget = 20'000'000;

// Minimum vertex cover by branch and bound. Throws OracleBudgetExceeded when
// the search tree outgrows node_budget.
std::vector<ObjectId> exact_mvc(const ExplicitGraph& g,
                                std::uint64_t node_budget = kDefaultNodeBudget);

// Hopcroft-Karp on a two-sided graph.
std::vector<IdPair> exact_bipartite_mcm(const ExplicitGraph& g);

struct FractionalVc {
  double value = 0;
  std::vector<double> x;  // per vertex index, each in {0, 0.5, 1}
};

// LP optimum via the bipartite double cover and Koenig's theorem.
FractionalVc exact_fractional_vc(const ExplicitGraph& g);

// Maximum matching by memoised enumeration; n <= 24.
std::vector<IdPair> exact_mcm_small(const ExplicitGraph& g);

// Maximum matching in a general graph (Edmonds, via Boost.Graph).
std::vector<IdPair> exact_mcm_general(const ExplicitGraph& g);

struct NaivePair {
  ObjectId a, b;  // a < b
  long double sum;
};

// Quadratic scan for the intersecting pair minimising w_a + w_b; ties go to
// the lexicographically smallest (a, b).
std::optional<NaivePair> min_pair_naive(std::span<const GeomObject> objs,
                                        const std::unordered_map<ObjectId, long double>& weight);

bool is_vertex_cover(std::span<const GeomObject> objs, std::span<const ObjectId> cover);
bool is_independent_set(std::span<const GeomObject> objs, std::span<const ObjectId> set);
// Pairs are live, intersect, vertex-disjoint, and cross sides when bipartite.
bool is_valid_matching(std::span<const GeomObject> objs, std::span<const IdPair> matching,
                       bool bipartite);

// Is there an augmenting path with at most max_edges edges? Exhaustive search
// over simple alternating paths, so it is exact on non-bipartite graphs too.
bool has_augmenting_path(const ExplicitGraph& g, std::span<const IdPair> matching, int max_edges);

}  // namespace geodyn::oracles
