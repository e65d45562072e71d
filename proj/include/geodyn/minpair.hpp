#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "geodyn/detect.hpp"

namespace geodyn {

struct Partner {
  ObjectId id;
  long double weight;
};

struct MinPair {
  ObjectId a, b;  // a < b
  long double sum;
};

struct WeightedStoreStats {
  std::uint64_t store_ops = 0;      // secondary DetectStore inserts and erases
  std::uint64_t nodes_touched = 0;  // weight-tree nodes on insert and erase paths
  std::uint64_t subtree_rebuilds = 0;
  std::uint64_t heap_pushes = 0;
  std::uint64_t heap_validations = 0;
};

class WeightTree;

// Objects with positive weights. Answers the minimum-weight object meeting a
// query and the adjacent pair of minimum weight sum. In bipartite mode each
// side has its own tree and only cross-side pairs count.
class WeightedStore {
 public:
  WeightedStore(Backend backend, ShapeKind kind, int dim, bool bipartite = false);
  ~WeightedStore();
  WeightedStore(const WeightedStore&) = delete;
  WeightedStore& operator=(const WeightedStore&) = delete;

  void insert(const GeomObject& obj, long double w = 1);
  void erase(ObjectId id);
  void set_weight(ObjectId id, long double w);

  // Lightest live object adjacent to q, ignoring q.id itself; ties by id.
  std::optional<Partner> min_partner(const GeomObject& q) const;
  // Adjacent pair minimising (sum, a, b).
  std::optional<MinPair> min_pair();

  long double weight(ObjectId id) const;
  bool contains(ObjectId id) const { return items_.count(id) != 0; }
  std::size_t size() const { return items_.size(); }
  const GeomObject& object(ObjectId id) const;
  std::vector<ObjectId> ids() const;
  std::size_t non_unit_count() const { return non_unit_; }
  bool bipartite() const { return bipartite_; }
  ShapeKind kind() const { return kind_; }
  int dim() const { return dim_; }
  Backend backend() const { return backend_; }
  const WeightedStoreStats& stats() const;
  std::size_t heap_size() const { return heap_.size(); }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& [id, it] : items_) f(it.obj, it.w);
  }

 private:
  struct Item {
    GeomObject obj;
    long double w;
    std::uint64_t version;
  };
  struct Entry {
    long double sum;
    ObjectId lo, hi, owner;
    std::uint64_t version;
    bool operator>(const Entry& o) const {
      if (sum != o.sum) return sum > o.sum;
      if (lo != o.lo) return lo > o.lo;
      return hi > o.hi;
    }
  };

  WeightTree& tree_for(Side s) const;
  const WeightTree& partner_tree(Side s) const;
  void touch(ObjectId id);
  void compact_heap();

  Backend backend_;
  ShapeKind kind_;
  int dim_;
  bool bipartite_;
  std::unique_ptr<WeightTree> trees_[2];
  std::unordered_map<ObjectId, Item> items_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
  std::uint64_t clock_ = 0;
  std::size_t non_unit_ = 0;
  mutable WeightedStoreStats stats_;
};

}  // namespace geodyn
