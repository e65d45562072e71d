#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "geodyn/id_filter.hpp"

namespace geodyn {

// Static multi-level range tree answering orthogonal dominance queries:
// "is there a live point p with p[j] <= a[j] for every coordinate j?".
// Levels 0..m-3 are segment trees whose nodes carry the next level; level m-2
// is a min-segment tree over the last coordinate. Small ranges are scanned.
// Points can be erased (tombstoned); the structure never grows.
class DominanceTree {
 public:
  static constexpr int kMaxCoords = 2 * kMaxDim;
  using Point = std::array<double, kMaxCoords>;

  DominanceTree(int m, std::vector<Point> pts, std::vector<ObjectId> ids);
  ~DominanceTree();
  DominanceTree(const DominanceTree&) = delete;
  DominanceTree& operator=(const DominanceTree&) = delete;

  // Index of some live point dominated by a whose id passes accept.
  std::optional<std::uint32_t> find(const Point& a, IdFilter accept) const;
  void erase(std::uint32_t idx);

  bool alive(std::uint32_t idx) const { return alive_[idx] != 0; }
  ObjectId id(std::uint32_t idx) const { return ids_[idx]; }
  const Point& point(std::uint32_t idx) const { return pts_[idx]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(pts_.size()); }
  std::uint32_t alive_count() const { return alive_count_; }

 private:
  struct Level;
  int m_;
  std::vector<Point> pts_;
  std::vector<ObjectId> ids_;
  std::vector<char> alive_;
  std::uint32_t alive_count_;
  std::unique_ptr<Level> root_;
};

}  // namespace geodyn
