#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>

#include "geodyn/geometry.hpp"
#include "geodyn/id_filter.hpp"

namespace geodyn {

enum class Backend : std::uint8_t { NaiveScan, BoxRangeTree, DiskGridHierarchy };

Backend default_backend(ShapeKind kind);
const char* backend_name(Backend b);

struct DetectStats {
  std::uint64_t inserts = 0;
  std::uint64_t erases = 0;
  std::uint64_t queries = 0;
  // Grid backend only: hash cells looked up.
  std::uint64_t cells_inspected = 0;
  std::uint64_t max_cells_per_query = 0;
};

// Dynamic set of objects answering "give me some object intersecting q".
class DetectStore {
 public:
  class Impl;

  DetectStore(Backend backend, ShapeKind kind, int dim);
  ~DetectStore();
  DetectStore(DetectStore&&) noexcept;
  DetectStore& operator=(DetectStore&&) noexcept;

  void insert(const GeomObject& obj);
  void erase(ObjectId id);
  void clear();
  // Replaces the contents with objs, built in one pass where the backend can.
  void assign(std::span<const GeomObject> objs);

  std::optional<ObjectId> query_witness(const GeomObject& q) const;
  // Only ids passing accept are reported.
  std::optional<ObjectId> query_witness(const GeomObject& q, IdFilter accept) const;

  bool contains(ObjectId id) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  const GeomObject& object(ObjectId id) const;
  void for_each(const std::function<void(const GeomObject&)>& fn) const;

  Backend backend() const { return backend_; }
  ShapeKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const DetectStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

 private:
  void check_shape(const GeomObject& o) const;

  Backend backend_;
  ShapeKind kind_;
  int dim_;
  std::unique_ptr<Impl> impl_;
  mutable DetectStats stats_;
};

}  // namespace geodyn
