#include "geodyn/detect.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

#include "geodyn/dominance_tree.hpp"

namespace geodyn {

class DetectStore::Impl {
 public:
  virtual ~Impl() = default;
  virtual void insert(const GeomObject& o) = 0;
  virtual void erase(ObjectId id) = 0;
  virtual void clear() = 0;
  virtual void assign(std::span<const GeomObject> objs) {
    clear();
    for (const auto& o : objs) insert(o);
  }
  virtual std::optional<ObjectId> query(const GeomObject& q, IdFilter accept,
                                        DetectStats& st) const = 0;
  virtual const GeomObject* find(ObjectId id) const = 0;
  virtual std::size_t size() const = 0;
  virtual void for_each(const std::function<void(const GeomObject&)>& fn) const = 0;
};

namespace {

// Dense vector of objects with an id index; shared by the naive backend and
// as object storage for the others.
class DenseSet {
 public:
  bool contains(ObjectId id) const { return pos_.count(id) != 0; }
  void add(const GeomObject& o) {
    pos_.emplace(o.id, items_.size());
    items_.push_back(o);
  }
  void remove(ObjectId id) {
    auto it = pos_.find(id);
    std::size_t p = it->second;
    pos_.erase(it);
    if (p + 1 != items_.size()) {
      items_[p] = std::move(items_.back());
      pos_[items_[p].id] = p;
    }
    items_.pop_back();
  }
  void clear() {
    items_.clear();
    pos_.clear();
  }
  const GeomObject* find(ObjectId id) const {
    auto it = pos_.find(id);
    return it == pos_.end() ? nullptr : &items_[it->second];
  }
  const std::vector<GeomObject>& items() const { return items_; }

 private:
  std::vector<GeomObject> items_;
  std::unordered_map<ObjectId, std::size_t> pos_;
};

class NaiveImpl final : public DetectStore::Impl {
 public:
  void insert(const GeomObject& o) override { set_.add(o); }
  void erase(ObjectId id) override { set_.remove(id); }
  void clear() override { set_.clear(); }
  std::optional<ObjectId> query(const GeomObject& q, IdFilter accept,
                                DetectStats&) const override {
    for (const auto& o : set_.items())
      if (intersects(o, q) && accept(o.id)) return o.id;
    return std::nullopt;
  }
  const GeomObject* find(ObjectId id) const override { return set_.find(id); }
  std::size_t size() const override { return set_.items().size(); }
  void for_each(const std::function<void(const GeomObject&)>& fn) const override {
    for (const auto& o : set_.items()) fn(o);
  }

 private:
  DenseSet set_;
};

// Boxes map to points (lo_k, -hi_k) in 2d dimensions; b meets q iff
// lo_k <= q.hi_k and -hi_k <= -q.lo_k for all k, a dominance query.
// Dynamic through the logarithmic method: static trees in slots of
// geometrically growing size, merged on insert, tombstoned on erase.
class RangeTreeImpl final : public DetectStore::Impl {
 public:
  explicit RangeTreeImpl(int dim) : dim_(dim), m_(2 * dim) {}

  void insert(const GeomObject& o) override {
    set_.add(o);
    std::vector<ObjectId> carry{o.id};
    std::size_t r = 0;
    while (r < slots_.size() && slots_[r]) {
      collect_alive(*slots_[r], carry);
      dead_ -= slots_[r]->size() - slots_[r]->alive_count();
      slots_[r].reset();
      ++r;
    }
    build_slot(r, carry);
  }

  void erase(ObjectId id) override {
    auto it = where_.find(id);
    auto [slot, idx] = it->second;
    where_.erase(it);
    slots_[slot]->erase(idx);
    set_.remove(id);
    ++dead_;
    if (dead_ > set_.items().size() + 32) rebuild_all();
  }

  void clear() override {
    set_.clear();
    slots_.clear();
    where_.clear();
    dead_ = 0;
  }

  void assign(std::span<const GeomObject> objs) override {
    clear();
    for (const auto& o : objs) set_.add(o);
    rebuild_all();
  }

  std::optional<ObjectId> query(const GeomObject& q, IdFilter accept,
                                DetectStats&) const override {
    DominanceTree::Point a{};
    const Box& b = q.box();
    for (int k = 0; k < dim_; ++k) {
      a[2 * k] = b.hi[k];
      a[2 * k + 1] = -b.lo[k];
    }
    for (const auto& s : slots_) {
      if (!s) continue;
      if (auto hit = s->find(a, accept)) return s->id(*hit);
    }
    return std::nullopt;
  }

  const GeomObject* find(ObjectId id) const override { return set_.find(id); }
  std::size_t size() const override { return set_.items().size(); }
  void for_each(const std::function<void(const GeomObject&)>& fn) const override {
    for (const auto& o : set_.items()) fn(o);
  }

 private:
  static void collect_alive(const DominanceTree& t, std::vector<ObjectId>& out) {
    for (std::uint32_t i = 0; i < t.size(); ++i)
      if (t.alive(i)) out.push_back(t.id(i));
  }

  void build_slot(std::size_t r, const std::vector<ObjectId>& ids) {
    if (slots_.size() <= r) slots_.resize(r + 1);
    std::vector<DominanceTree::Point> pts(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Box& b = set_.find(ids[i])->box();
      for (int k = 0; k < dim_; ++k) {
        pts[i][2 * k] = b.lo[k];
        pts[i][2 * k + 1] = -b.hi[k];
      }
      where_[ids[i]] = {r, static_cast<std::uint32_t>(i)};
    }
    slots_[r] = std::make_unique<DominanceTree>(m_, std::move(pts), ids);
  }

  void rebuild_all() {
    slots_.clear();
    where_.clear();
    dead_ = 0;
    std::vector<ObjectId> ids;
    ids.reserve(set_.items().size());
    for (const auto& o : set_.items()) ids.push_back(o.id);
    if (ids.empty()) return;
    std::size_t r = std::bit_width(ids.size() - 1);
    build_slot(r, ids);
  }

  int dim_;
  int m_;
  DenseSet set_;
  std::vector<std::unique_ptr<DominanceTree>> slots_;
  std::unordered_map<ObjectId, std::pair<std::size_t, std::uint32_t>> where_;
  std::size_t dead_ = 0;
};

struct CellKey {
  std::int64_t x, y;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct GridEntry {
  ObjectId id;
  double x, y, r;
};

// Disks grouped by radius class c = floor(log2 r); class c lives in a sparse
// grid of cell side 2^(c+1) keyed by the cell holding the center.
class DiskGridImpl final : public DetectStore::Impl {
 public:
  void insert(const GeomObject& o) override {
    set_.add(o);
    const Disk& d = o.disk();
    int c = std::ilogb(d.radius);
    auto& g = classes_[c];
    double s = std::ldexp(1.0, c + 1);
    g.cells[cell_of(d.center[0], d.center[1], s)].push_back({o.id, d.center[0], d.center[1], d.radius});
    ++g.count;
  }

  void erase(ObjectId id) override {
    const Disk& d = set_.find(id)->disk();
    int c = std::ilogb(d.radius);
    auto git = classes_.find(c);
    double s = std::ldexp(1.0, c + 1);
    auto cit = git->second.cells.find(cell_of(d.center[0], d.center[1], s));
    auto& bucket = cit->second;
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      if (bucket[i].id == id) {
        bucket[i] = bucket.back();
        bucket.pop_back();
        break;
      }
    }
    if (bucket.empty()) git->second.cells.erase(cit);
    if (--git->second.count == 0) classes_.erase(git);
    set_.remove(id);
  }

  void clear() override {
    set_.clear();
    classes_.clear();
  }

  std::optional<ObjectId> query(const GeomObject& q, IdFilter accept,
                                DetectStats& st) const override {
    const Disk& qd = q.disk();
    const double qx = qd.center[0], qy = qd.center[1], qr = qd.radius;
    std::uint64_t cells = 0;
    std::optional<ObjectId> found;
    for (const auto& [c, g] : classes_) {
      double s = std::ldexp(1.0, c + 1);
      double reach = qr + s;  // radii in class c are below s
      CellKey lo = cell_of(qx - reach, qy - reach, s);
      CellKey hi = cell_of(qx + reach, qy + reach, s);
      auto scan = [&](const std::vector<GridEntry>& bucket) {
        for (const auto& e : bucket) {
          double dx = e.x - qx, dy = e.y - qy, rs = e.r + qr;
          if (dx * dx + dy * dy <= rs * rs && accept(e.id)) {
            found = e.id;
            return;
          }
        }
      };
      // Sparse class: walking the occupied cells is cheaper than probing.
      if (g.cells.size() < static_cast<std::size_t>((hi.x - lo.x + 1) * (hi.y - lo.y + 1))) {
        for (const auto& [key, bucket] : g.cells) {
          if (key.x < lo.x || key.x > hi.x || key.y < lo.y || key.y > hi.y) continue;
          ++cells;
          scan(bucket);
          if (found) break;
        }
        if (found) break;
        continue;
      }
      for (std::int64_t cx = lo.x; cx <= hi.x && !found; ++cx) {
        for (std::int64_t cy = lo.y; cy <= hi.y && !found; ++cy) {
          // Skip cells whose nearest point is out of reach.
          double nx = std::clamp(qx, cx * s, (cx + 1) * s) - qx;
          double ny = std::clamp(qy, cy * s, (cy + 1) * s) - qy;
          if (nx * nx + ny * ny > reach * reach) continue;
          ++cells;
          auto it = g.cells.find({cx, cy});
          if (it != g.cells.end()) scan(it->second);
        }
      }
      if (found) break;
    }
    st.cells_inspected += cells;
    st.max_cells_per_query = std::max(st.max_cells_per_query, cells);
    return found;
  }

  const GeomObject* find(ObjectId id) const override { return set_.find(id); }
  std::size_t size() const override { return set_.items().size(); }
  void for_each(const std::function<void(const GeomObject&)>& fn) const override {
    for (const auto& o : set_.items()) fn(o);
  }

 private:
  struct ClassGrid {
    std::unordered_map<CellKey, std::vector<GridEntry>, CellHash> cells;
    std::size_t count = 0;
  };

  static CellKey cell_of(double x, double y, double s) {
    return {static_cast<std::int64_t>(std::floor(x / s)),
            static_cast<std::int64_t>(std::floor(y / s))};
  }

  DenseSet set_;
  std::map<int, ClassGrid> classes_;
};

}  // namespace

Backend default_backend(ShapeKind kind) {
  return kind == ShapeKind::Disk ? Backend::DiskGridHierarchy : Backend::BoxRangeTree;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::NaiveScan: return "naive";
    case Backend::BoxRangeTree: return "range-tree";
    case Backend::DiskGridHierarchy: return "disk-grid";
  }
  return "?";
}

DetectStore::DetectStore(Backend backend, ShapeKind kind, int dim)
    : backend_(backend), kind_(kind), dim_(kind == ShapeKind::Disk ? 2 : dim) {
  if (kind == ShapeKind::Box && (dim < 1 || dim > kMaxDim))
    throw ContractViolation("DetectStore: box dimension out of range");
  switch (backend) {
    case Backend::NaiveScan:
      impl_ = std::make_unique<NaiveImpl>();
      break;
    case Backend::BoxRangeTree:
      if (kind != ShapeKind::Box) throw ContractViolation("range-tree backend needs boxes");
      impl_ = std::make_unique<RangeTreeImpl>(dim_);
      break;
    case Backend::DiskGridHierarchy:
      if (kind != ShapeKind::Disk) throw ContractViolation("grid backend needs disks");
      impl_ = std::make_unique<DiskGridImpl>();
      break;
  }
}

DetectStore::~DetectStore() = default;
DetectStore::DetectStore(DetectStore&&) noexcept = default;
DetectStore& DetectStore::operator=(DetectStore&&) noexcept = default;

void DetectStore::check_shape(const GeomObject& o) const {
  if (o.kind() != kind_ || o.dim() != dim_) throw ContractViolation("DetectStore: shape mismatch");
}

void DetectStore::insert(const GeomObject& obj) {
  check_shape(obj);
  if (impl_->find(obj.id)) throw ContractViolation("DetectStore: duplicate id");
  ++stats_.inserts;
  impl_->insert(obj);
}

void DetectStore::erase(ObjectId id) {
  if (!impl_->find(id)) throw ContractViolation("DetectStore: unknown id");
  ++stats_.erases;
  impl_->erase(id);
}

void DetectStore::clear() { impl_->clear(); }

void DetectStore::assign(std::span<const GeomObject> objs) {
  for (const auto& o : objs) check_shape(o);
  stats_.inserts += objs.size();
  impl_->assign(objs);
}

std::optional<ObjectId> DetectStore::query_witness(const GeomObject& q) const {
  return query_witness(q, IdFilter::accept_all());
}

std::optional<ObjectId> DetectStore::query_witness(const GeomObject& q, IdFilter accept) const {
  check_shape(q);
  ++stats_.queries;
  return impl_->query(q, accept, stats_);
}

bool DetectStore::contains(ObjectId id) const { return impl_->find(id) != nullptr; }

std::size_t DetectStore::size() const { return impl_->size(); }

const GeomObject& DetectStore::object(ObjectId id) const {
  const GeomObject* o = impl_->find(id);
  if (!o) throw ContractViolation("DetectStore: unknown id");
  return *o;
}

void DetectStore::for_each(const std::function<void(const GeomObject&)>& fn) const {
  impl_->for_each(fn);
}

}  // namespace geodyn
