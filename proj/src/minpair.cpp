#include "geodyn/minpair.hpp"

#include <algorithm>

namespace geodyn {

namespace {
// Subtrees with fewer live objects than this are scanned instead of carrying
// their own DetectStore.
constexpr std::size_t kStoreMin = 128;
constexpr double kAlpha = 0.75;

bool key_less(long double w1, ObjectId i1, long double w2, ObjectId i2) {
  return w1 < w2 || (w1 == w2 && i1 < i2);
}
}  // namespace

// Search tree ordered by (weight, id); every large enough subtree keeps a
// DetectStore of its live objects. Deletions leave tombstones; unbalanced or
// tombstone-heavy subtrees are rebuilt.
class WeightTree {
 public:
  WeightTree(Backend backend, ShapeKind kind, int dim, WeightedStoreStats& stats)
      : backend_(backend), kind_(kind), dim_(dim), stats_(stats) {}

  void insert(const GeomObject& o, long double w) {
    auto& links = links_;
    links.clear();
    std::unique_ptr<Node>* link = &root_;
    while (*link) {
      Node* x = link->get();
      if (x->w == w && x->obj.id == o.id) break;
      links.push_back(link);
      link = key_less(w, o.id, x->w, x->obj.id) ? &x->left : &x->right;
    }
    stats_.nodes_touched += links.size() + 1;
    if (*link) {
      // A tombstone with the same key comes back to life.
      Node* x = link->get();
      x->alive = true;
      x->obj = o;
      links.push_back(link);
      for (auto* l : links) {
        Node* n = l->get();
        ++n->live;
        if (n->store) store_insert(*n, o);
      }
      --dead_;
      ++alive_;
      grow_stores(links);
      return;
    }
    *link = take_node();
    Node* fresh = link->get();
    fresh->obj = o;
    fresh->w = w;
    fresh->alive = true;
    fresh->size = fresh->live = 1;
    for (auto* l : links) {
      Node* n = l->get();
      ++n->size;
      ++n->live;
      if (n->store) store_insert(*n, o);
    }
    ++alive_;
    grow_stores(links);
    for (std::size_t i = 0; i < links.size(); ++i) {
      Node* n = links[i]->get();
      std::size_t big = std::max(size_of(n->left.get()), size_of(n->right.get()));
      if (big > kAlpha * n->size + 1) {
        rebuild(*links[i], std::vector<std::unique_ptr<Node>*>(links.begin(), links.begin() + i));
        break;
      }
    }
  }

  void erase(ObjectId id, long double w) {
    auto& path = path_;
    path.clear();
    Node* x = root_.get();
    while (x && !(x->w == w && x->obj.id == id)) {
      path.push_back(x);
      x = key_less(w, id, x->w, x->obj.id) ? x->left.get() : x->right.get();
    }
    if (!x || !x->alive) throw ContractViolation("WeightTree: erase of unknown key");
    path.push_back(x);
    stats_.nodes_touched += path.size();
    x->alive = false;
    for (Node* n : path) {
      --n->live;
      if (n->store) {
        n->store->erase(id);
        ++stats_.store_ops;
      }
    }
    --alive_;
    ++dead_;
    if (dead_ > alive_ + 16) rebuild(root_, {});
  }

  std::optional<Partner> min_partner(const GeomObject& q, ObjectId excl) const {
    const Node* hit = search(root_.get(), q, excl);
    if (!hit) return std::nullopt;
    return Partner{hit->obj.id, hit->w};
  }

  std::size_t alive() const { return alive_; }

 private:
  struct Node {
    GeomObject obj;
    long double w = 1;
    bool alive = true;
    std::size_t size = 0;  // nodes in subtree, tombstones included
    std::size_t live = 0;  // live nodes in subtree
    std::unique_ptr<DetectStore> store;
    std::unique_ptr<Node> left, right;
  };

  static std::size_t size_of(const Node* n) { return n ? n->size : 0; }

  // Weights only move during MWU, and every move is an erase plus an insert,
  // so nodes are recycled instead of going back to the allocator.
  std::unique_ptr<Node> take_node() {
    if (pool_.empty()) return std::make_unique<Node>();
    auto n = std::move(pool_.back());
    pool_.pop_back();
    return n;
  }

  void store_insert(Node& n, const GeomObject& o) {
    n.store->insert(o);
    ++stats_.store_ops;
  }

  static void collect(Node* n, std::vector<const GeomObject*>& out) {
    if (!n) return;
    collect(n->left.get(), out);
    if (n->alive) out.push_back(&n->obj);
    collect(n->right.get(), out);
  }

  void grow_stores(const std::vector<std::unique_ptr<Node>*>& links) {
    for (auto* l : links) {
      Node* n = l->get();
      if (n->store || n->live < kStoreMin) continue;
      std::vector<const GeomObject*> objs;
      collect(n, objs);
      std::vector<GeomObject> copy;
      copy.reserve(objs.size());
      for (auto* o : objs) copy.push_back(*o);
      n->store = std::make_unique<DetectStore>(backend_, kind_, dim_);
      n->store->assign(copy);
      stats_.store_ops += copy.size();
    }
  }

  void harvest(std::unique_ptr<Node>& n, std::vector<std::unique_ptr<Node>>& out) {
    if (!n) return;
    harvest(n->left, out);
    std::unique_ptr<Node> right = std::move(n->right);
    n->store.reset();
    if (n->alive)
      out.push_back(std::move(n));
    else
      pool_.push_back(std::move(n));
    harvest(right, out);
  }

  std::unique_ptr<Node> build(std::vector<std::unique_ptr<Node>>& nodes,
                              std::vector<GeomObject>& objs, std::size_t l, std::size_t r) {
    if (l >= r) return nullptr;
    std::size_t mid = (l + r) / 2;
    std::unique_ptr<Node> n = std::move(nodes[mid]);
    n->left = build(nodes, objs, l, mid);
    n->right = build(nodes, objs, mid + 1, r);
    n->size = n->live = r - l;
    if (r - l >= kStoreMin) {
      n->store = std::make_unique<DetectStore>(backend_, kind_, dim_);
      n->store->assign(std::span<const GeomObject>(objs.data() + l, r - l));
      stats_.store_ops += r - l;
    }
    return n;
  }

  // Rebuilds the subtree owned by link into a perfectly balanced one without
  // tombstones; ancestors (given root first) get their sizes fixed.
  void rebuild(std::unique_ptr<Node>& link, const std::vector<std::unique_ptr<Node>*>& ancestors) {
    ++stats_.subtree_rebuilds;
    std::size_t old_size = size_of(link.get());
    auto& nodes = nodes_;
    auto& objs = objs_;
    nodes.clear();
    objs.clear();
    harvest(link, nodes);
    for (auto& n : nodes) objs.push_back(n->obj);
    link = build(nodes, objs, 0, nodes.size());
    std::size_t removed = old_size - size_of(link.get());
    dead_ -= removed;
    for (auto* a : ancestors) (*a)->size -= removed;
  }

  bool hits(const Node* n, const GeomObject& q, ObjectId excl) const {
    return n->alive && n->obj.id != excl && intersects(n->obj, q);
  }

  const Node* scan(const Node* n, const GeomObject& q, ObjectId excl) const {
    if (!n) return nullptr;
    if (const Node* h = scan(n->left.get(), q, excl)) return h;
    if (hits(n, q, excl)) return n;
    return scan(n->right.get(), q, excl);
  }

  const Node* search(const Node* n, const GeomObject& q, ObjectId excl) const {
    if (!n || n->live == 0) return nullptr;
    if (!n->store) return scan(n, q, excl);
    auto other = [excl](ObjectId id) { return id != excl; };
    if (!n->store->query_witness(q, other)) return nullptr;
    if (const Node* h = search(n->left.get(), q, excl)) return h;
    if (hits(n, q, excl)) return n;
    return search(n->right.get(), q, excl);
  }

  Backend backend_;
  ShapeKind kind_;
  int dim_;
  WeightedStoreStats& stats_;
  std::unique_ptr<Node> root_;
  std::size_t alive_ = 0, dead_ = 0;
  // Scratch space reused across calls.
  std::vector<std::unique_ptr<Node>*> links_;
  std::vector<Node*> path_;
  std::vector<std::unique_ptr<Node>> nodes_, pool_;
  std::vector<GeomObject> objs_;
};

WeightedStore::WeightedStore(Backend backend, ShapeKind kind, int dim, bool bipartite)
    : backend_(backend), kind_(kind), dim_(kind == ShapeKind::Disk ? 2 : dim), bipartite_(bipartite) {
  trees_[0] = std::make_unique<WeightTree>(backend, kind, dim_, stats_);
  if (bipartite) trees_[1] = std::make_unique<WeightTree>(backend, kind, dim_, stats_);
}

WeightedStore::~WeightedStore() = default;

WeightTree& WeightedStore::tree_for(Side s) const {
  if (!bipartite_) return *trees_[0];
  return *trees_[s == Side::Left ? 0 : 1];
}

const WeightTree& WeightedStore::partner_tree(Side s) const {
  if (!bipartite_) return *trees_[0];
  return *trees_[s == Side::Left ? 1 : 0];
}

void WeightedStore::insert(const GeomObject& obj, long double w) {
  if (!(w > 0)) throw ContractViolation("WeightedStore: weight must be positive");
  if (items_.count(obj.id)) throw ContractViolation("WeightedStore: duplicate id");
  if (bipartite_ && obj.side == Side::None)
    throw ContractViolation("WeightedStore: bipartite store needs side tags");
  if (obj.kind() != kind_ || obj.dim() != dim_) throw ContractViolation("WeightedStore: shape mismatch");
  items_.emplace(obj.id, Item{obj, w, 0});
  if (w != 1) ++non_unit_;
  tree_for(obj.side).insert(obj, w);
  touch(obj.id);
}

void WeightedStore::erase(ObjectId id) {
  auto it = items_.find(id);
  if (it == items_.end()) throw ContractViolation("WeightedStore: unknown id");
  tree_for(it->second.obj.side).erase(id, it->second.w);
  if (it->second.w != 1) --non_unit_;
  items_.erase(it);
  compact_heap();
}

void WeightedStore::set_weight(ObjectId id, long double w) {
  if (!(w > 0)) throw ContractViolation("WeightedStore: weight must be positive");
  auto it = items_.find(id);
  if (it == items_.end()) throw ContractViolation("WeightedStore: unknown id");
  Item& item = it->second;
  if (item.w == w) return;
  WeightTree& t = tree_for(item.obj.side);
  t.erase(id, item.w);
  if (item.w != 1) --non_unit_;
  item.w = w;
  if (w != 1) ++non_unit_;
  t.insert(item.obj, w);
  touch(id);
}

std::optional<Partner> WeightedStore::min_partner(const GeomObject& q) const {
  if (bipartite_ && q.side == Side::None) {
    std::optional<Partner> best;
    for (const auto& t : trees_) {
      auto p = t->min_partner(q, q.id);
      if (p && (!best || key_less(p->weight, p->id, best->weight, best->id))) best = p;
    }
    return best;
  }
  return partner_tree(q.side).min_partner(q, q.id);
}

void WeightedStore::touch(ObjectId id) {
  Item& item = items_.at(id);
  item.version = ++clock_;
  auto p = min_partner(item.obj);
  if (p) {
    heap_.push(Entry{item.w + p->weight, std::min(id, p->id), std::max(id, p->id), id, item.version});
    ++stats_.heap_pushes;
  }
  compact_heap();
}

void WeightedStore::compact_heap() {
  if (heap_.size() <= 4 * items_.size() + 64) return;
  std::vector<Entry> keep;
  while (!heap_.empty()) {
    const Entry& e = heap_.top();
    auto it = items_.find(e.owner);
    if (it != items_.end() && it->second.version == e.version) keep.push_back(e);
    heap_.pop();
  }
  heap_ = decltype(heap_)(std::greater<Entry>(), std::move(keep));
}

std::optional<MinPair> WeightedStore::min_pair() {
  while (!heap_.empty()) {
    Entry e = heap_.top();
    auto it = items_.find(e.owner);
    if (it == items_.end() || it->second.version != e.version) {
      heap_.pop();
      continue;
    }
    ++stats_.heap_validations;
    const Item& owner = it->second;
    auto p = min_partner(owner.obj);
    if (!p) {
      heap_.pop();
      continue;
    }
    Entry fresh{owner.w + p->weight, std::min(e.owner, p->id), std::max(e.owner, p->id), e.owner,
                e.version};
    if (fresh.sum == e.sum && fresh.lo == e.lo && fresh.hi == e.hi) return MinPair{e.lo, e.hi, e.sum};
    heap_.pop();
    heap_.push(fresh);
    ++stats_.heap_pushes;
  }
  return std::nullopt;
}

long double WeightedStore::weight(ObjectId id) const {
  auto it = items_.find(id);
  if (it == items_.end()) throw ContractViolation("WeightedStore: unknown id");
  return it->second.w;
}

const GeomObject& WeightedStore::object(ObjectId id) const {
  auto it = items_.find(id);
  if (it == items_.end()) throw ContractViolation("WeightedStore: unknown id");
  return it->second.obj;
}

std::vector<ObjectId> WeightedStore::ids() const {
  std::vector<ObjectId> out;
  out.reserve(items_.size());
  for (const auto& [id, item] : items_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

const WeightedStoreStats& WeightedStore::stats() const { return stats_; }

}  // namespace geodyn
