#include "geodyn/matching.hpp"

#include <algorithm>
#include <cmath>

#include "aug_engine.hpp"

namespace geodyn {

namespace {

int side_index(Side s) { return s == Side::Right ? 1 : 0; }

}  // namespace

std::vector<MatchEdge> edges_of(const Mates& mates) {
  std::vector<MatchEdge> out;
  for (const auto& [a, b] : mates)
    if (a < b) out.push_back({a, b});
  std::sort(out.begin(), out.end(),
            [](const MatchEdge& x, const MatchEdge& y) { return x.a < y.a; });
  return out;
}

int rounds_for(double eps) {
  if (!(eps > 0 && eps <= 1)) throw ContractViolation("eps must be in (0, 1]");
  return static_cast<int>(std::ceil(1.0 / eps - 1e-9));
}

// ---------------------------------------------------------------------------

MaximalMatching::MaximalMatching(Backend backend, ShapeKind kind, int dim, bool bipartite)
    : bipartite_(bipartite) {
  free_.emplace_back(backend, kind, dim);
  if (bipartite) free_.emplace_back(backend, kind, dim);
}

std::uint64_t MaximalMatching::work() const {
  std::uint64_t w = store_ops_;
  for (const auto& st : free_) w += st.stats().queries + st.stats().cells_inspected;
  return w;
}

DetectStore& MaximalMatching::parking(Side s) { return free_[bipartite_ ? side_index(s) : 0]; }

DetectStore& MaximalMatching::partners_for(Side s) {
  return free_[bipartite_ ? side_index(opposite(s)) : 0];
}

const GeomObject& MaximalMatching::object(ObjectId id) const {
  auto it = objs_.find(id);
  if (it == objs_.end()) throw ContractViolation("unknown id " + std::to_string(id));
  return it->second;
}

std::optional<ObjectId> MaximalMatching::mate(ObjectId id) const {
  auto it = mate_.find(id);
  if (it == mate_.end()) return std::nullopt;
  return it->second;
}

void MaximalMatching::insert(const GeomObject& obj) {
  if (bipartite_ != (obj.side != Side::None))
    throw ContractViolation(bipartite_ ? "bipartite matching needs side tags"
                                       : "side tags given to a one-sided matching");
  if (!objs_.emplace(obj.id, obj).second)
    throw ContractViolation("duplicate id " + std::to_string(obj.id));
  place(obj.id);
}

void MaximalMatching::place(ObjectId id) {
  const GeomObject& o = objs_.at(id);
  DetectStore& pool = partners_for(o.side);
  if (auto w = pool.query_witness(o)) {
    pool.erase(*w);
    ++store_ops_;
    mate_[id] = *w;
    mate_[*w] = id;
  } else {
    parking(o.side).insert(o);
    ++store_ops_;
  }
}

void MaximalMatching::erase(ObjectId id) {
  const GeomObject& o = object(id);
  auto it = mate_.find(id);
  if (it == mate_.end()) {
    parking(o.side).erase(id);
    ++store_ops_;
    objs_.erase(id);
    return;
  }
  ObjectId v = it->second;
  mate_.erase(id);
  mate_.erase(v);
  objs_.erase(id);
  place(v);
}

// ---------------------------------------------------------------------------

BipartiteMatcher::BipartiteMatcher(Backend backend, ShapeKind kind, int dim)
    : backend_(backend),
      kind_(kind),
      dim_(dim),
      all_{DetectStore(backend, kind, dim), DetectStore(backend, kind, dim)} {}

void BipartiteMatcher::insert(const GeomObject& obj) {
  if (obj.side == Side::None) throw ContractViolation("bipartite matching needs side tags");
  if (!objs_.emplace(obj.id, obj).second)
    throw ContractViolation("duplicate id " + std::to_string(obj.id));
  all_[side_index(obj.side)].insert(obj);
}

void BipartiteMatcher::erase(ObjectId id) {
  auto it = objs_.find(id);
  if (it == objs_.end()) throw ContractViolation("unknown id " + std::to_string(id));
  all_[side_index(it->second.side)].erase(id);
  objs_.erase(it);
}

const GeomObject& BipartiteMatcher::object(ObjectId id) const {
  auto it = objs_.find(id);
  if (it == objs_.end()) throw ContractViolation("unknown id " + std::to_string(id));
  return it->second;
}

// The u's of every path are Left vertices, so S_1..S_ell hold matched Left
// vertices and each path is found in exactly one orientation.
struct BipartitePolicy {
  BipartiteMatcher& m;
  const Mates& mates;
  std::vector<DetectStore> layers;
  std::vector<ObjectId> removed;
  std::vector<ObjectId> first;

  BipartitePolicy(BipartiteMatcher& matcher, const Mates& mt, int ell) : m(matcher), mates(mt) {
    std::vector<GeomObject> left;
    for (const auto& [a, b] : mates) {
      const GeomObject& o = m.object(a);
      m.all_[side_index(o.side)].erase(a);
      removed.push_back(a);
      if (o.side == Side::Left) {
        left.push_back(o);
        first.push_back(a);
      }
    }
    std::sort(first.begin(), first.end());
    for (int i = 0; i < ell; ++i) {
      layers.emplace_back(m.backend_, m.kind_, m.dim_);
      layers.back().assign(left);
    }
    m.stats_.store_ops += removed.size() + static_cast<std::uint64_t>(ell) * left.size();
  }

  ~BipartitePolicy() {
    for (ObjectId id : removed) {
      const GeomObject& o = m.object(id);
      m.all_[side_index(o.side)].insert(o);
    }
    m.stats_.store_ops += removed.size();
  }

  ObjectId mate(ObjectId id) const { return mates.at(id); }
  const GeomObject& object(ObjectId id) const { return m.object(id); }
  std::vector<ObjectId> layer_one() const { return first; }
  bool in_layer(int i, ObjectId id) const { return layers[i - 1].contains(id); }
  std::optional<ObjectId> find_layer(int i, const GeomObject& q, IdFilter f) {
    return layers[i - 1].query_witness(q, f);
  }
  void kill(int i, ObjectId id) {
    if (layers[i - 1].contains(id)) {
      layers[i - 1].erase(id);
      ++m.stats_.store_ops;
    }
  }
  std::optional<ObjectId> find_exposed(const GeomObject& q, bool u_end) {
    return m.all_[u_end ? 0 : 1].query_witness(q);
  }
  void take(const std::vector<ObjectId>& path) {
    for (ObjectId end : {path.front(), path.back()}) {
      m.all_[side_index(m.object(end).side)].erase(end);
      removed.push_back(end);
      ++m.stats_.store_ops;
    }
    for (std::size_t k = 1; k + 1 < path.size(); k += 2)
      for (std::size_t i = 1; i <= layers.size(); ++i) kill(static_cast<int>(i), path[k]);
  }
};

std::vector<std::vector<ObjectId>> BipartiteMatcher::maximal_aug_paths(const Mates& mates,
                                                                       int ell) {
  if (ell < 1) throw ContractViolation("maximal_aug_paths: ell must be >= 1");
  BipartitePolicy policy(*this, mates, ell);
  return detail::AugSearch<BipartitePolicy>(policy, ell, stats_).run();
}

void BipartiteMatcher::improve(Mates& mates, int rounds, const RoundHook& hook) {
  for (int ell = 1; ell <= rounds; ++ell) {
    for (const auto& p : maximal_aug_paths(mates, ell)) detail::augment(mates, p);
    ++stats_.iterations;
    if (hook) hook(ell, mates);
  }
}

McmResult approx_mcm(std::span<const GeomObject> objs, double eps, Backend backend,
                     const RoundHook& hook) {
  McmResult res;
  int rounds = rounds_for(eps);
  if (objs.empty()) return res;
  ShapeKind kind = objs[0].kind();
  int dim = objs[0].dim();
  MaximalMatching m0(backend, kind, dim, true);
  BipartiteMatcher engine(backend, kind, dim);
  for (const auto& o : objs) {
    m0.insert(o);
    engine.insert(o);
  }
  Mates mates = m0.mates();
  engine.improve(mates, rounds, hook);
  res.matching = edges_of(mates);
  res.stats = engine.stats();
  return res;
}

McmResult approx_mcm(std::span<const GeomObject> objs, double eps) {
  Backend b = objs.empty() ? Backend::NaiveScan : default_backend(objs[0].kind());
  return approx_mcm(objs, eps, b);
}

// ---------------------------------------------------------------------------

DynamicMatching::DynamicMatching(Backend backend, ShapeKind kind, int dim, double eps)
    : eps_(eps), m0_(backend, kind, dim, true), engine_(backend, kind, dim) {
  rounds_for(eps);
}

void DynamicMatching::insert(const GeomObject& obj) {
  m0_.insert(obj);
  engine_.insert(obj);
  tick();
}

void DynamicMatching::erase(ObjectId id) {
  m0_.erase(id);
  engine_.erase(id);
  if (auto it = mates_.find(id); it != mates_.end()) {
    mates_.erase(it->second);
    mates_.erase(it);
  }
  tick();
}

void DynamicMatching::tick() {
  ++stats_.updates;
  if (++in_phase_ >= stats_.phase_budget) rebuild();
}

void DynamicMatching::rebuild() {
  mates_ = m0_.mates();
  engine_.improve(mates_, rounds_for(eps_));
  ++stats_.rebuilds;
  in_phase_ = 0;
  double b = std::max<double>(1, static_cast<double>(m0_.size()));
  stats_.phase_budget = static_cast<std::uint64_t>(std::ceil(eps_ * b - 1e-9));
  stats_.phase_budget = std::max<std::uint64_t>(stats_.phase_budget, 1);
}

}  // namespace geodyn
