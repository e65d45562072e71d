#include "geodyn/general_matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "aug_engine.hpp"

namespace geodyn {

std::size_t color_family_size(int n, int ell) {
  double m = std::ldexp(1.0, ell) * (ell + 2) * std::log(std::max(n, 2));
  return static_cast<std::size_t>(std::ceil(m - 1e-9));
}

namespace {

std::vector<std::uint32_t> masks_up_to(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::popcount(m) <= k) out.push_back(m);
  return out;
}

}  // namespace

bool separates_all(const ColorFamily& f) {
  if (f.n > 20) throw ContractViolation("separates_all: n must be <= 20");
  std::vector<std::uint32_t> zs(f.size(), 0);
  for (std::size_t z = 0; z < f.size(); ++z)
    for (int i = 0; i < f.n; ++i)
      if (f.in(z, i)) zs[z] |= 1u << i;
  auto small = masks_up_to(f.n, f.ell);
  for (std::uint32_t a : small)
    for (std::uint32_t b : small) {
      if ((a & b) || std::popcount(a) + std::popcount(b) > f.ell) continue;
      bool ok = std::any_of(zs.begin(), zs.end(),
                            [&](std::uint32_t z) { return (z & a) == a && (z & b) == 0; });
      if (!ok) return false;
    }
  return true;
}

ColorFamily build_color_family(int n, int ell, std::uint64_t seed) {
  if (n < 1 || ell < 1) throw ContractViolation("build_color_family: need n >= 1 and ell >= 1");
  const bool check = n <= 16 && ell <= 4;
  std::mt19937_64 reseed(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::uint64_t s = attempt == 0 ? seed : reseed();
    ColorFamily f;
    f.n = n;
    f.ell = ell;
    f.seed = s;
    f.count_ = color_family_size(n, ell);
    f.words_ = (static_cast<std::size_t>(n) + 63) / 64;
    f.bits_.resize(f.count_ * f.words_);
    std::mt19937_64 rng(s);
    for (auto& w : f.bits_) w = rng();
    if (n % 64)
      for (std::size_t z = 0; z < f.count_; ++z)
        f.bits_[z * f.words_ + f.words_ - 1] &= (std::uint64_t{1} << (n % 64)) - 1;
    if (!check) return f;
    if (separates_all(f)) {
      f.verified = true;
      return f;
    }
  }
  throw std::runtime_error("color family failed separation after 8 draws");
}

// ---------------------------------------------------------------------------

GeneralMatcher::GeneralMatcher(Backend backend, ShapeKind kind, int dim, std::uint64_t seed)
    : backend_(backend), kind_(kind), dim_(dim), seed_(seed), all_(backend, kind, dim) {
  for (int i = 0; i < n_; ++i) free_labels_.insert(i);
}

const GeomObject& GeneralMatcher::object(ObjectId id) const {
  auto it = objs_.find(id);
  if (it == objs_.end()) throw ContractViolation("unknown id " + std::to_string(id));
  return it->second;
}

void GeneralMatcher::relabel(int new_n) {
  n_ = new_n;
  families_.clear();
  labels_.clear();
  free_labels_.clear();
  std::vector<ObjectId> ids;
  for (const auto& [id, o] : objs_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  int next = 0;
  for (ObjectId id : ids) labels_[id] = next++;
  for (int i = next; i < n_; ++i) free_labels_.insert(i);
}

void GeneralMatcher::insert(const GeomObject& obj) {
  if (obj.side != Side::None) throw ContractViolation("general matching takes untagged objects");
  if (!objs_.emplace(obj.id, obj).second)
    throw ContractViolation("duplicate id " + std::to_string(obj.id));
  all_.insert(obj);
  if (static_cast<int>(objs_.size()) > n_) {
    objs_.erase(obj.id);
    relabel(2 * n_);
    objs_.emplace(obj.id, obj);
    ++stats_.relabels_up;
  }
  labels_[obj.id] = *free_labels_.begin();
  free_labels_.erase(free_labels_.begin());
}

void GeneralMatcher::erase(ObjectId id) {
  object(id);
  all_.erase(id);
  objs_.erase(id);
  free_labels_.insert(labels_.at(id));
  labels_.erase(id);
  if (n_ > 4 && static_cast<int>(objs_.size()) < n_ / 4) {
    relabel(n_ / 2);
    ++stats_.relabels_down;
  }
}

const ColorFamily& GeneralMatcher::family(int ell) {
  auto it = families_.find(ell);
  if (it != families_.end()) return it->second;
  ++stats_.families_built;
  std::uint64_t s = seed_ * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(n_) * 131 + ell;
  return families_.emplace(ell, build_color_family(n_, ell, s)).first->second;
}

// One round: the exposed store is all_ minus the matched vertices, the matched
// vertices sit in their own store, and each Z restricts both through filters.
// Per-layer deletions are epoch stamps so a new Z starts with full layers.
struct GeneralPolicy {
  GeneralMatcher& m;
  const Mates& mates;
  const ColorFamily& fam;
  DetectStore matched;
  std::vector<ObjectId> removed;
  std::vector<ObjectId> matched_ids;
  std::unordered_set<ObjectId> used;
  std::vector<std::unordered_map<ObjectId, std::uint32_t>> killed;
  std::size_t z = 0;
  std::uint32_t epoch = 0;

  GeneralPolicy(GeneralMatcher& matcher, const Mates& mt, const ColorFamily& f, int ell)
      : m(matcher), mates(mt), fam(f), matched(m.backend_, m.kind_, m.dim_), killed(ell) {
    std::vector<GeomObject> objs;
    for (const auto& [a, b] : mates) {
      m.all_.erase(a);
      removed.push_back(a);
      matched_ids.push_back(a);
      objs.push_back(m.object(a));
    }
    std::sort(matched_ids.begin(), matched_ids.end());
    matched.assign(objs);
    m.stats_.aug.store_ops += 2 * removed.size();
  }

  ~GeneralPolicy() {
    for (ObjectId id : removed) m.all_.insert(m.object(id));
    m.stats_.aug.store_ops += removed.size();
  }

  void next_z(std::size_t zi) {
    z = zi;
    ++epoch;
  }

  bool in_z(ObjectId id) const { return fam.in(z, m.labels_.at(id)); }
  bool candidate(ObjectId id) const {
    return !used.count(id) && in_z(id) && !in_z(mates.at(id));
  }

  ObjectId mate(ObjectId id) const { return mates.at(id); }
  const GeomObject& object(ObjectId id) const { return m.object(id); }
  std::vector<ObjectId> layer_one() const {
    std::vector<ObjectId> out;
    for (ObjectId id : matched_ids)
      if (candidate(id)) out.push_back(id);
    return out;
  }
  bool in_layer(int i, ObjectId id) const {
    if (!candidate(id)) return false;
    auto it = killed[i - 1].find(id);
    return it == killed[i - 1].end() || it->second != epoch;
  }
  std::optional<ObjectId> find_layer(int i, const GeomObject& q, IdFilter f) {
    auto accept = [&](ObjectId id) { return in_layer(i, id) && f(id); };
    return matched.query_witness(q, IdFilter(accept));
  }
  void kill(int i, ObjectId id) { killed[i - 1][id] = epoch; }
  std::optional<ObjectId> find_exposed(const GeomObject& q, bool u_end) {
    auto accept = [&](ObjectId id) { return !used.count(id) && in_z(id) == u_end; };
    return m.all_.query_witness(q, IdFilter(accept));
  }
  void take(const std::vector<ObjectId>& path) { used.insert(path.begin(), path.end()); }

  // Exact search for an augmenting path with 2*ell+1 edges avoiding `used`.
  // Returns true when the node budget runs out.
  class Precheck {
   public:
    Precheck(GeneralPolicy& p, int ell) : p_(p), ell_(ell) {}

    bool any() {
      budget_ = GeneralMatcher::kPrecheckBudget;
      std::vector<ObjectId> exposed;
      p_.m.all_.for_each([&](const GeomObject& o) { exposed.push_back(o.id); });
      std::sort(exposed.begin(), exposed.end());
      for (ObjectId a : exposed) {
        if (p_.used.count(a)) continue;
        path_ = {a};
        for (ObjectId u : matched_nbrs(a)) {
          if (p_.used.count(u)) continue;
          path_.push_back(u);
          path_.push_back(p_.mate(u));
          bool hit = walk(1);
          path_.resize(1);
          if (hit) return true;
        }
      }
      return false;
    }

    bool exhausted() const { return budget_ == 0; }

   private:
    bool walk(int depth) {
      if (budget_ == 0) return true;
      --budget_;
      ObjectId v = path_.back();
      if (depth == ell_) {
        for (ObjectId b : exposed_nbrs(v))
          if (b != path_.front() && !p_.used.count(b)) return true;
        return false;
      }
      for (ObjectId u : matched_nbrs(v)) {
        if (p_.used.count(u) || std::find(path_.begin(), path_.end(), u) != path_.end()) continue;
        path_.push_back(u);
        path_.push_back(p_.mate(u));
        bool hit = walk(depth + 1);
        path_.pop_back();
        path_.pop_back();
        if (hit) return true;
      }
      return false;
    }

    static std::vector<ObjectId> enumerate(const DetectStore& s, const GeomObject& q) {
      std::vector<ObjectId> out;
      std::unordered_set<ObjectId> got{q.id};
      auto accept = [&](ObjectId id) { return !got.count(id); };
      while (auto w = s.query_witness(q, IdFilter(accept))) {
        got.insert(*w);
        out.push_back(*w);
      }
      std::sort(out.begin(), out.end());
      return out;
    }

    const std::vector<ObjectId>& matched_nbrs(ObjectId v) {
      auto it = mcache_.find(v);
      if (it == mcache_.end()) it = mcache_.emplace(v, enumerate(p_.matched, p_.object(v))).first;
      return it->second;
    }
    const std::vector<ObjectId>& exposed_nbrs(ObjectId v) {
      auto it = xcache_.find(v);
      if (it == xcache_.end()) it = xcache_.emplace(v, enumerate(p_.m.all_, p_.object(v))).first;
      return it->second;
    }

    GeneralPolicy& p_;
    int ell_;
    std::uint64_t budget_ = 0;
    std::vector<ObjectId> path_;
    std::unordered_map<ObjectId, std::vector<ObjectId>> mcache_, xcache_;
  };
};

std::vector<std::vector<ObjectId>> GeneralMatcher::maximal_aug_paths(const Mates& mates, int ell) {
  if (ell < 1) throw ContractViolation("maximal_aug_paths: ell must be >= 1");
  const ColorFamily& fam = family(2 * ell + 2);
  GeneralPolicy policy(*this, mates, fam, ell);
  GeneralPolicy::Precheck pre(policy, ell);
  auto open = [&] {
    ++stats_.prechecks;
    bool hit = pre.any();
    if (pre.exhausted()) ++stats_.precheck_budget_hits;
    return hit;
  };
  std::vector<std::vector<ObjectId>> out;
  if (!open()) return out;
  for (std::size_t z = 0; z < fam.size(); ++z) {
    policy.next_z(z);
    ++stats_.z_runs;
    auto found = detail::AugSearch<GeneralPolicy>(policy, ell, stats_.aug).run();
    if (found.empty()) continue;
    ++stats_.z_productive;
    for (auto& p : found) out.push_back(std::move(p));
    if (!open()) break;
  }
  return out;
}

void GeneralMatcher::improve(Mates& mates, int rounds, const RoundHook& hook) {
  for (int ell = 1; ell <= rounds; ++ell) {
    for (const auto& p : maximal_aug_paths(mates, ell)) detail::augment(mates, p);
    ++stats_.aug.iterations;
    if (hook) hook(ell, mates);
  }
}

McmResult approx_mcm_general(std::span<const GeomObject> objs, double eps, Backend backend,
                             const RoundHook& hook, GeneralStats* stats) {
  McmResult res;
  int rounds = rounds_for(eps);
  if (objs.empty()) return res;
  ShapeKind kind = objs[0].kind();
  int dim = objs[0].dim();
  MaximalMatching m0(backend, kind, dim, false);
  GeneralMatcher engine(backend, kind, dim);
  for (const auto& o : objs) {
    m0.insert(o);
    engine.insert(o);
  }
  Mates mates = m0.mates();
  engine.improve(mates, rounds, hook);
  res.matching = edges_of(mates);
  res.stats = engine.stats().aug;
  if (stats) *stats = engine.stats();
  return res;
}

McmResult approx_mcm_general(std::span<const GeomObject> objs, double eps) {
  Backend b = objs.empty() ? Backend::NaiveScan : default_backend(objs[0].kind());
  return approx_mcm_general(objs, eps, b);
}

// ---------------------------------------------------------------------------

DynamicGeneralMatching::DynamicGeneralMatching(Backend backend, ShapeKind kind, int dim,
                                               double eps, std::uint64_t seed)
    : eps_(eps), m0_(backend, kind, dim, false), engine_(backend, kind, dim, seed) {
  rounds_for(eps);
}

void DynamicGeneralMatching::insert(const GeomObject& obj) {
  m0_.insert(obj);
  engine_.insert(obj);
  tick();
}

void DynamicGeneralMatching::erase(ObjectId id) {
  m0_.erase(id);
  engine_.erase(id);
  if (auto it = mates_.find(id); it != mates_.end()) {
    mates_.erase(it->second);
    mates_.erase(it);
  }
  tick();
}

void DynamicGeneralMatching::tick() {
  ++stats_.updates;
  if (++in_phase_ >= stats_.phase_budget) rebuild();
}

void DynamicGeneralMatching::rebuild() {
  mates_ = m0_.mates();
  engine_.improve(mates_, rounds_for(eps_));
  ++stats_.rebuilds;
  in_phase_ = 0;
  double b = std::max<double>(1, static_cast<double>(m0_.size()));
  stats_.phase_budget = static_cast<std::uint64_t>(std::ceil(eps_ * b - 1e-9));
  stats_.phase_budget = std::max<std::uint64_t>(stats_.phase_budget, 1);
}

}  // namespace geodyn
