#include "geodyn/oracles.hpp"

#include <algorithm>
#include <bit>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <queue>
#include <unordered_set>

namespace geodyn::oracles {

void ExplicitGraph::finish() {
  index_.clear();
  for (int i = 0; i < n(); ++i) index_[ids[i]] = i;
  bipartite = !sides.empty() && std::all_of(sides.begin(), sides.end(),
                                            [](Side s) { return s != Side::None; });
}

ExplicitGraph ExplicitGraph::from_objects(std::span<const GeomObject> objs) {
  ExplicitGraph g;
  int n = static_cast<int>(objs.size());
  g.adj.resize(n);
  for (const auto& o : objs) {
    g.ids.push_back(o.id);
    g.sides.push_back(o.side);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacent(objs[i], objs[j])) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
      }
  g.finish();
  return g;
}

ExplicitGraph ExplicitGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                                        const std::vector<Side>& sides) {
  ExplicitGraph g;
  g.adj.resize(n);
  for (int i = 0; i < n; ++i) g.ids.push_back(static_cast<ObjectId>(i));
  g.sides = sides;
  for (auto [u, v] : edges) {
    if (u == v) continue;
    if (std::find(g.adj[u].begin(), g.adj[u].end(), v) != g.adj[u].end()) continue;
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  g.finish();
  return g;
}

std::size_t ExplicitGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& a : adj) m += a.size();
  return m / 2;
}

int ExplicitGraph::index_of(ObjectId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ContractViolation("ExplicitGraph: unknown id");
  return it->second;
}

// ---------------------------------------------------------------------------
// Exact vertex cover.

namespace {

class Bits {
 public:
  explicit Bits(int n = 0) : w_((n + 63) / 64, 0) {}
  void set(int i) { w_[i >> 6] |= 1ULL << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  int count_and(const Bits& o) const {
    int c = 0;
    for (size_t k = 0; k < w_.size(); ++k) c += std::popcount(w_[k] & o.w_[k]);
    return c;
  }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  template <class F>
  void each(F&& f) const {
    for (size_t k = 0; k < w_.size(); ++k) {
      auto x = w_[k];
      while (x) {
        f(static_cast<int>(k * 64 + std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }
  template <class F>
  void each_and(const Bits& o, F&& f) const {
    for (size_t k = 0; k < w_.size(); ++k) {
      auto x = w_[k] & o.w_[k];
      while (x) {
        f(static_cast<int>(k * 64 + std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }
  void and_not(const Bits& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
  }
  int first() const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<int>(k * 64 + std::countr_zero(w_[k]));
    return -1;
  }

 private:
  std::vector<std::uint64_t> w_;
};

class MvcSolver {
 public:
  MvcSolver(const ExplicitGraph& g, std::uint64_t budget) : n_(g.n()), budget_(budget) {
    adj_.assign(n_, Bits(n_));
    for (int v = 0; v < n_; ++v)
      for (int u : g.adj[v]) adj_[v].set(u);
  }

  std::vector<int> solve() {
    Bits all(n_);
    for (int v = 0; v < n_; ++v) all.set(v);
    return exact(all);
  }

 private:
  // Applies degree-0 and degree-1 rules; forced cover vertices go to out.
  void reduce(Bits& act, std::vector<int>& out) const {
    bool changed = true;
    while (changed) {
      changed = false;
      act.each([&](int v) {
        if (!act.test(v)) return;
        int d = adj_[v].count_and(act);
        if (d == 0) {
          act.reset(v);
          changed = true;
        } else if (d == 1) {
          int u = (adj_[v] & act).first();
          out.push_back(u);
          act.reset(u);
          act.reset(v);
          changed = true;
        }
      });
    }
  }

  std::vector<Bits> components(const Bits& act) const {
    std::vector<Bits> comps;
    Bits left = act;
    while (left.any()) {
      Bits comp(n_);
      std::vector<int> stack{left.first()};
      comp.set(stack.back());
      left.reset(stack.back());
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        (adj_[v] & left).each([&](int u) {
          comp.set(u);
          left.reset(u);
          stack.push_back(u);
        });
      }
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  int lower_bound(const Bits& act) const {
    // Disjoint cliques each need all but one vertex.
    Bits open = act;
    int clique_lb = 0;
    while (open.any()) {
      int v = open.first();
      open.reset(v);
      Bits cand = adj_[v] & open;
      int size = 1;
      while (cand.any()) {
        int u = cand.first();
        open.reset(u);
        cand.reset(u);
        cand = cand & adj_[u];
        ++size;
      }
      clique_lb += size - 1;
    }
    // A greedy matching needs one endpoint per edge.
    Bits free = act;
    int match_lb = 0;
    act.each([&](int v) {
      if (!free.test(v)) return;
      int u = (adj_[v] & free).first();
      if (u >= 0) {
        free.reset(u);
        free.reset(v);
        ++match_lb;
      }
    });
    return std::max(clique_lb, match_lb);
  }

  std::vector<int> greedy(Bits act) const {
    std::vector<int> cover;
    while (true) {
      int best = -1, bd = 0;
      act.each([&](int v) {
        int d = adj_[v].count_and(act);
        if (d > bd) {
          bd = d;
          best = v;
        }
      });
      if (best < 0) break;
      cover.push_back(best);
      act.reset(best);
    }
    return cover;
  }

  // Exact cover of G[act].
  std::vector<int> exact(Bits act) {
    std::vector<int> forced;
    reduce(act, forced);
    if (!act.any()) return forced;
    auto comps = components(act);
    if (comps.size() > 1) {
      for (auto& c : comps) {
        auto part = exact(c);
        forced.insert(forced.end(), part.begin(), part.end());
      }
      return forced;
    }
    best_stack_.push_back(greedy(act));
    std::vector<int> chosen;
    branch(act, chosen);
    auto best = std::move(best_stack_.back());
    best_stack_.pop_back();
    forced.insert(forced.end(), best.begin(), best.end());
    return forced;
  }

  void branch(Bits act, std::vector<int>& chosen) {
    if (++nodes_ > budget_) throw OracleBudgetExceeded("exact_mvc: node budget exhausted");
    auto& best = best_stack_.back();
    std::size_t mark = chosen.size();
    reduce(act, chosen);
    if (!act.any()) {
      if (chosen.size() < best.size()) best = chosen;
      chosen.resize(mark);
      return;
    }
    if (chosen.size() + lower_bound(act) >= best.size()) {
      chosen.resize(mark);
      return;
    }
    auto comps = components(act);
    if (comps.size() > 1) {
      std::vector<int> total = chosen;
      for (auto& c : comps) {
        auto part = exact(c);
        total.insert(total.end(), part.begin(), part.end());
      }
      if (total.size() < best_stack_.back().size()) best_stack_.back() = std::move(total);
      chosen.resize(mark);
      return;
    }
    int v = -1, vd = -1;
    act.each([&](int x) {
      int d = adj_[x].count_and(act);
      if (d > vd) {
        vd = d;
        v = x;
      }
    });
    // v in the cover.
    {
      Bits next = act;
      next.reset(v);
      chosen.push_back(v);
      branch(next, chosen);
      chosen.pop_back();
    }
    // All of N(v) in the cover.
    {
      Bits next = act;
      Bits nb = adj_[v] & act;
      std::size_t before = chosen.size();
      nb.each([&](int u) { chosen.push_back(u); });
      next.and_not(nb);
      next.reset(v);
      branch(next, chosen);
      chosen.resize(before);
    }
    chosen.resize(mark);
  }

  int n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<Bits> adj_;
  std::vector<std::vector<int>> best_stack_;
};

// Hopcroft-Karp over left 0..nl-1 and right 0..nr-1. Returns mate of each left vertex.
std::vector<int> hopcroft_karp(int nl, int nr, const std::vector<std::vector<int>>& adj) {
  const int kInf = 1 << 29;
  std::vector<int> ml(nl, -1), mr(nr, -1), dist(nl);
  auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int u = 0; u < nl; ++u) {
      if (ml[u] < 0) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        int w = mr[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };
  std::vector<std::size_t> it(nl);
  auto dfs = [&](auto&& self, int u) -> bool {
    for (; it[u] < adj[u].size(); ++it[u]) {
      int v = adj[u][it[u]];
      int w = mr[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && self(self, w))) {
        ml[u] = v;
        mr[v] = u;
        ++it[u];
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  };
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int u = 0; u < nl; ++u)
      if (ml[u] < 0) dfs(dfs, u);
  }
  return ml;
}

}  // namespace

std::vector<ObjectId> exact_mvc(const ExplicitGraph& g, std::uint64_t node_budget) {
  MvcSolver solver(g, node_budget);
  std::vector<ObjectId> out;
  for (int v : solver.solve()) out.push_back(g.ids[v]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IdPair> exact_bipartite_mcm(const ExplicitGraph& g) {
  if (!g.bipartite) throw ContractViolation("exact_bipartite_mcm: graph is not two-sided");
  std::vector<int> lidx(g.n(), -1), ridx(g.n(), -1), lv, rv;
  for (int v = 0; v < g.n(); ++v) {
    if (g.sides[v] == Side::Left) {
      lidx[v] = static_cast<int>(lv.size());
      lv.push_back(v);
    } else {
      ridx[v] = static_cast<int>(rv.size());
      rv.push_back(v);
    }
  }
  std::vector<std::vector<int>> adj(lv.size());
  for (std::size_t i = 0; i < lv.size(); ++i)
    for (int u : g.adj[lv[i]]) {
      if (g.sides[u] == Side::Left) throw ContractViolation("exact_bipartite_mcm: same-side edge");
      adj[i].push_back(ridx[u]);
    }
  auto ml = hopcroft_karp(static_cast<int>(lv.size()), static_cast<int>(rv.size()), adj);
  std::vector<IdPair> out;
  for (std::size_t i = 0; i < lv.size(); ++i)
    if (ml[i] >= 0) out.emplace_back(g.ids[lv[i]], g.ids[rv[ml[i]]]);
  return out;
}

FractionalVc exact_fractional_vc(const ExplicitGraph& g) {
  int n = g.n();
  // Left copy v' and right copy v''; edge uv gives u'v'' and v'u''.
  auto ml = hopcroft_karp(n, n, g.adj);
  std::vector<int> mr(n, -1);
  for (int u = 0; u < n; ++u)
    if (ml[u] >= 0) mr[ml[u]] = u;
  // Koenig: Z = vertices reachable from free left vertices by alternating paths.
  std::vector<char> zl(n, 0), zr(n, 0);
  std::queue<int> q;
  for (int u = 0; u < n; ++u)
    if (ml[u] < 0) {
      zl[u] = 1;
      q.push(u);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.adj[u]) {
      if (zr[v]) continue;
      zr[v] = 1;
      int w = mr[v];
      if (w >= 0 && !zl[w]) {
        zl[w] = 1;
        q.push(w);
      }
    }
  }
  FractionalVc out;
  out.x.resize(n);
  int cover = 0;
  for (int v = 0; v < n; ++v) {
    int a = zl[v] ? 0 : 1;  // left copy in cover iff not in Z
    int b = zr[v] ? 1 : 0;  // right copy in cover iff in Z
    cover += a + b;
    out.x[v] = 0.5 * (a + b);
  }
  out.value = 0.5 * cover;
  return out;
}

std::vector<IdPair> exact_mcm_small(const ExplicitGraph& g) {
  int n = g.n();
  if (n > 24) throw ContractViolation("exact_mcm_small: more than 24 vertices");
  std::vector<std::uint32_t> nb(n, 0);
  for (int v = 0; v < n; ++v)
    for (int u : g.adj[v]) nb[v] |= 1u << u;
  std::unordered_map<std::uint32_t, int> memo;
  auto best = [&](auto&& self, std::uint32_t mask) -> int {
    if (mask == 0) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    int v = std::countr_zero(mask);
    std::uint32_t rest = mask & ~(1u << v);
    int r = self(self, rest);
    for (std::uint32_t c = nb[v] & rest; c; c &= c - 1) {
      int u = std::countr_zero(c);
      r = std::max(r, 1 + self(self, rest & ~(1u << u)));
    }
    memo.emplace(mask, r);
    return r;
  };
  std::uint32_t mask = n == 0 ? 0 : static_cast<std::uint32_t>((1ULL << n) - 1);
  std::vector<IdPair> out;
  while (mask) {
    int target = best(best, mask);
    int v = std::countr_zero(mask);
    std::uint32_t rest = mask & ~(1u << v);
    if (best(best, rest) == target) {
      mask = rest;
      continue;
    }
    for (std::uint32_t c = nb[v] & rest; c; c &= c - 1) {
      int u = std::countr_zero(c);
      std::uint32_t next = rest & ~(1u << u);
      if (1 + best(best, next) == target) {
        out.emplace_back(g.ids[v], g.ids[u]);
        mask = next;
        break;
      }
    }
  }
  return out;
}

std::vector<IdPair> exact_mcm_general(const ExplicitGraph& g) {
  using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  int n = g.n();
  BG bg(n);
  for (int v = 0; v < n; ++v)
    for (int u : g.adj[v])
      if (v < u) boost::add_edge(v, u, bg);
  std::vector<boost::graph_traits<BG>::vertex_descriptor> mate(n);
  boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
  std::vector<IdPair> out;
  const auto null_v = boost::graph_traits<BG>::null_vertex();
  for (int v = 0; v < n; ++v) {
    auto u = mate[v];
    if (u != null_v && static_cast<int>(u) > v) out.emplace_back(g.ids[v], g.ids[u]);
  }
  return out;
}

std::optional<NaivePair> min_pair_naive(std::span<const GeomObject> objs,
                                        const std::unordered_map<ObjectId, long double>& weight) {
  auto w = [&](ObjectId id) {
    auto it = weight.find(id);
    return it == weight.end() ? 1.0L : it->second;
  };
  std::optional<NaivePair> best;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = i + 1; j < objs.size(); ++j) {
      if (!adjacent(objs[i], objs[j])) continue;
      ObjectId a = std::min(objs[i].id, objs[j].id), b = std::max(objs[i].id, objs[j].id);
      long double s = w(a) + w(b);
      if (!best || s < best->sum || (s == best->sum && std::pair(a, b) < std::pair(best->a, best->b)))
        best = NaivePair{a, b, s};
    }
  }
  return best;
}

bool is_vertex_cover(std::span<const GeomObject> objs, std::span<const ObjectId> cover) {
  std::unordered_set<ObjectId> in(cover.begin(), cover.end());
  for (std::size_t i = 0; i < objs.size(); ++i) {
    if (in.count(objs[i].id)) continue;
    for (std::size_t j = i + 1; j < objs.size(); ++j)
      if (!in.count(objs[j].id) && adjacent(objs[i], objs[j])) return false;
  }
  return true;
}

bool is_independent_set(std::span<const GeomObject> objs, std::span<const ObjectId> set) {
  std::unordered_set<ObjectId> in(set.begin(), set.end());
  if (in.size() != set.size()) return false;
  std::vector<const GeomObject*> chosen;
  for (const auto& o : objs)
    if (in.count(o.id)) chosen.push_back(&o);
  if (chosen.size() != set.size()) return false;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    for (std::size_t j = i + 1; j < chosen.size(); ++j)
      if (adjacent(*chosen[i], *chosen[j])) return false;
  return true;
}

bool is_valid_matching(std::span<const GeomObject> objs, std::span<const IdPair> matching,
                       bool bipartite) {
  std::unordered_map<ObjectId, const GeomObject*> by_id;
  for (const auto& o : objs) by_id[o.id] = &o;
  std::unordered_set<ObjectId> used;
  for (auto [a, b] : matching) {
    auto ia = by_id.find(a), ib = by_id.find(b);
    if (ia == by_id.end() || ib == by_id.end() || a == b) return false;
    if (!used.insert(a).second || !used.insert(b).second) return false;
    if (!intersects(*ia->second, *ib->second)) return false;
    if (bipartite && (ia->second->side == ib->second->side || ia->second->side == Side::None ||
                      ib->second->side == Side::None))
      return false;
  }
  return true;
}

bool has_augmenting_path(const ExplicitGraph& g, std::span<const IdPair> matching, int max_edges) {
  int n = g.n();
  std::vector<int> mate(n, -1);
  for (auto [a, b] : matching) {
    int x = g.index_of(a), y = g.index_of(b);
    mate[x] = y;
    mate[y] = x;
  }
  std::vector<char> on_path(n, 0);
  // At an even position: leave v along a non-matching edge.
  auto search = [&](auto&& self, int v, int edges) -> bool {
    for (int u : g.adj[v]) {
      if (on_path[u] || mate[v] == u) continue;
      if (mate[u] < 0) return true;
      int w = mate[u];
      if (on_path[w] || edges + 3 > max_edges) continue;
      on_path[u] = on_path[w] = 1;
      bool ok = self(self, w, edges + 2);
      on_path[u] = on_path[w] = 0;
      if (ok) return true;
    }
    return false;
  };
  if (max_edges < 1) return false;
  for (int v = 0; v < n; ++v) {
    if (mate[v] >= 0) continue;
    on_path[v] = 1;
    bool ok = search(search, v, 0);
    on_path[v] = 0;
    if (ok) return true;
  }
  return false;
}

}  // namespace geodyn::oracles
