#include "geodyn/static_vc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "geodyn/dominance_tree.hpp"

namespace geodyn {

namespace {

// ---------------------------------------------------------------------------
// Dense bitsets over object indices.

using Bits = std::vector<std::uint64_t>;

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= 1ULL << (i & 63); }
void clear_bit(Bits& b, std::size_t i) { b[i >> 6] &= ~(1ULL << (i & 63)); }
bool test_bit(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1; }

std::size_t count(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += std::popcount(w);
  return c;
}

std::size_t count_and(const Bits& a, const Bits& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

bool any(const Bits& b) {
  for (auto w : b)
    if (w) return true;
  return false;
}

template <class F>
void for_bits(const Bits& b, F&& f) {
  for (std::size_t w = 0; w < b.size(); ++w)
    for (auto x = b[w]; x; x &= x - 1) f(w * 64 + std::countr_zero(x));
}

std::size_t first_bit(const Bits& b) {
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w]) return w * 64 + std::countr_zero(b[w]);
  return std::numeric_limits<std::size_t>::max();
}

void and_not(Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] &= ~b[i];
}

std::vector<Bits> adjacency(std::span<const GeomObject> objs) {
  std::vector<Bits> adj(objs.size(), make_bits(objs.size()));
  for (std::size_t i = 0; i < objs.size(); ++i)
    for (std::size_t j = i + 1; j < objs.size(); ++j)
      if (intersects(objs[i], objs[j])) {
        set_bit(adj[i], j);
        set_bit(adj[j], i);
      }
  return adj;
}

std::vector<Bits> components(const std::vector<Bits>& adj, const Bits& mask) {
  std::vector<Bits> out;
  Bits left = mask;
  while (any(left)) {
    Bits comp = make_bits(adj.size()), frontier = comp;
    set_bit(frontier, first_bit(left));
    while (any(frontier)) {
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] |= frontier[i];
      Bits next = make_bits(adj.size());
      for_bits(frontier, [&](std::size_t v) {
        for (std::size_t i = 0; i < next.size(); ++i) next[i] |= adj[v][i];
      });
      for (std::size_t i = 0; i < next.size(); ++i) next[i] &= left[i] & ~comp[i];
      frontier = std::move(next);
    }
    and_not(left, comp);
    out.push_back(std::move(comp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact maximum independent set by branch and bound on a minimum-degree
// vertex: some maximum independent set contains it or one of its neighbours.

struct MisBudgetExceeded {};

class MisSolver {
 public:
  MisSolver(const std::vector<Bits>& adj, std::uint64_t budget) : adj_(adj), budget_(budget) {}

  Bits solve(const Bits& mask) {
    best_ = make_bits(adj_.size());
    best_size_ = 0;
    Bits cur = make_bits(adj_.size());
    search(mask, cur, 0);
    return best_;
  }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::size_t clique_cover_bound(Bits p) const {
    std::size_t k = 0;
    while (any(p)) {
      std::size_t v = first_bit(p);
      clear_bit(p, v);
      Bits cand = adj_[v];
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] &= p[i];
      while (any(cand)) {
        std::size_t u = first_bit(cand);
        clear_bit(p, u);
        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] &= adj_[u][i];
      }
      ++k;
    }
    return k;
  }

  void take(Bits& p, Bits& cur, std::size_t v) const {
    set_bit(cur, v);
    clear_bit(p, v);
    and_not(p, adj_[v]);
  }

  void search(Bits p, Bits cur, std::size_t size) {
    if (++nodes_ > budget_) throw MisBudgetExceeded{};
    // Vertices of degree <= 1 belong to some maximum independent set.
    for (bool again = true; again;) {
      again = false;
      for_bits(p, [&](std::size_t v) {
        if (test_bit(p, v) && count_and(adj_[v], p) <= 1) {
          take(p, cur, v);
          ++size;
          again = true;
        }
      });
    }
    if (!any(p)) {
      if (size > best_size_) {
        best_size_ = size;
        best_ = cur;
      }
      return;
    }
    if (size + clique_cover_bound(p) <= best_size_) return;

    std::size_t v = 0, deg = std::numeric_limits<std::size_t>::max();
    for_bits(p, [&](std::size_t u) {
      std::size_t d = count_and(adj_[u], p);
      if (d < deg) deg = d, v = u;
    });
    Bits branch = adj_[v];
    for (std::size_t i = 0; i < branch.size(); ++i) branch[i] &= p[i];
    set_bit(branch, v);
    Bits rest = p;
    for_bits(branch, [&](std::size_t u) {
      if (!test_bit(rest, u)) return;
      Bits q = rest, c = cur;
      take(q, c, u);
      search(std::move(q), std::move(c), size + 1);
      // Later branches need not revisit sets containing u.
      clear_bit(rest, u);
    });
  }

  const std::vector<Bits>& adj_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  Bits best_;
  std::size_t best_size_ = 0;
};

// Adds objects outside the set whenever they conflict with nothing chosen.
void greedy_fill(const std::vector<Bits>& adj, Bits& chosen) {
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (!test_bit(chosen, v) && count_and(adj[v], chosen) == 0) set_bit(chosen, v);
}

std::vector<ObjectId> ids_of(std::span<const GeomObject> objs, const Bits& b) {
  std::vector<ObjectId> out;
  for_bits(b, [&](std::size_t i) { out.push_back(objs[i].id); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ObjectId> complement(std::span<const GeomObject> objs, std::vector<ObjectId> keep) {
  std::sort(keep.begin(), keep.end());
  std::vector<ObjectId> out;
  for (const auto& o : objs)
    if (!std::binary_search(keep.begin(), keep.end(), o.id)) out.push_back(o.id);
  std::sort(out.begin(), out.end());
  return out;
}

int dim_of(std::span<const GeomObject> objs) { return objs.empty() ? 2 : objs[0].dim(); }

void require_rects(std::span<const GeomObject> rects, const char* who) {
  for (const auto& o : rects)
    if (o.kind() != ShapeKind::Box || o.dim() != 2)
      throw ContractViolation(std::string(who) + ": expects 2-D rectangles");
}

// ---------------------------------------------------------------------------
// Separator helpers.

bool strictly_inside(const GeomObject& o, const Box& B) {
  Box bb = bounding_box(o);
  for (int k = 0; k < B.dim; ++k)
    if (!(bb.lo[k] > B.lo[k] && bb.hi[k] < B.hi[k])) return false;
  return true;
}

bool meets_box(const GeomObject& o, const Box& B) {
  if (o.kind() == ShapeKind::Box) return intersects(o.box(), B);
  const Disk& d = o.disk();
  double dist2 = 0;
  for (int k = 0; k < 2; ++k) {
    double c = std::clamp(d.center[k], B.lo[k], B.hi[k]);
    dist2 += (d.center[k] - c) * (d.center[k] - c);
  }
  return dist2 <= d.radius * d.radius;
}

int grid_resolution(std::size_t n, int d) {
  int cap = static_cast<int>(std::floor(std::pow(2.0, 16.0 / d)));
  return static_cast<int>(std::min<std::size_t>({64, n, static_cast<std::size_t>(cap)}));
}

// Smallest grid-aligned hypercube holding at least `target` rounded points.
struct DenseCube {
  std::array<double, kMaxDim> lo{};
  double side = 0;
};

DenseCube smallest_dense_cube(const std::vector<std::array<double, kMaxDim>>& pts, int d, int C,
                              std::size_t target) {
  const std::size_t n = pts.size();
  std::array<std::vector<double>, kMaxDim> G;
  std::array<std::size_t, kMaxDim> m{}, stride{};
  for (int a = 0; a < d; ++a) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = pts[i][a];
    std::sort(v.begin(), v.end());
    for (int k = 0; k <= C; ++k) G[a].push_back(v[std::min(n - 1, k * n / C)]);
    G[a].erase(std::unique(G[a].begin(), G[a].end()), G[a].end());
    m[a] = G[a].size();
  }
  // Prefix sums over (m_a + 1)-sized axes.
  std::size_t total = 1;
  for (int a = d - 1; a >= 0; --a) {
    stride[a] = total;
    total *= m[a] + 1;
  }
  std::vector<std::int32_t> P(total, 0);
  for (const auto& p : pts) {
    std::size_t off = 0;
    for (int a = 0; a < d; ++a) {
      const auto& g = G[a];
      auto it = std::lower_bound(g.begin(), g.end(), p[a]);
      std::size_t j = static_cast<std::size_t>(it - g.begin());
      if (j == g.size() || (j > 0 && p[a] - g[j - 1] <= g[j] - p[a])) --j;
      off += (j + 1) * stride[a];
    }
    ++P[off];
  }
  for (int a = 0; a < d; ++a) {
    for (std::size_t off = 0; off < total; ++off) {
      std::size_t ia = (off / stride[a]) % (m[a] + 1);
      if (ia > 0) P[off] += P[off - stride[a]];
    }
  }
  // Sum of rounded points with grid index in [s_a, e_a] on every axis.
  auto box_sum = [&](const std::array<std::size_t, kMaxDim>& s,
                     const std::array<std::size_t, kMaxDim>& e) {
    std::int64_t sum = 0;
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::size_t off = 0;
      int sign = 1;
      for (int a = 0; a < d; ++a) {
        if (mask >> a & 1) {
          off += s[a] * stride[a];
          sign = -sign;
        } else {
          off += (e[a] + 1) * stride[a];
        }
      }
      sum += sign * P[off];
    }
    return sum;
  };

  std::vector<double> sides{0};
  for (int a = 0; a < d; ++a)
    for (std::size_t i = 0; i < m[a]; ++i)
      for (std::size_t j = i + 1; j < m[a]; ++j) sides.push_back(G[a][j] - G[a][i]);
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());

  auto probe = [&](double s, DenseCube* out) {
    std::array<std::vector<std::size_t>, kMaxDim> end;
    for (int a = 0; a < d; ++a) {
      end[a].resize(m[a]);
      std::size_t j = 0;
      for (std::size_t i = 0; i < m[a]; ++i) {
        j = std::max(j, i);
        while (j + 1 < m[a] && G[a][j + 1] - G[a][i] <= s) ++j;
        end[a][i] = j;
      }
    }
    std::array<std::size_t, kMaxDim> st{}, en{};
    while (true) {
      for (int a = 0; a < d; ++a) en[a] = end[a][st[a]];
      if (box_sum(st, en) >= static_cast<std::int64_t>(target)) {
        if (out) {
          for (int a = 0; a < d; ++a) out->lo[a] = G[a][st[a]];
          out->side = s;
        }
        return true;
      }
      int a = d - 1;
      while (a >= 0 && ++st[a] == m[a]) st[a--] = 0;
      if (a < 0) return false;
    }
  };
  std::size_t lo = 0, hi = sides.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (probe(sides[mid], nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  DenseCube cube;
  if (!probe(sides[lo], &cube)) throw std::logic_error("separator: no dense cube");
  return cube;
}

// ---------------------------------------------------------------------------
// Plane sweep over rectangles with a max-depth segment tree on y.

class DepthTree {
 public:
  explicit DepthTree(std::size_t n) : n_(std::max<std::size_t>(n, 1)), mx_(4 * n_), add_(4 * n_) {}
  void update(std::size_t l, std::size_t r, int v) { update(1, 0, n_ - 1, l, r, v); }
  int max() const { return mx_[1]; }
  std::size_t argmax() const {
    std::size_t node = 1, lo = 0, hi = n_ - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      int need = mx_[node] - add_[node];
      if (mx_[2 * node] == need) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  void update(std::size_t node, std::size_t lo, std::size_t hi, std::size_t l, std::size_t r,
              int v) {
    if (r < lo || hi < l) return;
    if (l <= lo && hi <= r) {
      mx_[node] += v;
      add_[node] += v;
      return;
    }
    std::size_t mid = (lo + hi) / 2;
    update(2 * node, lo, mid, l, r, v);
    update(2 * node + 1, mid + 1, hi, l, r, v);
    mx_[node] = std::max(mx_[2 * node], mx_[2 * node + 1]) + add_[node];
  }

  std::size_t n_;
  std::vector<int> mx_, add_;
};

// Sweeps left to right; inserts at equal x come before deletions so touching
// rectangles count as overlapping. on_insert may remove active rectangles.
template <class OnInsert>
void sweep(std::span<const GeomObject> rects, std::vector<double>& ys, DepthTree& tree,
           std::vector<char>& removed, OnInsert&& on_insert) {
  struct Event {
    double x;
    int type;  // 0 insert, 1 delete
    std::size_t idx;
  };
  std::vector<Event> ev;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const Box& b = rects[i].box();
    ev.push_back({b.lo[0], 0, i});
    ev.push_back({b.hi[0], 1, i});
  }
  std::sort(ev.begin(), ev.end(), [&](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.type != b.type) return a.type < b.type;
    return rects[a.idx].id < rects[b.idx].id;
  });
  auto yidx = [&](double y) {
    return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
  };
  for (const auto& e : ev) {
    if (removed[e.idx]) continue;
    const Box& b = rects[e.idx].box();
    if (e.type == 0) {
      tree.update(yidx(b.lo[1]), yidx(b.hi[1]), 1);
      on_insert(e.idx);
    } else {
      tree.update(yidx(b.lo[1]), yidx(b.hi[1]), -1);
    }
  }
}

std::vector<double> y_coords(std::span<const GeomObject> rects) {
  std::vector<double> ys;
  for (const auto& r : rects) {
    ys.push_back(r.box().lo[1]);
    ys.push_back(r.box().hi[1]);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

DominanceTree::Point dominator_point(const Box& b) {
  DominanceTree::Point p{};
  p[0] = -b.lo[0];
  p[1] = b.hi[0];
  p[2] = b.lo[1];
  p[3] = -b.hi[1];
  return p;
}

double below(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }

// Query point matching every rectangle that strictly dominates b.
DominanceTree::Point dominated_query(const Box& b) {
  DominanceTree::Point a{};
  a[0] = below(-b.lo[0]);
  a[1] = below(b.hi[0]);
  a[2] = below(b.lo[1]);
  a[3] = below(-b.hi[1]);
  return a;
}

std::vector<char> dominated_flags(std::span<const GeomObject> rects) {
  std::vector<DominanceTree::Point> pts;
  std::vector<ObjectId> ids;
  for (const auto& r : rects) {
    pts.push_back(dominator_point(r.box()));
    ids.push_back(r.id);
  }
  DominanceTree tree(4, std::move(pts), std::move(ids));
  std::vector<char> out(rects.size(), 0);
  for (std::size_t i = 0; i < rects.size(); ++i)
    out[i] = tree.find(dominated_query(rects[i].box()), IdFilter::accept_all()).has_value();
  return out;
}

// BFS from the lowest vertex; drops the thinnest layer that leaves both sides
// at most 2k/3, or the most balanced one when none does.
Bits layer_separator(const std::vector<Bits>& adj, const Bits& comp) {
  std::vector<Bits> layers;
  Bits seen = make_bits(adj.size()), frontier = make_bits(adj.size());
  set_bit(frontier, first_bit(comp));
  while (any(frontier)) {
    for (std::size_t i = 0; i < seen.size(); ++i) seen[i] |= frontier[i];
    layers.push_back(frontier);
    Bits next = make_bits(adj.size());
    for_bits(frontier, [&](std::size_t v) {
      for (std::size_t i = 0; i < next.size(); ++i) next[i] |= adj[v][i];
    });
    for (std::size_t i = 0; i < next.size(); ++i) next[i] &= comp[i] & ~seen[i];
    frontier = std::move(next);
  }
  const std::size_t k = count(comp);
  std::size_t best = 0, best_size = 0, best_side = 0;
  bool best_ok = false;
  std::size_t before = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    std::size_t sz = count(layers[i]);
    std::size_t side = std::max(before, k - before - sz);
    bool ok = 3 * side <= 2 * k;
    bool better = i == 0 || (ok && !best_ok) || (ok && best_ok && sz < best_size) ||
                  (!ok && !best_ok && side < best_side);
    if (better) {
      best = i;
      best_size = sz;
      best_side = side;
      best_ok = ok;
    }
    before += sz;
  }
  return layers[best];
}

}  // namespace

// ---------------------------------------------------------------------------

double separator_balance_bound(std::size_t n, int d, int grid) {
  double two_d = std::ldexp(1.0, d);
  double slab = std::ceil(static_cast<double>(n) / grid) + 1;
  return two_d * static_cast<double>(n) / (two_d + 1) + 2 * d * slab + 1;
}

SeparatorResult separator(std::span<const GeomObject> objs, const FatnessConfig& fat) {
  if (objs.size() < 2) throw ContractViolation("separator: needs at least two objects");
  for (const auto& o : objs)
    if (!is_fat(o, fat)) throw ContractViolation("separator: object is not fat: " + describe(o));
  const std::size_t n = objs.size();
  const int d = dim_of(objs);
  SeparatorResult res;
  res.beta = 1.0 / (std::ldexp(1.0, d) + 1);
  res.grid = grid_resolution(n, d);
  res.h = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 1.0 / d) - 1e-9));
  res.h = std::max(res.h, 2);

  std::vector<std::array<double, kMaxDim>> refs;
  for (const auto& o : objs) refs.push_back(reference_point(o));
  std::size_t target =
      static_cast<std::size_t>(std::ceil(static_cast<double>(n) * res.beta - 1e-12));
  target = std::max<std::size_t>(target, 1);
  DenseCube cube = smallest_dense_cube(refs, d, res.grid, target);
  res.r = cube.side;

  std::array<double, kMaxDim> center{};
  for (int a = 0; a < d; ++a) center[a] = cube.lo[a] + cube.side / 2;
  auto box_for = [&](double t) {
    Box B;
    B.dim = d;
    for (int a = 0; a < d; ++a) {
      B.lo[a] = center[a] - (1 + t) * cube.side / 2;
      B.hi[a] = center[a] + (1 + t) * cube.side / 2;
    }
    return B;
  };
  auto crosses = [](const GeomObject& o, const Box& B) {
    return meets_box(o, B) && !strictly_inside(o, B);
  };

  // Small objects meet the boundary for few t; pick the t they cross least.
  const double small = cube.side / res.h;
  std::size_t best_count = std::numeric_limits<std::size_t>::max();
  for (int k = 1; k < res.h; ++k) {
    double t = static_cast<double>(k) / res.h;
    Box B = box_for(t);
    std::size_t c = 0;
    for (const auto& o : objs)
      if (diameter(o) <= small && crosses(o, B)) ++c;
    if (c < best_count) {
      best_count = c;
      res.t = t;
    }
  }
  res.B = box_for(res.t);
  for (const auto& o : objs) {
    if (strictly_inside(o, res.B))
      res.inside.push_back(o.id);
    else if (meets_box(o, res.B))
      res.crossing.push_back(o.id);
    else
      res.outside.push_back(o.id);
  }
  return res;
}

std::vector<ObjectId> mis_fat(std::span<const GeomObject> objs, double eps,
                              const FatnessConfig& fat) {
  if (!(eps > 0 && eps <= 1)) throw ContractViolation("mis_fat: eps must be in (0, 1]");
  for (const auto& o : objs)
    if (!is_fat(o, fat)) throw ContractViolation("mis_fat: object is not fat: " + describe(o));
  const std::size_t n = objs.size();
  if (n == 0) return {};
  const std::size_t b = static_cast<std::size_t>(std::ceil(1.0 / (eps * eps) - 1e-9));
  auto adj = adjacency(objs);
  std::unordered_map<ObjectId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[objs[i].id] = i;
  Bits chosen = make_bits(n);

  std::function<void(const Bits&)> solve = [&](const Bits& mask) {
    for (auto& comp : components(adj, mask)) {
      std::size_t k = count(comp);
      if (k < b || k < 2) {
        try {
          MisSolver s(adj, 50'000'000);
          Bits got = s.solve(comp);
          for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] |= got[i];
          continue;
        } catch (const MisBudgetExceeded&) {
          if (k < 2) throw std::logic_error("mis_fat: budget exhausted on a single vertex");
        }
      }
      std::vector<GeomObject> sub;
      for_bits(comp, [&](std::size_t i) { sub.push_back(objs[i]); });
      SeparatorResult sep = separator(sub, fat);
      if (sep.inside.empty() && sep.outside.empty()) {
        // Every object meets a degenerate cube; they share a point.
        set_bit(chosen, first_bit(comp));
        continue;
      }
      Bits in = make_bits(n), out = make_bits(n);
      for (ObjectId id : sep.inside) set_bit(in, index[id]);
      for (ObjectId id : sep.outside) set_bit(out, index[id]);
      solve(in);
      solve(out);
    }
  };
  Bits all = make_bits(n);
  for (std::size_t i = 0; i < n; ++i) set_bit(all, i);
  solve(all);
  greedy_fill(adj, chosen);
  return ids_of(objs, chosen);
}

std::vector<ObjectId> static_vc_fat(std::span<const GeomObject> objs, double eps,
                                    const FatnessConfig& fat) {
  return complement(objs, mis_fat(objs, eps, fat));
}

int max_depth(std::span<const GeomObject> rects) {
  require_rects(rects, "max_depth");
  auto ys = y_coords(rects);
  DepthTree tree(ys.size());
  std::vector<char> removed(rects.size(), 0);
  int best = 0;
  sweep(rects, ys, tree, removed, [&](std::size_t) { best = std::max(best, tree.max()); });
  return best;
}

TriangleRemoval remove_triangles(std::span<const GeomObject> rects) {
  require_rects(rects, "remove_triangles");
  auto ys = y_coords(rects);
  DepthTree tree(ys.size());
  std::vector<char> removed(rects.size(), 0);
  std::vector<std::size_t> active;
  std::vector<std::size_t> pos(rects.size(), 0);
  TriangleRemoval out;
  auto yidx = [&](double y) {
    return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
  };
  auto drop_active = [&](std::size_t i) {
    std::size_t p = pos[i];
    active[p] = active.back();
    pos[active[p]] = p;
    active.pop_back();
  };
  // Deletions happen inside sweep(); mirror them in the active list lazily.
  double cur_x = -std::numeric_limits<double>::infinity();
  sweep(rects, ys, tree, removed, [&](std::size_t i) {
    cur_x = rects[i].box().lo[0];
    for (std::size_t k = 0; k < active.size();) {
      std::size_t j = active[k];
      if (rects[j].box().hi[0] < cur_x) {
        drop_active(j);
      } else {
        ++k;
      }
    }
    pos[i] = active.size();
    active.push_back(i);
    if (tree.max() < 3) return;
    double y = ys[tree.argmax()];
    std::array<std::size_t, 3> tri{};
    int found = 0;
    for (std::size_t j : active) {
      const Box& b = rects[j].box();
      if (b.lo[1] <= y && y <= b.hi[1] && found < 3) tri[found++] = j;
    }
    if (found != 3) throw std::logic_error("remove_triangles: depth bookkeeping mismatch");
    std::array<ObjectId, 3> ids{};
    for (int k = 0; k < 3; ++k) {
      std::size_t j = tri[k];
      const Box& b = rects[j].box();
      tree.update(yidx(b.lo[1]), yidx(b.hi[1]), -1);
      removed[j] = 1;
      drop_active(j);
      ids[k] = rects[j].id;
    }
    std::sort(ids.begin(), ids.end());
    out.triangles.push_back(ids);
  });
  for (std::size_t i = 0; i < rects.size(); ++i)
    if (!removed[i]) out.rest.push_back(rects[i].id);
  std::sort(out.rest.begin(), out.rest.end());
  return out;
}

DominationSplit split_domination(std::span<const GeomObject> rects) {
  require_rects(rects, "split_domination");
  if (max_depth(rects) > 2) throw ContractViolation("split_domination: depth exceeds 2");
  auto dominated = dominated_flags(rects);
  DominationSplit out;
  for (std::size_t i = 0; i < rects.size(); ++i)
    (dominated[i] ? out.R2 : out.R1).push_back(rects[i].id);
  std::sort(out.R1.begin(), out.R1.end());
  std::sort(out.R2.begin(), out.R2.end());
  return out;
}

std::vector<ObjectId> mis_trianglefree(std::span<const GeomObject> rects, double eps,
                                       std::uint64_t budget, bool* fell_back) {
  require_rects(rects, "mis_trianglefree");
  if (!(eps > 0 && eps <= 1)) throw ContractViolation("mis_trianglefree: eps must be in (0, 1]");
  if (fell_back) *fell_back = false;
  const std::size_t n = rects.size();
  if (n == 0) return {};
  if (max_depth(rects) > 2) throw ContractViolation("mis_trianglefree: depth exceeds 2");
  auto dom = dominated_flags(rects);
  if (std::any_of(dom.begin(), dom.end(), [](char c) { return c != 0; }))
    throw ContractViolation("mis_trianglefree: input has a dominating pair");

  // A rectangle containing another can be swapped for it in any independent
  // set, so only containment-minimal ones take part in the search.
  std::vector<DominanceTree::Point> pts;
  std::vector<ObjectId> ids;
  std::unordered_map<ObjectId, std::size_t> index;
  auto contained_point = [](const Box& b) {
    DominanceTree::Point p{};
    p[0] = -b.lo[0];
    p[1] = b.hi[0];
    p[2] = -b.lo[1];
    p[3] = b.hi[1];
    return p;
  };
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(contained_point(rects[i].box()));
    ids.push_back(rects[i].id);
    index[rects[i].id] = i;
  }
  DominanceTree tree(4, pts, ids);
  Bits keep = make_bits(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GeomObject& r = rects[i];
    auto accept = [&](ObjectId id) {
      if (id == r.id) return false;
      const Box& o = rects[index[id]].box();
      bool same = o.lo[0] == r.box().lo[0] && o.lo[1] == r.box().lo[1] &&
                  o.hi[0] == r.box().hi[0] && o.hi[1] == r.box().hi[1];
      return !same || id < r.id;
    };
    if (!tree.find(pts[i], accept)) set_bit(keep, i);
  }

  auto adj = adjacency(rects);
  const std::size_t b = static_cast<std::size_t>(std::ceil(1.0 / (eps * eps) - 1e-9));
  Bits chosen = make_bits(n);
  std::function<void(const Bits&)> solve = [&](const Bits& mask) {
    for (auto& comp : components(adj, mask)) {
      std::size_t k = count(comp);
      try {
        MisSolver s(adj, k < b ? std::max<std::uint64_t>(budget, 50'000'000) : budget);
        Bits got = s.solve(comp);
        for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] |= got[i];
        continue;
      } catch (const MisBudgetExceeded&) {
        if (fell_back) *fell_back = true;
      }
      Bits rest = comp;
      and_not(rest, layer_separator(adj, comp));
      solve(rest);
    }
  };
  solve(keep);
  greedy_fill(adj, chosen);
  return ids_of(rects, chosen);
}

std::vector<ObjectId> static_vc_rect(std::span<const GeomObject> rects, double eps,
                                     RectVcTrace* trace) {
  require_rects(rects, "static_vc_rect");
  RectVcTrace tr;
  auto removal = remove_triangles(rects);
  tr.triangles = removal.triangles.size();
  std::unordered_map<ObjectId, const GeomObject*> by_id;
  for (const auto& r : rects) by_id[r.id] = &r;
  auto gather = [&](const std::vector<ObjectId>& v) {
    std::vector<GeomObject> out;
    for (ObjectId id : v) out.push_back(*by_id[id]);
    return out;
  };
  auto rest = gather(removal.rest);
  auto split = split_domination(rest);
  auto r1 = gather(split.R1), r2 = gather(split.R2);
  bool fb1 = false, fb2 = false;
  auto s1 = complement(r1, mis_trianglefree(r1, eps, kDefaultMisBudget, &fb1));
  auto s2 = complement(r2, mis_trianglefree(r2, eps, kDefaultMisBudget, &fb2));
  tr.r1 = r1.size();
  tr.r2 = r2.size();
  tr.s1 = s1.size();
  tr.s2 = s2.size();
  tr.fallback = fb1 || fb2;
  tr.first = s1.size() + r2.size() <= s2.size() + r1.size();
  std::vector<ObjectId> out = tr.first ? s1 : s2;
  const auto& other = tr.first ? split.R2 : split.R1;
  out.insert(out.end(), other.begin(), other.end());
  for (const auto& t : removal.triangles) out.insert(out.end(), t.begin(), t.end());
  std::sort(out.begin(), out.end());
  if (trace) *trace = tr;
  return out;
}

std::vector<ObjectId> static_vc_bipartite(std::span<const GeomObject> objs) {
  std::vector<ObjectId> left, right;
  for (const auto& o : objs) {
    if (o.side == Side::None)
      throw ContractViolation("static_vc_bipartite: object without a side: " + describe(o));
    (o.side == Side::Left ? left : right).push_back(o.id);
  }
  auto& out = left.size() <= right.size() ? left : right;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace geodyn
