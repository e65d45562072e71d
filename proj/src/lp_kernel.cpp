#include "geodyn/lp_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace geodyn {

struct MwuAccess {
  static FractionalCover& set(FractionalCover& c, double z, long double W, double delta,
                              const WeightedStore* universe) {
    c.z_ = z;
    c.W_ = W;
    c.delta_ = delta;
    c.universe_ = universe;
    return c;
  }
  static std::unordered_map<ObjectId, double>& values(FractionalCover& c) { return c.explicit_; }
  static void finish(FractionalCover& c, double implicit, std::size_t n) {
    c.implicit_ = implicit;
    double s = 0;
    for (auto& [id, x] : c.explicit_) s += x;
    c.size_ = s + implicit * static_cast<double>(n - c.explicit_.size());
  }
};

FractionalCover FractionalCover::from_values(std::unordered_map<ObjectId, double> x) {
  FractionalCover c;
  c.explicit_ = std::move(x);
  for (auto& [id, v] : c.explicit_) c.size_ += v;
  return c;
}

double FractionalCover::x(ObjectId id) const {
  auto it = explicit_.find(id);
  return it == explicit_.end() ? implicit_ : it->second;
}

void FractionalCover::for_each_at_least(double threshold,
                                        const std::function<void(ObjectId, double)>& fn) const {
  for (const auto& [id, v] : explicit_)
    if (v >= threshold) fn(id, v);
  if (universe_ && implicit_ >= threshold) {
    universe_->for_each([&](const GeomObject& o, long double) {
      if (!explicit_.count(o.id)) fn(o.id, implicit_);
    });
  }
}

std::uint64_t mwu_cap(double z, std::size_t n, double delta) {
  if (n <= 1) return 0;
  double denom = std::log1p(delta) - delta / (1 + delta);
  return static_cast<std::uint64_t>(std::ceil(z * std::log(static_cast<double>(n)) / denom));
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<ObjectId, ObjectId>& p) const {
    return std::hash<ObjectId>()(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
  }
};

// How often the duality check runs, in iterations.
constexpr std::uint64_t kCertificatePeriod = 64;

}  // namespace

MwuResult mwu_attempt(WeightedStore& store, double z, double delta, double slack) {
  if (!(delta > 0 && delta < 0.25)) throw ContractViolation("mwu_attempt: delta must be in (0, 1/4)");
  if (!(z > 0)) throw ContractViolation("mwu_attempt: z must be positive");
  if (!(slack >= 1)) throw ContractViolation("mwu_attempt: slack must be at least 1");
  if (store.non_unit_count() != 0) throw ContractViolation("mwu_attempt: weights must start at 1");

  const std::size_t n = store.size();
  MwuResult res;
  res.stats.cap = mwu_cap(z, n, delta);
  const long double step = 1.0L + delta;
  long double W = static_cast<long double>(n);
  std::unordered_map<ObjectId, int> exponent;  // c with w = (1+delta)^c
  std::unordered_map<std::pair<ObjectId, ObjectId>, std::uint32_t, PairHash> chosen;
  std::vector<long double> powers{1.0L};  // powers[c] = step^c
  auto weight_of = [&](int c) {
    while (static_cast<int>(powers.size()) <= c)
      powers.push_back(std::pow(step, static_cast<long double>(powers.size())));
    return powers[c];
  };

  bool feasible = false;
  while (true) {
    auto p = store.min_pair();
    if (!p || p->sum * z >= W) {
      feasible = true;
      break;
    }
    if (res.stats.iterations >= res.stats.cap) break;
    ++res.stats.iterations;
    for (ObjectId v : {p->a, p->b}) {
      int& c = exponent[v];
      long double old = weight_of(c);
      ++c;
      long double w = weight_of(c);
      W += w - old;
      store.set_weight(v, w);
    }
    ++chosen[{p->a, p->b}];
    // Scaling the chosen-edge counts by the larger endpoint load gives a
    // fractional matching; its value bounds the LP optimum from below.
    if (res.stats.iterations % kCertificatePeriod == 0) {
      double y = 0;
      for (const auto& [e, cnt] : chosen)
        y += static_cast<double>(cnt) / std::max(exponent[e.first], exponent[e.second]);
      res.stats.lower_bound = std::max(res.stats.lower_bound, y);
      // A budget just above the LP value is feasible in principle but may
      // only be confirmed near the cap, so slack > 1 gives up on it early.
      if (y * slack > z * (1 + 1e-12)) {
        res.stats.certified = true;
        break;
      }
    }
  }
  res.stats.touched = exponent.size();
  if (res.stats.touched > 2 * res.stats.iterations)
    throw std::logic_error("mwu_attempt: sparse-weight bound violated");

  if (feasible) {
    FractionalCover c;
    MwuAccess::set(c, z, W, delta, &store);
    auto& xs = MwuAccess::values(c);
    for (const auto& [id, e] : exponent)
      xs[id] = static_cast<double>(std::min<long double>(z * weight_of(e) / W, 1.0L));
    MwuAccess::finish(c, static_cast<double>(std::min<long double>(z / W, 1.0L)), n);
    res.cover = std::move(c);
  }
  for (const auto& [id, e] : exponent) store.set_weight(id, 1);
  return res;
}

FractionalCover solve_fractional_vc(WeightedStore& store, double delta, LpSolveStats* stats,
                                    double z_floor) {
  if (!store.min_pair()) {
    FractionalCover c;
    MwuAccess::set(c, 0, static_cast<long double>(store.size()), delta, &store);
    MwuAccess::finish(c, 0, store.size());
    return c;
  }
  std::map<long, std::optional<FractionalCover>> memo;
  double bound = 0;  // LP lower bound from the certificates
  auto attempt = [&](long k) -> bool {
    double z = std::pow(1.0 + delta, static_cast<double>(k));
    auto r = mwu_attempt(store, z, delta, 1 + delta);
    if (stats) {
      stats->z_tried.push_back(z);
      stats->feasible.push_back(r.cover.has_value());
      stats->attempts.push_back(r.stats);
      stats->total_iterations += r.stats.iterations;
    }
    bool ok = r.cover.has_value();
    bound = std::max(bound, r.stats.lower_bound);
    memo[k] = std::move(r.cover);
    return ok;
  };
  // Find lo < hi with lo infeasible (or lo = -1) and hi feasible. Budgets
  // below the LP value are infeasible and their attempts stop after a few
  // certificate checks, so the search climbs from the floor one grid step at
  // a time, skipping ahead to the best matching lower bound seen so far.
  auto grid_below = [&](double z) {
    return z > 1 ? static_cast<long>(std::floor(std::log(z) / std::log1p(delta))) : 0L;
  };
  long lo, hi;
  long start = grid_below(z_floor);
  if (attempt(start)) {
    if (start == 0) return std::move(*memo[0]);
    hi = start;
    lo = -1;
    for (long step = 1;; step *= 2) {
      long k = std::max(0L, hi - step);
      if (!attempt(k)) {
        lo = k;
        break;
      }
      hi = k;
      if (k == 0) return std::move(*memo[0]);
    }
  } else {
    lo = start;
    while (true) {
      long k = std::max(lo + 1, grid_below(bound));
      if (attempt(k)) {
        hi = k;
        break;
      }
      lo = k;
    }
  }
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (attempt(mid))
      hi = mid;
    else
      lo = mid;
  }
  return std::move(*memo[hi]);
}

Kernel build_kernel(const FractionalCover& cover, double gamma, double delta) {
  if (!(delta > 0 && delta < gamma && gamma < 0.25))
    throw ContractViolation("build_kernel: need 0 < delta < gamma < 1/4");
  Kernel k;
  k.gamma = gamma;
  k.delta = delta;
  k.lambda = std::sqrt(gamma * delta);
  k.cover_size = cover.size();
  const double lo = 0.5 - gamma - k.lambda, hi = 0.5 - k.lambda;

  std::vector<std::pair<double, ObjectId>> xs;
  cover.for_each_at_least(lo, [&](ObjectId id, double x) { xs.emplace_back(x, id); });
  std::sort(xs.begin(), xs.end());
  std::vector<double> vals;
  vals.reserve(xs.size());
  for (auto& [x, id] : xs) vals.push_back(x);

  long kmin = static_cast<long>(std::ceil(lo / k.lambda - 1e-9));
  long kmax = static_cast<long>(std::floor(hi / k.lambda + 1e-9));
  bool have = false;
  for (long m = kmin; m <= kmax; ++m) {
    double a = m * k.lambda;
    if (a < lo - 1e-12 || a > hi + 1e-12) continue;
    auto first = std::lower_bound(vals.begin(), vals.end(), a);
    auto last = std::lower_bound(vals.begin(), vals.end(), a + k.lambda);
    auto count = static_cast<std::size_t>(last - first);
    if (!have || count < k.window) {
      have = true;
      k.window = count;
      k.alpha = a;
    }
  }
  if (!have) throw std::logic_error("build_kernel: empty alpha window");

  for (auto& [x, id] : xs) {
    if (x > 1 - k.alpha)
      k.H.push_back(id);
    else if (x >= k.alpha)
      k.K.push_back(id);
  }
  std::sort(k.K.begin(), k.K.end());
  std::sort(k.H.begin(), k.H.end());
  return k;
}

std::vector<ObjectId> lift_cover(const Kernel& kernel, std::span<const ObjectId> s_k,
                                 const WeightedStore* objects) {
  std::unordered_set<ObjectId> in(s_k.begin(), s_k.end());
  for (ObjectId id : s_k)
    if (!kernel.in_K(id)) throw ContractViolation("lift_cover: S_K has an id outside K");
  if (objects) {
    for (std::size_t i = 0; i < kernel.K.size(); ++i) {
      if (in.count(kernel.K[i])) continue;
      const auto& a = objects->object(kernel.K[i]);
      for (std::size_t j = i + 1; j < kernel.K.size(); ++j)
        if (!in.count(kernel.K[j]) && adjacent(a, objects->object(kernel.K[j])))
          throw ContractViolation("lift_cover: S_K misses an edge of G[K]");
    }
  }
  std::vector<ObjectId> out(s_k.begin(), s_k.end());
  out.insert(out.end(), kernel.H.begin(), kernel.H.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace geodyn
