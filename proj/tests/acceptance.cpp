// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every tolerance is a named constant below; nothing is adjusted at run time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gen.hpp"
#include "geodyn/general_matching.hpp"
#include "geodyn/lp_kernel.hpp"
#include "geodyn/matching.hpp"
#include "geodyn/minpair.hpp"
#include "geodyn/oracles.hpp"
#include "geodyn/static_vc.hpp"
#include "runner.hpp"
#include "support.hpp"

using namespace geodyn;
namespace tl = geodyn::tools;

namespace {

// Tolerances.
constexpr double kLpDelta = 0.1, kLpSlackFactor = 5;  // size <= (1 + 5 delta) LP
constexpr double kLpSeconds = 30;
constexpr double kKernelGamma = 0.2, kKernelDelta = 0.02;
constexpr double kKernelToMvc = 2.6, kLiftToMvc = 1.25;
constexpr int kMinPairOps = 100'000, kMinPairPool = 300;
constexpr double kMinPairSeconds = 60;
constexpr int kDynSteps = 5000, kDynEvery = 100;
constexpr double kWorkGrowth = 2.0;  // mean work at 4x live objects / at 1x
constexpr double kBipEps = 0.2;
constexpr double kHkEps = 0.25;
constexpr double kMcmEps = 0.25;
constexpr double kStaticEps = 0.5, kRectEps = 0.3;
constexpr double kTiny = 1e-9;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "FAILED: " << what << "; ";
    pass = pass && ok;
  }
};

std::vector<oracles::IdPair> pairs(const std::vector<MatchEdge>& m) {
  std::vector<oracles::IdPair> out;
  for (auto& e : m) out.emplace_back(e.a, e.b);
  return out;
}

std::vector<oracles::IdPair> pairs(const Mates& m) { return pairs(edges_of(m)); }

std::unique_ptr<WeightedStore> load(const std::vector<GeomObject>& objs) {
  auto kind = objs[0].kind();
  auto s = std::make_unique<WeightedStore>(default_backend(kind), kind, objs[0].dim());
  for (auto& o : objs) s->insert(o);
  return s;
}

// Instances shared by the LP and kernel criteria: 50 disk and 50 rectangle
// sets, n cycling through 50, 100, 200 at a fixed expected degree.
std::vector<std::vector<GeomObject>> lp_instances() {
  std::mt19937_64 rng(1001);
  std::vector<std::vector<GeomObject>> out;
  const int sizes[3] = {50, 100, 200};
  for (int rep = 0; rep < 100; ++rep) {
    int n = sizes[rep % 3];
    double range = 7.5 * std::sqrt(n);
    if (rep < 50)
      out.push_back(testsupport::random_disks(rng, n, range, 1, 3));
    else
      out.push_back(testsupport::random_boxes(rng, n, 2, range, 1, 6));
  }
  return out;
}

// 1. MWU fractional cover quality and iteration caps.
void mwu_lp(Outcome& r) {
  auto t0 = Clock::now();
  double worst = 0;
  std::size_t attempts = 0;
  for (auto& objs : lp_instances()) {
    auto s = load(objs);
    LpSolveStats st;
    auto c = solve_fractional_vc(*s, kLpDelta, &st);
    double lp = oracles::exact_fractional_vc(oracles::ExplicitGraph::from_objects(objs)).value;
    for (auto& a : st.attempts) {
      r.require(a.iterations <= a.cap, "iterations above cap");
      ++attempts;
    }
    if (lp > 0) worst = std::max(worst, c.size() / lp);
    r.require(c.size() <= (1 + kLpSlackFactor * kLpDelta) * lp + kTiny, "size above (1+5d) LP");
  }
  double secs = since(t0);
  r.require(secs < kLpSeconds, "runtime");
  r.detail << "100 instances, " << attempts << " attempts, max size/LP " << worst
           << " (bound " << 1 + kLpSlackFactor * kLpDelta << "), " << secs << " s";
}

// 2. Kernel size and lifted cover quality.
void kernel(Outcome& r) {
  double worst_k = 0, worst_lift = 0;
  int skipped = 0;
  for (auto& objs : lp_instances()) {
    auto s = load(objs);
    auto c = solve_fractional_vc(*s, kKernelDelta);
    auto k = build_kernel(c, kKernelGamma, kKernelDelta);
    r.require(k.K.size() <= c.size() / k.alpha + kTiny, "|K| > sum x / alpha");
    std::size_t opt;
    std::vector<ObjectId> lifted;
    try {
      opt = oracles::exact_mvc(oracles::ExplicitGraph::from_objects(objs)).size();
      std::vector<GeomObject> kobjs;
      for (ObjectId id : k.K) kobjs.push_back(s->object(id));
      auto sk = oracles::exact_mvc(oracles::ExplicitGraph::from_objects(kobjs));
      lifted = lift_cover(k, sk, s.get());
    } catch (const oracles::OracleBudgetExceeded&) {
      ++skipped;
      continue;
    }
    r.require(oracles::is_vertex_cover(objs, lifted), "lifted cover invalid");
    if (opt == 0) {
      r.require(k.K.empty() && lifted.empty(), "nonempty kernel on an edgeless graph");
      continue;
    }
    worst_k = std::max(worst_k, double(k.K.size()) / opt);
    worst_lift = std::max(worst_lift, double(lifted.size()) / opt);
    r.require(k.K.size() <= kKernelToMvc * opt + kTiny, "|K| > 2.6 MVC");
    r.require(lifted.size() <= kLiftToMvc * opt + kTiny, "lift > 1.25 MVC");
  }
  r.require(skipped <= 10, "too many oracle budget hits");
  r.detail << "max |K|/MVC " << worst_k << " (bound " << kKernelToMvc << "), max lift/MVC "
           << worst_lift << " (bound " << kLiftToMvc << "), oracle skipped " << skipped;
}

// 3. Min-pair structure against the quadratic scan after every operation.
void min_pair_trace(Outcome& r) {
  auto t0 = Clock::now();
  std::mt19937_64 rng(303);
  auto pool = testsupport::random_boxes(rng, kMinPairPool, 3, 60, 1, 12);
  WeightedStore store(Backend::BoxRangeTree, ShapeKind::Box, 3);
  std::vector<GeomObject> live;
  std::vector<int> where(kMinPairPool, -1);  // index into live
  std::unordered_map<ObjectId, long double> weight;
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> pick(0, kMinPairPool - 1), expo(0, 12);
  long mismatches = 0, nonempty = 0;
  int inserts = 0, erases = 0, reweights = 0;
  for (int op = 0; op < kMinPairOps; ++op) {
    int i = pick(rng);
    double roll = u(rng);
    if (where[i] < 0) {
      store.insert(pool[i]);
      where[i] = static_cast<int>(live.size());
      live.push_back(pool[i]);
      ++inserts;
    } else if (roll < 0.25) {
      store.erase(pool[i].id);
      int at = where[i];
      where[live.back().id] = at;
      live[at] = live.back();
      live.pop_back();
      where[i] = -1;
      weight.erase(pool[i].id);
      ++erases;
    } else {
      // Powers of 1.1 make equal sums, and so ties, common.
      long double w = std::pow(1.1L, expo(rng));
      store.set_weight(pool[i].id, w);
      if (w == 1)
        weight.erase(pool[i].id);
      else
        weight[pool[i].id] = w;
      ++reweights;
    }
    auto got = store.min_pair();
    auto want = oracles::min_pair_naive(live, weight);
    bool same = got.has_value() == want.has_value() &&
                (!got || (got->a == want->a && got->b == want->b && got->sum == want->sum));
    mismatches += !same;
    nonempty += want.has_value();
  }
  double secs = since(t0);
  r.require(mismatches == 0, "min_pair differs from scan");
  r.require(secs < kMinPairSeconds, "runtime");
  r.detail << kMinPairOps << " ops (" << inserts << " ins, " << erases << " del, " << reweights
           << " weight), " << mismatches << " mismatches, " << nonempty << " nonempty answers, "
           << secs << " s";
}

tl::GenParams dyn_gen(tl::Mode mode, tl::Kind kind, int dim, bool bip, std::uint64_t seed,
                      std::size_t steps, std::size_t live, double range, double rmin,
                      double spread) {
  tl::GenParams g;
  g.header.mode = mode;
  g.header.kind = kind;
  g.header.dim = dim;
  g.header.bipartite = bip;
  g.seed = seed;
  g.steps = steps;
  g.max_live = live;
  g.churn = 0.45;
  g.range = range;
  g.rmin = rmin;
  g.spread = spread;
  return g;
}

tl::RunReport replay(const tl::GenParams& g, double eps, std::size_t every,
                     const std::string& preset = "") {
  tl::RunParams p;
  p.eps = eps;
  p.oracle_every = every;
  p.preset = preset;
  p.seed = g.seed;
  return tl::run_trace(tl::gen_instance(g), p);
}

// Ratio check over a replayed trace: vc ratios are size/opt, matching ratios
// opt/size, both compared against an upper bound.
void check_run(Outcome& r, const std::string& name, const tl::RunReport& rep, double bound) {
  const auto& s = rep.summary;
  std::size_t measured = s.sampled - s.budget_hits;
  r.require(s.all_valid, name + " invalid solution");
  r.require(s.max_ratio <= bound + kTiny, name + " ratio");
  r.require(measured * 2 >= s.sampled, name + " oracle completed on under half the samples");
  r.detail << name << ": ratio " << s.max_ratio << " <= " << bound << " over " << measured << "/"
           << s.sampled << " samples, " << s.seconds << " s; ";
}

// 4. Dynamic vertex cover end to end, rebuild ledger and per-update work.
void dynamic_vc(Outcome& r) {
  struct Case {
    std::string name;
    tl::GenParams g;
    double eps, bound;
  };
  std::vector<Case> cases = {
      {"disks", dyn_gen(tl::Mode::Vc, tl::Kind::Disk, 2, false, 41, kDynSteps, 150, 70, 1, 3), 0.3,
       1 + 3 * 0.3},
      {"rects", dyn_gen(tl::Mode::Vc, tl::Kind::Rect, 2, false, 42, kDynSteps, 150, 80, 1, 6), 0.3,
       1.5 + 3 * 0.3},
      {"fat boxes d=3", dyn_gen(tl::Mode::Vc, tl::Kind::Box, 3, false, 43, kDynSteps, 150, 25, 1, 4),
       0.5, 1 + 3 * 0.5},
  };
  for (auto& c : cases) {
    auto rep = replay(c.g, c.eps, kDynEvery);
    check_run(r, c.name, rep, c.bound);
    const auto& s = rep.summary;
    double phase = std::ceil(c.eps * static_cast<double>(s.b_min));
    double ledger = static_cast<double>(s.steps) / phase + static_cast<double>(s.guess_switches);
    r.require(static_cast<double>(s.rebuilds) <= ledger, c.name + " rebuild ledger");
    r.detail << "rebuilds " << s.rebuilds << " <= " << ledger << ", mean work "
             << s.mean_update_ops << ", max work " << s.max_update_ops << "; ";
  }
  // Same density at 150 and 600 live disks; linear work would grow fourfold.
  auto small = replay(dyn_gen(tl::Mode::Vc, tl::Kind::Disk, 2, false, 44, kDynSteps, 150, 70, 1, 3),
                      0.3, 0);
  auto large = replay(dyn_gen(tl::Mode::Vc, tl::Kind::Disk, 2, false, 44, kDynSteps, 600, 140, 1, 3),
                      0.3, 0);
  double growth = large.summary.mean_update_ops / small.summary.mean_update_ops;
  r.require(growth <= kWorkGrowth, "per-update work grows too fast");
  r.detail << "work 150 -> 600 live: " << small.summary.mean_update_ops << " -> "
           << large.summary.mean_update_ops << " (x" << growth << " <= " << kWorkGrowth << ")";
}

// 5. Bipartite dynamic vertex cover.
void bipartite_vc(Outcome& r) {
  auto disks = replay(dyn_gen(tl::Mode::Vc, tl::Kind::Disk, 2, true, 51, kDynSteps, 150, 60, 1, 3),
                      kBipEps, kDynEvery);
  check_run(r, "disks", disks, 1 + 3 * kBipEps);
  auto boxes = replay(dyn_gen(tl::Mode::Vc, tl::Kind::Box, 3, true, 52, kDynSteps, 150, 22, 1, 4),
                      kBipEps, kDynEvery);
  check_run(r, "boxes d=3", boxes, 1 + 3 * kBipEps);
}

// 6. After round l no augmenting path of length <= 2l+1 remains.
void hopcroft_karp(Outcome& r) {
  std::mt19937_64 rng(606);
  const int L = rounds_for(kHkEps);
  int rounds_checked = 0;
  double worst = 1e9;
  for (int rep = 0; rep < 30; ++rep) {
    int n = 60 + (rep * 47) % 141;  // 60..200
    double range = 5 * std::sqrt(n);
    auto objs = rep % 2 ? testsupport::random_disks(rng, n, range, 1, 3, true)
                        : testsupport::random_boxes(rng, n, 2, range, 1, 5, true);
    auto g = oracles::ExplicitGraph::from_objects(objs);
    int last = 0;
    auto res = approx_mcm(objs, kHkEps, default_backend(objs[0].kind()), [&](int ell, const Mates& m) {
      auto p = pairs(m);
      r.require(oracles::is_valid_matching(objs, p, true), "invalid matching after a round");
      r.require(!oracles::has_augmenting_path(g, p, 2 * ell + 1), "short augmenting path remains");
      last = std::max(last, ell);
      ++rounds_checked;
    });
    r.require(last >= L, "fewer rounds than ceil(1/eps)");
    std::size_t exact = oracles::exact_bipartite_mcm(g).size();
    r.require(res.matching.size() * (L + 2) >= exact * (L + 1), "final size below (L+1)/(L+2)");
    if (exact > 0) worst = std::min(worst, double(res.matching.size()) / exact);
  }
  r.detail << "30 instances, L=" << L << ", " << rounds_checked << " rounds checked, min |M|/opt "
           << worst << " (bound " << double(L + 1) / (L + 2) << ")";
}

// 7. Dynamic bipartite maximum matching.
void dynamic_mcm(Outcome& r) {
  double bound = 1 / (1 - 3 * kMcmEps);  // opt/size, i.e. size >= (1-3eps) opt
  auto disks = replay(dyn_gen(tl::Mode::Mcm, tl::Kind::Disk, 2, true, 71, kDynSteps, 150, 60, 1, 3),
                      kMcmEps, 1);
  check_run(r, "disks", disks, bound);
  auto rects = replay(dyn_gen(tl::Mode::Mcm, tl::Kind::Rect, 2, true, 72, kDynSteps, 150, 70, 1, 6),
                      kMcmEps, 1);
  check_run(r, "rects", rects, bound);
  std::size_t worst = 0;
  for (auto* rep : {&disks, &rects})
    for (auto& row : rep->rows)
      if (row.oracle && row.size > 0)
        worst = std::max<std::size_t>(worst, *row.oracle > row.size ? *row.oracle - row.size : 0);
  r.detail << "largest gap to optimum " << worst;
}

// 8. Separating color families.
void color_family(Outcome& r) {
  int checked = 0;
  double worst = 0;
  for (int n = 4; n <= 16; ++n)
    for (int ell = 1; ell <= 4; ++ell) {
      auto f = build_color_family(n, ell, 1000 + n * 10 + ell);
      double bound = std::ldexp(1.0, ell) * (ell + 2) * std::log(n) + 1;
      r.require(f.verified && separates_all(f), "family does not separate");
      r.require(f.size() <= bound, "family too large");
      worst = std::max(worst, f.size() / bound);
      ++checked;
    }
  r.detail << checked << " (n, l) pairs verified, max size/bound " << worst;
}

std::vector<GeomObject> disk_cycle(int k) {
  std::vector<GeomObject> out;
  double R = 10, rad = R * std::sin(M_PI / k) * 1.05;
  for (int i = 0; i < k; ++i)
    out.push_back(make_disk(i, R * std::cos(2 * M_PI * i / k), R * std::sin(2 * M_PI * i / k), rad));
  return out;
}

// 9. Matching in non-bipartite intersection graphs.
void general_mcm(Outcome& r) {
  auto tri = disk_cycle(3), c5 = disk_cycle(5);
  r.require(oracles::ExplicitGraph::from_objects(c5).edge_count() == 5, "C5 construction");
  std::size_t t = approx_mcm_general(tri, kMcmEps).matching.size();
  std::size_t c = approx_mcm_general(c5, kMcmEps).matching.size();
  r.require(t == 1, "triangle");
  r.require(c == 2, "5-cycle");
  std::mt19937_64 rng(909);
  double worst = 1e9;
  for (int rep = 0; rep < 30; ++rep) {
    int n = 40 + (rep * 13) % 61;  // 40..100
    double range = 5 * std::sqrt(n);
    auto objs = rep % 2 ? testsupport::random_disks(rng, n, range, 1, 3)
                        : testsupport::random_boxes(rng, n, 2, range, 1, 5);
    auto m = approx_mcm_general(objs, kMcmEps).matching;
    r.require(oracles::is_valid_matching(objs, pairs(m), false), "invalid general matching");
    std::size_t exact = oracles::exact_mcm_general(oracles::ExplicitGraph::from_objects(objs)).size();
    r.require(m.size() >= (1 - kMcmEps) * exact - kTiny, "static ratio");
    if (exact > 0) worst = std::min(worst, double(m.size()) / exact);
  }
  r.detail << "triangle " << t << ", C5 " << c << ", 30 static instances min |M|/opt " << worst
           << " (bound " << 1 - kMcmEps << "); ";
  auto dyn = replay(dyn_gen(tl::Mode::McmGeneral, tl::Kind::Disk, 2, false, 91, 3000, 100, 50, 1, 3),
                    kMcmEps, 1);
  check_run(r, "dynamic disks", dyn, 1 / (1 - 3 * kMcmEps));
}

// Depth probed at every vertex of the coordinate grid of the arrangement.
int probe_depth(const std::vector<GeomObject>& rects) {
  std::vector<double> xs, ys;
  for (auto& o : rects) {
    xs.push_back(o.box().lo[0]);
    xs.push_back(o.box().hi[0]);
    ys.push_back(o.box().lo[1]);
    ys.push_back(o.box().hi[1]);
  }
  int best = 0;
  for (double x : xs)
    for (double y : ys) {
      int d = 0;
      for (auto& o : rects)
        d += o.box().lo[0] <= x && x <= o.box().hi[0] && o.box().lo[1] <= y && y <= o.box().hi[1];
      best = std::max(best, d);
    }
  return best;
}

bool crosses_boundary(const GeomObject& o, const Box& B) {
  Box bb = bounding_box(o);
  bool inside = true;
  for (int k = 0; k < B.dim; ++k) inside = inside && bb.lo[k] > B.lo[k] && bb.hi[k] < B.hi[k];
  bool meets;
  if (o.kind() == ShapeKind::Box) {
    meets = intersects(o.box(), B);
  } else {
    double dx = std::max({B.lo[0] - o.disk().center[0], 0.0, o.disk().center[0] - B.hi[0]});
    double dy = std::max({B.lo[1] - o.disk().center[1], 0.0, o.disk().center[1] - B.hi[1]});
    meets = dx * dx + dy * dy <= o.disk().radius * o.disk().radius;
  }
  return meets && !inside;
}

// 10. Static back ends.
void static_algorithms(Outcome& r) {
  std::mt19937_64 rng(1010);
  int worst_gap = -1000000;
  for (int rep = 0; rep < 30; ++rep) {
    int n = 30 + (rep * 17) % 51;  // 30..80
    auto objs = rep % 2 ? testsupport::random_disks(rng, n, 40, 1, 3)
                        : testsupport::random_fat_boxes(rng, n, 2, 40, 1, 4);
    auto mis = mis_fat(objs, kStaticEps);
    r.require(oracles::is_independent_set(objs, mis), "mis_fat not independent");
    int exact = n - static_cast<int>(oracles::exact_mvc(oracles::ExplicitGraph::from_objects(objs)).size());
    int gap = exact - static_cast<int>(mis.size());
    worst_gap = std::max(worst_gap, gap - static_cast<int>(std::ceil(kStaticEps * n)));
    r.require(gap <= std::ceil(kStaticEps * n), "mis_fat additive error");
  }
  r.detail << "mis_fat max (error - ceil(eps n)) " << worst_gap << "; ";

  double worst_balance = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int n = 20 + rep * 3, d = rep % 3 == 2 ? 3 : 2;
    auto objs = rep % 3 == 0 ? testsupport::random_disks(rng, n, 100, 0.5, 3)
                             : testsupport::random_fat_boxes(rng, n, d, 100, 0.5, 3);
    auto s = separator(objs);
    double bound = separator_balance_bound(n, s.B.dim, s.grid);
    r.require(s.inside.size() + s.outside.size() + s.crossing.size() == objs.size(), "partition");
    r.require(s.inside.size() <= bound && s.outside.size() <= bound, "separator balance");
    std::set<ObjectId> cross(s.crossing.begin(), s.crossing.end());
    for (auto& o : objs)
      r.require(cross.count(o.id) == static_cast<std::size_t>(crosses_boundary(o, s.B)),
                "crossing set");
    worst_balance = std::max(worst_balance, std::max(s.inside.size(), s.outside.size()) / bound);
  }
  r.detail << "separator 100 instances, max side/bound " << worst_balance << "; ";

  int used = 0;
  double worst_rect = 0;
  for (int rep = 0; rep < 80; ++rep) {
    auto rects = testsupport::random_boxes(rng, 40, 2, 20, 1, 8);
    auto vc = static_vc_rect(rects, kRectEps);
    r.require(oracles::is_vertex_cover(rects, vc), "static_vc_rect invalid");
    std::size_t opt = oracles::exact_mvc(oracles::ExplicitGraph::from_objects(rects)).size();
    if (rects.size() > (2 + kRectEps) * opt) continue;  // outside the size promise
    ++used;
    worst_rect = std::max(worst_rect, double(vc.size()) / opt);
    r.require(vc.size() <= (1.5 + 3 * kRectEps) * opt + kTiny, "static_vc_rect ratio");
  }
  r.require(used >= 20, "too few promise-conforming rectangle instances");
  r.detail << "static_vc_rect " << used << " instances, max ratio " << worst_rect << " (bound "
           << 1.5 + 3 * kRectEps << "); ";

  int max_rest = 0;
  for (int rep = 0; rep < 20; ++rep) {
    auto rects = testsupport::random_boxes(rng, 100, 2, 50, 1, 10);
    auto t = remove_triangles(rects);
    std::vector<GeomObject> rest;
    for (auto& o : rects)
      if (std::binary_search(t.rest.begin(), t.rest.end(), o.id)) rest.push_back(o);
    int d = probe_depth(rest);
    max_rest = std::max(max_rest, d);
    r.require(d <= 2, "triangle removal left depth 3");
  }
  r.detail << "triangle removal max probed depth " << max_rest;
}

oracles::ExplicitGraph random_graph(std::mt19937_64& rng, int n, double p, bool two_sided) {
  std::bernoulli_distribution edge(p), coin(0.5);
  std::vector<Side> sides;
  if (two_sided)
    for (int i = 0; i < n; ++i) sides.push_back(coin(rng) ? Side::Left : Side::Right);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((!two_sided || sides[i] != sides[j]) && edge(rng)) edges.emplace_back(i, j);
  return oracles::ExplicitGraph::from_edges(n, edges, sides);
}

// 11. Koenig equality on bipartite graphs and MCM <= LP <= MVC <= 2 LP on all.
void sandwich(Outcome& r) {
  std::mt19937_64 rng(1111);
  int bip = 0;
  for (int rep = 0; rep < 100; ++rep) {
    oracles::ExplicitGraph g;
    switch (rep % 4) {
      case 0: g = random_graph(rng, 40, 0.08, true); break;
      case 1: g = random_graph(rng, 40, 0.08, false); break;
      case 2: g = oracles::ExplicitGraph::from_objects(testsupport::random_disks(rng, 60, 50, 1, 4, true)); break;
      default: g = oracles::ExplicitGraph::from_objects(testsupport::random_boxes(rng, 60, 2, 50, 1, 6)); break;
    }
    auto mvc = oracles::exact_mvc(g).size();
    auto lp = oracles::exact_fractional_vc(g).value;
    auto mcm = oracles::exact_mcm_general(g).size();
    if (g.bipartite) {
      ++bip;
      r.require(mvc == oracles::exact_bipartite_mcm(g).size(), "Koenig");
      r.require(mvc == mcm, "bipartite MVC != general MCM");
    }
    r.require(mcm <= lp + kTiny && lp <= mvc + kTiny && mvc <= 2 * lp + kTiny, "sandwich");
  }
  r.detail << "100 graphs (" << bip << " bipartite)";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  std::vector<Criterion> all = {
      {"mwu lp quality", mwu_lp},
      {"kernel bound", kernel},
      {"min-pair oracle equivalence", min_pair_trace},
      {"dynamic vc end to end", dynamic_vc},
      {"bipartite dynamic vc", bipartite_vc},
      {"hopcroft-karp round invariant", hopcroft_karp},
      {"dynamic bipartite mcm", dynamic_mcm},
      {"color family", color_family},
      {"non-bipartite mcm", general_mcm},
      {"static algorithms", static_algorithms},
      {"koenig/lp sandwich", sandwich},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      all[i].run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s [%zu] %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name,
                since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
