#include <doctest.h>

#include <random>

#include "geodyn/lp_kernel.hpp"
#include "geodyn/oracles.hpp"
#include "support.hpp"

using namespace geodyn;

namespace {

std::unique_ptr<WeightedStore> load(const std::vector<GeomObject>& objs, Backend b, ShapeKind k,
                                    int dim, bool bip = false) {
  auto s = std::make_unique<WeightedStore>(b, k, dim, bip);
  for (auto& o : objs) s->insert(o);
  return s;
}

void check_feasible(const std::vector<GeomObject>& objs, const FractionalCover& c) {
  double total = 0;
  for (auto& o : objs) {
    double x = c.x(o.id);
    CHECK(x >= 0);
    CHECK(x <= 1);
    total += x;
  }
  CHECK(total == doctest::Approx(c.size()).epsilon(1e-9));
  for (std::size_t i = 0; i < objs.size(); ++i)
    for (std::size_t j = i + 1; j < objs.size(); ++j)
      if (adjacent(objs[i], objs[j])) CHECK(c.x(objs[i].id) + c.x(objs[j].id) >= 1 - 1e-9);
}

}  // namespace

TEST_CASE("mwu single pair") {
  std::vector<GeomObject> objs{make_disk(1, 0, 0, 1), make_disk(2, 1, 0, 1)};
  auto ps = load(objs, Backend::NaiveScan, ShapeKind::Disk, 2);
  auto& s = *ps;
  auto r = mwu_attempt(s, 1.2, 0.05);
  REQUIRE(r.cover);
  check_feasible(objs, *r.cover);
  CHECK(r.cover->size() <= 1.2 + 1e-9);
  CHECK(s.non_unit_count() == 0);
  // Budget below the optimum must fail.
  CHECK_FALSE(mwu_attempt(s, 0.8, 0.05).cover);
  CHECK(s.non_unit_count() == 0);
}

TEST_CASE("mwu triangle feasible at 1.8, infeasible at 1.2") {
  std::vector<GeomObject> objs{make_disk(1, 0, 0, 1), make_disk(2, 1, 0, 1),
                               make_disk(3, 0.5, 0.8, 1)};
  auto ps = load(objs, Backend::DiskGridHierarchy, ShapeKind::Disk, 2);
  auto& s = *ps;
  auto ok = mwu_attempt(s, 1.8, 0.05);
  REQUIRE(ok.cover);
  check_feasible(objs, *ok.cover);
  CHECK(ok.cover->size() <= 1.8 + 1e-9);
  auto bad = mwu_attempt(s, 1.2, 0.05);
  CHECK_FALSE(bad.cover);
  CHECK(bad.stats.iterations <= bad.stats.cap);
  CHECK(s.non_unit_count() == 0);
}

TEST_CASE("solve_fractional_vc on small graphs") {
  const double delta = 0.05;
  SUBCASE("empty graph") {
    std::vector<GeomObject> objs{make_disk(1, 0, 0, 1), make_disk(2, 10, 0, 1)};
    auto ps = load(objs, Backend::NaiveScan, ShapeKind::Disk, 2);
    auto& s = *ps;
    auto c = solve_fractional_vc(s, delta);
    CHECK(c.size() == 0);
    CHECK(c.x(1) == 0);
  }
  SUBCASE("disjoint pairs") {
    std::vector<GeomObject> objs;
    for (int k = 0; k < 6; ++k) {
      objs.push_back(make_disk(2 * k, 10.0 * k, 0, 1));
      objs.push_back(make_disk(2 * k + 1, 10.0 * k + 1, 0, 1));
    }
    auto ps = load(objs, Backend::DiskGridHierarchy, ShapeKind::Disk, 2);
    auto& s = *ps;
    LpSolveStats st;
    auto c = solve_fractional_vc(s, delta, &st);
    check_feasible(objs, c);
    CHECK(c.size() <= 6 * (1 + 5 * delta));
    CHECK(st.feasible.back() == true);
  }
  SUBCASE("star") {
    std::vector<GeomObject> objs{make_rect(0, 0, 0, 10, 1)};
    for (int k = 1; k <= 8; ++k) objs.push_back(make_rect(k, k, 0.5, k + 0.2, 3));
    auto ps = load(objs, Backend::BoxRangeTree, ShapeKind::Box, 2);
    auto& s = *ps;
    auto c = solve_fractional_vc(s, delta);
    check_feasible(objs, c);
    CHECK(c.size() <= 1 + 5 * delta);
  }
}

TEST_CASE("solve_fractional_vc against the exact LP") {
  std::mt19937_64 rng(11);
  const double delta = 0.05;
  for (int rep = 0; rep < 4; ++rep) {
    auto objs = testsupport::random_boxes(rng, 100, 2, 100, 1, 8);
    auto ps = load(objs, Backend::BoxRangeTree, ShapeKind::Box, 2);
    auto& s = *ps;
    auto c = solve_fractional_vc(s, delta);
    check_feasible(objs, c);
    double lp = oracles::exact_fractional_vc(oracles::ExplicitGraph::from_objects(objs)).value;
    CHECK(c.size() <= (1 + 5 * delta) * lp + 1e-9);
    CHECK(c.size() >= lp - 1e-6);
  }
  for (int rep = 0; rep < 3; ++rep) {
    auto objs = testsupport::random_disks(rng, 120, 100, 1, 5, true);
    auto ps = load(objs, Backend::DiskGridHierarchy, ShapeKind::Disk, 2, true);
    auto& s = *ps;
    auto c = solve_fractional_vc(s, delta);
    check_feasible(objs, c);
    double lp = oracles::exact_fractional_vc(oracles::ExplicitGraph::from_objects(objs)).value;
    CHECK(c.size() <= (1 + 5 * delta) * lp + 1e-9);
  }
}

TEST_CASE("build_kernel partitions by thresholds") {
  const double gamma = 0.2, delta = 0.04;
  SUBCASE("edge") {
    auto k = build_kernel(FractionalCover::from_values({{1, 0.5}, {2, 0.5}}), gamma, delta);
    CHECK(k.lambda == doctest::Approx(std::sqrt(gamma * delta)));
    CHECK(k.alpha >= 0.5 - gamma - k.lambda - 1e-12);
    CHECK(k.alpha <= 0.5 - k.lambda + 1e-12);
    CHECK(k.K == std::vector<ObjectId>{1, 2});
    CHECK(k.H.empty());
  }
  SUBCASE("star") {
    std::unordered_map<ObjectId, double> x{{0, 1.0}};
    for (ObjectId v = 1; v <= 5; ++v) x[v] = 0;
    auto k = build_kernel(FractionalCover::from_values(x), gamma, delta);
    CHECK(k.H == std::vector<ObjectId>{0});
    CHECK(k.K.empty());
    CHECK(lift_cover(k, {}) == std::vector<ObjectId>{0});
  }
  SUBCASE("alpha avoids crowded window") {
    // The smallest admissible alpha has a value in its window; a larger one does not.
    double lambda = std::sqrt(gamma * delta);
    double lo = 0.5 - gamma - lambda;
    double a0 = std::ceil(lo / lambda - 1e-9) * lambda;
    auto k = build_kernel(FractionalCover::from_values({{1, a0 + lambda / 2}, {2, 0.6}}), gamma,
                          delta);
    CHECK(k.window == 0);
    CHECK(k.alpha > a0);
  }
}

TEST_CASE("kernel and lift on random instances") {
  std::mt19937_64 rng(5);
  const double gamma = 0.225, delta = 0.05;
  for (int rep = 0; rep < 3; ++rep) {
    auto objs = testsupport::random_disks(rng, 150, 100, 1, 6);
    auto ps = load(objs, Backend::DiskGridHierarchy, ShapeKind::Disk, 2);
    auto& s = *ps;
    auto c = solve_fractional_vc(s, delta);
    auto k = build_kernel(c, gamma, delta);
    CHECK(static_cast<double>(k.K.size()) <= c.size() / k.alpha + 1e-9);
    // Edges leaving L land in H.
    for (std::size_t i = 0; i < objs.size(); ++i)
      for (std::size_t j = 0; j < objs.size(); ++j) {
        if (i == j || !adjacent(objs[i], objs[j])) continue;
        ObjectId u = objs[i].id, v = objs[j].id;
        if (!k.in_K(u) && !k.in_H(u)) CHECK(k.in_H(v));
      }
    // Lift an exact cover of the kernel.
    std::vector<GeomObject> kobjs;
    for (ObjectId id : k.K) kobjs.push_back(s.object(id));
    auto sk = oracles::exact_mvc(oracles::ExplicitGraph::from_objects(kobjs));
    auto cover = lift_cover(k, sk, &s);
    CHECK(oracles::is_vertex_cover(objs, cover));
  }
}

TEST_CASE("lift_cover rejects bad kernel covers") {
  WeightedStore s(Backend::NaiveScan, ShapeKind::Disk, 2);
  s.insert(make_disk(1, 0, 0, 1));
  s.insert(make_disk(2, 1, 0, 1));
  auto k = build_kernel(FractionalCover::from_values({{1, 0.5}, {2, 0.5}}), 0.2, 0.04);
  std::vector<ObjectId> none;
  CHECK_THROWS_AS(lift_cover(k, none, &s), ContractViolation);
  std::vector<ObjectId> outside{7};
  CHECK_THROWS_AS(lift_cover(k, outside), ContractViolation);
}
