#include <doctest.h>

#include <map>
#include <random>
#include <unordered_set>

#include "geodyn/general_matching.hpp"
#include "geodyn/oracles.hpp"
#include "support.hpp"

using namespace geodyn;

namespace {

std::vector<oracles::IdPair> pairs(const std::vector<MatchEdge>& m) {
  std::vector<oracles::IdPair> out;
  for (auto& e : m) out.emplace_back(e.a, e.b);
  return out;
}

std::vector<oracles::IdPair> pairs(const Mates& m) { return pairs(edges_of(m)); }

void flip(Mates& mates, const std::vector<ObjectId>& path) {
  for (std::size_t k = 0; k + 1 < path.size(); k += 2) {
    mates[path[k]] = path[k + 1];
    mates[path[k + 1]] = path[k];
  }
}

std::size_t exact_size(const std::vector<GeomObject>& objs) {
  return oracles::exact_mcm_general(oracles::ExplicitGraph::from_objects(objs)).size();
}

// Disks on a circle, each touching only its two neighbours.
std::vector<GeomObject> disk_cycle(int k) {
  std::vector<GeomObject> out;
  double R = 10, r = R * std::sin(M_PI / k) * 1.05;
  for (int i = 0; i < k; ++i)
    out.push_back(make_disk(i, R * std::cos(2 * M_PI * i / k), R * std::sin(2 * M_PI * i / k), r));
  return out;
}

}  // namespace

TEST_CASE("color family separation") {
  for (int n = 4; n <= 16; ++n)
    for (int ell = 1; ell <= 4; ++ell) {
      auto f = build_color_family(n, ell, 1000 + n * 10 + ell);
      CHECK(f.verified);
      CHECK(separates_all(f));
      CHECK(f.size() <= std::ldexp(1.0, ell) * (ell + 2) * std::log(n) + 1);
    }
  auto f = build_color_family(12, 3, 7);
  CHECK(f.size() == static_cast<std::size_t>(std::ceil(8 * 5 * std::log(12.0))));
  auto big = build_color_family(300, 6, 3);
  CHECK_FALSE(big.verified);
  CHECK(big.size() == color_family_size(300, 6));
  CHECK_THROWS_AS(build_color_family(0, 2, 1), ContractViolation);
}

TEST_CASE("odd cycles") {
  auto tri = disk_cycle(3);
  REQUIRE(oracles::ExplicitGraph::from_objects(tri).edge_count() == 3);
  CHECK(approx_mcm_general(tri, 0.25).matching.size() == 1);

  auto c5 = disk_cycle(5);
  REQUIRE(oracles::ExplicitGraph::from_objects(c5).edge_count() == 5);
  GeneralMatcher eng(Backend::NaiveScan, ShapeKind::Disk, 2);
  for (auto& o : c5) eng.insert(o);
  Mates mates{{0, 1}, {1, 0}};
  auto paths = eng.maximal_aug_paths(mates, 1);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].size() == 4);
  CHECK(approx_mcm_general(c5, 0.25).matching.size() == 2);
}

TEST_CASE("general rounds leave no short augmenting paths") {
  std::mt19937_64 rng(91);
  const double eps = 0.25;
  const int L = rounds_for(eps);
  for (int rep = 0; rep < 10; ++rep) {
    auto objs = rep % 2 ? testsupport::random_disks(rng, 80, 35, 1, 3, false)
                        : testsupport::random_boxes(rng, 80, 2, 35, 1, 5, false);
    auto g = oracles::ExplicitGraph::from_objects(objs);
    bool ok = true;
    auto r = approx_mcm_general(objs, eps, default_backend(objs[0].kind()),
                                [&](int ell, const Mates& m) {
                                  auto p = pairs(m);
                                  ok = ok && oracles::is_valid_matching(objs, p, false);
                                  ok = ok && !oracles::has_augmenting_path(g, p, 2 * ell + 1);
                                });
    CHECK(ok);
    std::size_t exact = exact_size(objs);
    CHECK(r.matching.size() * (L + 2) >= exact * (L + 1));
    CHECK(r.stats.nonsimple_paths == 0);
    CHECK(r.stats.candidate_repeats == 0);
  }
}

TEST_CASE("paths found in one round are maximal in G") {
  std::mt19937_64 rng(93);
  for (int rep = 0; rep < 8; ++rep) {
    auto objs = testsupport::random_disks(rng, 60, 25, 1, 3, false);
    MaximalMatching m0(Backend::DiskGridHierarchy, ShapeKind::Disk, 2, false);
    GeneralMatcher eng(Backend::DiskGridHierarchy, ShapeKind::Disk, 2);
    for (auto& o : objs) {
      m0.insert(o);
      eng.insert(o);
    }
    Mates mates = m0.mates();
    for (int ell = 1; ell <= 3; ++ell) {
      auto paths = eng.maximal_aug_paths(mates, ell);
      std::unordered_set<ObjectId> used;
      for (auto& p : paths) {
        CHECK(p.size() == static_cast<std::size_t>(2 * ell + 2));
        used.insert(p.begin(), p.end());
      }
      std::vector<GeomObject> rest;
      for (auto& o : objs)
        if (!used.count(o.id)) rest.push_back(o);
      std::vector<oracles::IdPair> mrest;
      for (auto& e : edges_of(mates))
        if (!used.count(e.a)) mrest.emplace_back(e.a, e.b);
      CHECK_FALSE(oracles::has_augmenting_path(oracles::ExplicitGraph::from_objects(rest), mrest,
                                               2 * ell + 1));
      for (auto& p : paths) flip(mates, p);
    }
  }
}

TEST_CASE("approx_mcm_general quality") {
  std::mt19937_64 rng(97);
  std::vector<GeomObject> disjoint;
  for (int k = 0; k < 20; ++k) {
    disjoint.push_back(make_disk(2 * k, 10.0 * k, 0, 1));
    disjoint.push_back(make_disk(2 * k + 1, 10.0 * k + 1, 0, 1));
  }
  CHECK(approx_mcm_general(disjoint, 0.25).matching.size() == 20);
  for (int rep = 0; rep < 6; ++rep) {
    auto objs = testsupport::random_boxes(rng, 100, 2, 40, 1, 5, false);
    auto r = approx_mcm_general(objs, 0.25);
    CHECK(oracles::is_valid_matching(objs, pairs(r.matching), false));
    CHECK(r.matching.size() >= 0.75 * exact_size(objs));
  }
}

TEST_CASE("label universe doubles and halves") {
  GeneralMatcher eng(Backend::DiskGridHierarchy, ShapeKind::Disk, 2);
  for (int i = 0; i < 5; ++i) eng.insert(make_disk(i, 3.0 * i, 0, 1));
  CHECK(eng.label_universe() == 8);
  CHECK(eng.stats().relabels_up == 1);
  std::set<int> labels;
  for (int i = 0; i < 5; ++i) labels.insert(eng.label(i));
  CHECK(labels.size() == 5);
  CHECK(*labels.rbegin() < 8);
  for (int i = 5; i < 9; ++i) eng.insert(make_disk(i, 3.0 * i, 0, 1));
  CHECK(eng.label_universe() == 16);
  for (int i = 0; i < 6; ++i) eng.erase(i);
  CHECK(eng.label_universe() == 8);
  CHECK(eng.stats().relabels_down == 1);
  eng.erase(6);
  CHECK(eng.stats().relabels_down == 1);
  eng.erase(7);
  CHECK(eng.stats().relabels_down == 2);
  CHECK(eng.label_universe() == 4);
}

TEST_CASE("dynamic general matching trace") {
  std::mt19937_64 rng(101);
  const double eps = 0.25;
  DynamicGeneralMatching d(Backend::DiskGridHierarchy, ShapeKind::Disk, 2, eps);
  std::map<ObjectId, GeomObject> live;
  ObjectId next = 0;
  for (int step = 0; step < 3000; ++step) {
    if (live.size() < 120 || rng() % 2) {
      auto o = testsupport::random_disks(rng, 1, 45, 1, 3, false, next++)[0];
      d.insert(o);
      live.emplace(o.id, o);
    } else {
      auto it = live.begin();
      std::advance(it, rng() % live.size());
      d.erase(it->first);
      live.erase(it);
    }
    if (step % 200 == 0) {
      std::vector<GeomObject> objs;
      for (auto& [id, o] : live) objs.push_back(o);
      CHECK(oracles::is_valid_matching(objs, pairs(d.matching()), false));
      CHECK(d.size() >= (1 - 3 * eps) * exact_size(objs));
    }
  }
  CHECK(d.engine_stats().aug.nonsimple_paths == 0);
}
