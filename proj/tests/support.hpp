#pragma once

#include <random>
#include <vector>

#include "geodyn/geometry.hpp"

namespace testsupport {

using geodyn::GeomObject;
using geodyn::ObjectId;
using geodyn::Side;

inline std::vector<GeomObject> random_disks(std::mt19937_64& rng, int n, double range, double rmin,
                                            double rmax, bool bipartite = false, ObjectId first = 0) {
  std::uniform_real_distribution<double> pos(0, range), rad(rmin, rmax);
  std::bernoulli_distribution coin(0.5);
  std::vector<GeomObject> out;
  for (int i = 0; i < n; ++i) {
    Side s = bipartite ? (coin(rng) ? Side::Left : Side::Right) : Side::None;
    double x = pos(rng), y = pos(rng);
    out.push_back(geodyn::make_disk(first + i, x, y, rad(rng), s));
  }
  return out;
}

inline std::vector<GeomObject> random_boxes(std::mt19937_64& rng, int n, int dim, double range,
                                            double smin, double smax, bool bipartite = false,
                                            ObjectId first = 0) {
  std::uniform_real_distribution<double> pos(0, range), side(smin, smax);
  std::bernoulli_distribution coin(0.5);
  std::vector<GeomObject> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> lo(dim), hi(dim);
    for (int k = 0; k < dim; ++k) {
      lo[k] = pos(rng);
      hi[k] = lo[k] + side(rng);
    }
    Side s = bipartite ? (coin(rng) ? Side::Left : Side::Right) : Side::None;
    out.push_back(geodyn::make_box(first + i, lo, hi, s));
  }
  return out;
}

// Boxes whose side lengths differ by at most a factor phi.
inline std::vector<GeomObject> random_fat_boxes(std::mt19937_64& rng, int n, int dim, double range,
                                                double smin, double smax, double phi = 2.0,
                                                bool bipartite = false) {
  std::uniform_real_distribution<double> pos(0, range), base(smin, smax), stretch(1.0, phi);
  std::bernoulli_distribution coin(0.5);
  std::vector<GeomObject> out;
  for (int i = 0; i < n; ++i) {
    double s0 = base(rng);
    std::vector<double> lo(dim), hi(dim);
    for (int k = 0; k < dim; ++k) {
      lo[k] = pos(rng);
      hi[k] = lo[k] + s0 * stretch(rng);
    }
    Side s = bipartite ? (coin(rng) ? Side::Left : Side::Right) : Side::None;
    out.push_back(geodyn::make_box(i, lo, hi, s));
  }
  return out;
}

// Rectangles drawn on a coarse integer lattice so that shared coordinates
// and tangencies actually occur.
inline std::vector<GeomObject> lattice_rects(std::mt19937_64& rng, int n, int range, int maxside) {
  std::uniform_int_distribution<int> pos(0, range), side(0, maxside);
  std::vector<GeomObject> out;
  for (int i = 0; i < n; ++i) {
    double x = pos(rng), y = pos(rng);
    out.push_back(geodyn::make_rect(i, x, y, x + side(rng), y + side(rng)));
  }
  return out;
}

inline std::size_t count_edges(const std::vector<GeomObject>& objs) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < objs.size(); ++i)
    for (std::size_t j = i + 1; j < objs.size(); ++j) m += geodyn::intersects(objs[i], objs[j]);
  return m;
}

}  // namespace testsupport
