#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "geodyn/geometry.hpp"

namespace geodyn {

struct SeparatorResult {
  Box B;
  std::vector<ObjectId> inside;    // contained in the open box
  std::vector<ObjectId> outside;   // disjoint from the closed box
  std::vector<ObjectId> crossing;  // meet the boundary
  double beta = 0;                 // 1/(2^d+1)
  double r = 0;                    // side of the smallest dense cube B0
  double t = 0;                    // B has side (1+t)r
  int h = 0;
  int grid = 0;                    // grid resolution used for rounding
};

// Hypercube whose interior and exterior each hold a bounded fraction of the
// objects while few small objects cross its boundary. Requires n >= 2 fat
// objects.
SeparatorResult separator(std::span<const GeomObject> objs, const FatnessConfig& fat = {});

// Upper bound on |inside| and |outside|: 2^d n/(2^d+1) plus the rounding slack.
double separator_balance_bound(std::size_t n, int d, int grid);

// Independent set of fat objects by separator divide and conquer; components
// smaller than ceil(1/eps^2) are solved exactly.
std::vector<ObjectId> mis_fat(std::span<const GeomObject> objs, double eps,
                              const FatnessConfig& fat = {});
std::vector<ObjectId> static_vc_fat(std::span<const GeomObject> objs, double eps,
                                    const FatnessConfig& fat = {});

struct TriangleRemoval {
  std::vector<ObjectId> rest;                     // max depth <= 2
  std::vector<std::array<ObjectId, 3>> triangles;  // vertex-disjoint
};

TriangleRemoval remove_triangles(std::span<const GeomObject> rects);

// Largest number of rectangles sharing a point.
int max_depth(std::span<const GeomObject> rects);

struct DominationSplit {
  std::vector<ObjectId> R1;  // not dominated by anything
  std::vector<ObjectId> R2;
};

DominationSplit split_domination(std::span<const GeomObject> rects);

inline constexpr std::uint64_t kDefaultMisBudget = 1'000'000;

// Independent set of a depth-2 rectangle family without dominating pairs.
// Exact unless the node budget runs out, in which case components are split
// along BFS layers and *fell_back is set.
std::vector<ObjectId> mis_trianglefree(std::span<const GeomObject> rects, double eps,
                                       std::uint64_t budget = kDefaultMisBudget,
                                       bool* fell_back = nullptr);

struct RectVcTrace {
  std::size_t triangles = 0;
  std::size_t r1 = 0, r2 = 0, s1 = 0, s2 = 0;
  bool first = true;  // S1 + R2 was returned
  bool fallback = false;
};

std::vector<ObjectId> static_vc_rect(std::span<const GeomObject> rects, double eps,
                                     RectVcTrace* trace = nullptr);

// The smaller side; ties go to Left.
std::vector<ObjectId> static_vc_bipartite(std::span<const GeomObject> objs);

}  // namespace geodyn
