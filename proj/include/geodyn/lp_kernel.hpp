#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "geodyn/minpair.hpp"

namespace geodyn {

// x_v for every live object of a WeightedStore. Objects whose MWU weight was
// never raised share one implicit value; the rest are stored explicitly.
class FractionalCover {
 public:
  FractionalCover() = default;
  // Explicit values only; absent ids are 0.
  static FractionalCover from_values(std::unordered_map<ObjectId, double> x);

  double x(ObjectId id) const;
  double size() const { return size_; }
  double z() const { return z_; }
  long double W() const { return W_; }
  double delta() const { return delta_; }
  double implicit_value() const { return implicit_; }
  std::size_t explicit_count() const { return explicit_.size(); }

  // Visits every id with x >= threshold. Untouched ids are only enumerated
  // when the shared implicit value reaches the threshold.
  void for_each_at_least(double threshold, const std::function<void(ObjectId, double)>& fn) const;

 private:
  friend struct MwuAccess;
  std::unordered_map<ObjectId, double> explicit_;
  double implicit_ = 0;
  const WeightedStore* universe_ = nullptr;
  double size_ = 0;
  double z_ = 0;
  long double W_ = 0;
  double delta_ = 0;
};

struct MwuStats {
  std::uint64_t iterations = 0;
  std::uint64_t cap = 0;
  bool certified = false;  // stopped early by the matching lower bound
  double lower_bound = 0;  // largest fractional matching value seen, <= LP
  std::size_t touched = 0;
};

struct MwuResult {
  std::optional<FractionalCover> cover;  // empty when infeasible
  MwuStats stats;
};

// One MWU run with size budget z. Weights are back to 1 on return. The run
// stops as infeasible once the fractional matching built from the chosen
// pairs exceeds z / slack; slack = 1 stops only when z is below the LP value.
MwuResult mwu_attempt(WeightedStore& store, double z, double delta, double slack = 1);

// Iteration cap ceil(z ln n / (ln(1+delta) - delta/(1+delta))).
std::uint64_t mwu_cap(double z, std::size_t n, double delta);

struct LpSolveStats {
  std::vector<double> z_tried;
  std::vector<bool> feasible;
  std::vector<MwuStats> attempts;
  std::uint64_t total_iterations = 0;
};

// Feasible budget z_k on the (1+delta)^k grid with z_{k-1} infeasible (or
// k = 0). The search starts at the grid point just below z_floor, which
// should be a lower bound on the LP value, climbs until an attempt succeeds
// and then bisects. Attempts run with slack 1 + delta, so z_{k-1} <
// (1+delta) LP and z_k < (1+delta)^2 LP.
FractionalCover solve_fractional_vc(WeightedStore& store, double delta,
                                    LpSolveStats* stats = nullptr, double z_floor = 0);

struct Kernel {
  double alpha = 0, lambda = 0, gamma = 0, delta = 0;
  std::vector<ObjectId> K, H;  // sorted; everything else is L
  double cover_size = 0;       // sum of x over all objects
  std::size_t window = 0;      // |{alpha <= x < alpha + lambda}|

  bool in_K(ObjectId id) const { return std::binary_search(K.begin(), K.end(), id); }
  bool in_H(ObjectId id) const { return std::binary_search(H.begin(), H.end(), id); }
};

Kernel build_kernel(const FractionalCover& cover, double gamma, double delta);

// S_K together with H. When objects are supplied, checks that S_K covers
// every edge inside K.
std::vector<ObjectId> lift_cover(const Kernel& kernel, std::span<const ObjectId> s_k,
                                 const WeightedStore* objects = nullptr);

}  // namespace geodyn
