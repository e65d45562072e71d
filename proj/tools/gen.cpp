#include "gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace geodyn::tools {

namespace {

struct Rng {
  std::mt19937_64 bits;
  double unit() { return static_cast<double>(bits() >> 11) * 0x1p-53; }  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(bits() % n); }
};

// Inverse CDF of the density proportional to r^-alpha on [lo, hi].
double power_law(double u, double lo, double hi, double alpha) {
  if (std::abs(alpha - 1) < 1e-12) return lo * std::pow(hi / lo, u);
  double a = 1 - alpha;
  double lo_a = std::pow(lo, a), hi_a = std::pow(hi, a);
  return std::pow(lo_a + u * (hi_a - lo_a), 1 / a);
}

}  // namespace

Trace gen_instance(const GenParams& p) {
  const auto& h = p.header;
  if (h.dim < 1 || h.dim > 4 || (h.kind != Kind::Box && h.dim != 2))
    throw std::invalid_argument("bad dimension for this kind");
  if (!(p.range > 0) || !(p.rmin > 0) || !(p.spread >= 1) || !(p.phi >= 1))
    throw std::invalid_argument("need range > 0, rmin > 0, spread >= 1, phi >= 1");
  if (!(p.churn >= 0 && p.churn < 1)) throw std::invalid_argument("churn must be in [0, 1)");
  if (h.mode == Mode::Mcm && !h.bipartite) throw std::invalid_argument("mode mcm needs bipartite");
  if (h.mode == Mode::McmGeneral && h.bipartite)
    throw std::invalid_argument("mode mcmg needs a one-sided instance");

  Rng rng{std::mt19937_64(p.seed)};
  const double rmax = p.rmin * p.spread;
  auto size = [&] {
    double u = rng.unit();
    return p.dist == RadiusDist::Uniform ? p.rmin + u * (rmax - p.rmin)
                                         : std::clamp(power_law(u, p.rmin, rmax, p.alpha), p.rmin, rmax);
  };

  Trace t;
  t.header = h;
  std::vector<std::uint64_t> live;
  std::uint64_t next = 0;
  std::size_t inserts = 0;
  while (p.steps > 0 ? t.ops.size() < p.steps : inserts < p.n) {
    TraceOp op;
    bool del = !live.empty() && ((p.max_live > 0 && live.size() >= p.max_live) || rng.unit() < p.churn);
    if (del) {
      std::size_t i = rng.index(live.size());
      op.type = TraceOp::Delete;
      op.id = live[i];
      live[i] = live.back();
      live.pop_back();
    } else {
      op.type = TraceOp::Insert;
      op.id = next++;
      if (h.bipartite) op.side = rng.unit() < 0.5 ? 'L' : 'R';
      if (h.kind == Kind::Disk) {
        double x = rng.uniform(0, p.range), y = rng.uniform(0, p.range);
        op.params = {x, y, size()};
      } else {
        double base = size();
        for (int k = 0; k < h.dim; ++k) {
          double lo = rng.uniform(0, p.range);
          double side = h.kind == Kind::Box ? std::min(base * rng.uniform(1, p.phi), rmax) : size();
          op.params.push_back(lo);
          op.params.push_back(lo + side);
        }
      }
      live.push_back(op.id);
      ++inserts;
    }
    t.ops.push_back(std::move(op));
  }
  return t;
}

}  // namespace geodyn::tools
