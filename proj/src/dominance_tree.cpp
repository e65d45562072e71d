#include "geodyn/dominance_tree.hpp"

#include <algorithm>
#include <limits>

namespace geodyn {

namespace {
// Ranges at or below this size are scanned instead of carrying another level.
constexpr std::uint32_t kBucket = 24;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

struct DominanceTree::Level {
  const DominanceTree* owner;
  int j;
  std::vector<std::uint32_t> order;
  std::vector<double> keys;
  bool bucket = false;
  bool last = false;
  std::vector<double> mn;
  std::vector<std::unique_ptr<Level>> sec;

  Level(const DominanceTree* o, int level, std::vector<std::uint32_t> idx)
      : owner(o), j(level), order(std::move(idx)) {
    const auto& P = owner->pts_;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return P[a][j] < P[b][j] || (P[a][j] == P[b][j] && a < b);
    });
    keys.resize(order.size());
    for (size_t p = 0; p < order.size(); ++p) keys[p] = P[order[p]][j];
    auto n = static_cast<std::uint32_t>(order.size());
    if (n <= kBucket) {
      bucket = true;
    } else if (j == owner->m_ - 2) {
      last = true;
      mn.assign(4 * n, kInf);
      build_min(1, 0, n);
    } else {
      sec.resize(4 * n);
      build_sec(1, 0, n);
    }
  }

  void build_min(std::uint32_t node, std::uint32_t l, std::uint32_t r) {
    if (r - l == 1) {
      std::uint32_t i = order[l];
      mn[node] = owner->alive_[i] ? owner->pts_[i][owner->m_ - 1] : kInf;
      return;
    }
    std::uint32_t mid = (l + r) / 2;
    build_min(2 * node, l, mid);
    build_min(2 * node + 1, mid, r);
    mn[node] = std::min(mn[2 * node], mn[2 * node + 1]);
  }

  void build_sec(std::uint32_t node, std::uint32_t l, std::uint32_t r) {
    if (r - l <= kBucket) return;
    sec[node] = std::make_unique<Level>(
        owner, j + 1, std::vector<std::uint32_t>(order.begin() + l, order.begin() + r));
    std::uint32_t mid = (l + r) / 2;
    build_sec(2 * node, l, mid);
    build_sec(2 * node + 1, mid, r);
  }

  // Checks coordinates from `from` on for points order[l..r).
  std::optional<std::uint32_t> scan(std::uint32_t l, std::uint32_t r, int from, const Point& a,
                                    IdFilter accept) const {
    const auto& P = owner->pts_;
    int m = owner->m_;
    for (std::uint32_t p = l; p < r; ++p) {
      std::uint32_t i = order[p];
      if (!owner->alive_[i]) continue;
      bool ok = true;
      for (int c = from; c < m && ok; ++c) ok = P[i][c] <= a[c];
      if (ok && accept(owner->ids_[i])) return i;
    }
    return std::nullopt;
  }

  std::optional<std::uint32_t> query(const Point& a, IdFilter accept) const {
    auto k = static_cast<std::uint32_t>(std::upper_bound(keys.begin(), keys.end(), a[j]) -
                                        keys.begin());
    if (k == 0) return std::nullopt;
    if (bucket) return scan(0, k, j + 1, a, accept);
    if (last) return find_min(1, 0, static_cast<std::uint32_t>(order.size()), k, a, accept);
    return decompose(1, 0, static_cast<std::uint32_t>(order.size()), k, a, accept);
  }

  std::optional<std::uint32_t> find_min(std::uint32_t node, std::uint32_t l, std::uint32_t r,
                                        std::uint32_t k, const Point& a, IdFilter accept) const {
    if (l >= k || mn[node] > a[owner->m_ - 1]) return std::nullopt;
    if (r - l == 1) {
      std::uint32_t i = order[l];
      if (accept(owner->ids_[i])) return i;
      return std::nullopt;
    }
    std::uint32_t mid = (l + r) / 2;
    if (auto hit = find_min(2 * node, l, mid, k, a, accept)) return hit;
    return find_min(2 * node + 1, mid, r, k, a, accept);
  }

  std::optional<std::uint32_t> decompose(std::uint32_t node, std::uint32_t l, std::uint32_t r,
                                         std::uint32_t k, const Point& a,
                                         IdFilter accept) const {
    if (l >= k) return std::nullopt;
    if (r - l <= kBucket) return scan(l, std::min(r, k), j + 1, a, accept);
    if (r <= k) return sec[node]->query(a, accept);
    std::uint32_t mid = (l + r) / 2;
    if (auto hit = decompose(2 * node, l, mid, k, a, accept)) return hit;
    return decompose(2 * node + 1, mid, r, k, a, accept);
  }

  std::uint32_t position(std::uint32_t idx) const {
    const auto& P = owner->pts_;
    auto it = std::lower_bound(order.begin(), order.end(), idx, [&](std::uint32_t x, std::uint32_t y) {
      return P[x][j] < P[y][j] || (P[x][j] == P[y][j] && x < y);
    });
    return static_cast<std::uint32_t>(it - order.begin());
  }

  void erase(std::uint32_t idx) {
    if (bucket) return;
    std::uint32_t pos = position(idx);
    auto n = static_cast<std::uint32_t>(order.size());
    if (last) {
      std::uint32_t node = 1, l = 0, r = n;
      std::vector<std::uint32_t> path;
      while (r - l > 1) {
        path.push_back(node);
        std::uint32_t mid = (l + r) / 2;
        if (pos < mid) {
          node = 2 * node;
          r = mid;
        } else {
          node = 2 * node + 1;
          l = mid;
        }
      }
      mn[node] = kInf;
      for (auto it = path.rbegin(); it != path.rend(); ++it)
        mn[*it] = std::min(mn[2 * *it], mn[2 * *it + 1]);
      return;
    }
    std::uint32_t node = 1, l = 0, r = n;
    while (r - l > kBucket) {
      sec[node]->erase(idx);
      std::uint32_t mid = (l + r) / 2;
      if (pos < mid) {
        node = 2 * node;
        r = mid;
      } else {
        node = 2 * node + 1;
        l = mid;
      }
    }
  }
};

DominanceTree::DominanceTree(int m, std::vector<Point> pts, std::vector<ObjectId> ids)
    : m_(m), pts_(std::move(pts)), ids_(std::move(ids)) {
  if (m < 2 || m > kMaxCoords) throw ContractViolation("DominanceTree: bad coordinate count");
  if (pts_.size() != ids_.size()) throw ContractViolation("DominanceTree: size mismatch");
  alive_.assign(pts_.size(), 1);
  alive_count_ = static_cast<std::uint32_t>(pts_.size());
  std::vector<std::uint32_t> idx(pts_.size());
  for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  root_ = std::make_unique<Level>(this, 0, std::move(idx));
}

DominanceTree::~DominanceTree() = default;

std::optional<std::uint32_t> DominanceTree::find(const Point& a, IdFilter accept) const {
  if (alive_count_ == 0) return std::nullopt;
  return root_->query(a, accept);
}

void DominanceTree::erase(std::uint32_t idx) {
  if (!alive_[idx]) return;
  alive_[idx] = 0;
  --alive_count_;
  root_->erase(idx);
}

}  // namespace geodyn
