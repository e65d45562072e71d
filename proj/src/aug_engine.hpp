#pragma once

// DFS search for a maximal set of vertex-disjoint augmenting paths of length
// 2*ell+1. Paths are v0 u1 v1 ... u_ell v_ell u_{ell+1}: the u's come from
// layered candidate sets S_1..S_ell, v_i is the mate of u_i, and both ends
// are exposed. The policy supplies the sets:
//
//   ObjectId mate(ObjectId) const
//   const GeomObject& object(ObjectId) const
//   std::vector<ObjectId> layer_one() const           candidates for u1
//   bool in_layer(int i, ObjectId) const
//   std::optional<ObjectId> find_layer(int i, const GeomObject&, IdFilter)
//   void kill(int i, ObjectId)                        delete from S_i
//   std::optional<ObjectId> find_exposed(const GeomObject&, bool u_end)
//   void take(const std::vector<ObjectId>& path)     endpoints out of S,
//                                                     u's out of every S_i

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "geodyn/matching.hpp"

namespace geodyn::detail {

template <class Policy>
class AugSearch {
 public:
  AugSearch(Policy& p, int ell, AugStats& stats) : p_(p), ell_(ell), st_(stats), seen_(ell + 2) {}

  std::vector<std::vector<ObjectId>> run() {
    for (ObjectId u1 : p_.layer_one()) {
      if (!p_.in_layer(1, u1)) continue;
      auto v0 = p_.find_exposed(p_.object(u1), false);
      if (!v0) {
        p_.kill(1, u1);
        continue;
      }
      path_ = {*v0, u1};
      extend(1);
    }
    return std::move(out_);
  }

 private:
  bool on_path(ObjectId id) const {
    return std::find(path_.begin(), path_.end(), id) != path_.end();
  }

  bool extend(int i) {
    ObjectId u = path_.back();
    ++st_.extend_calls;
    if (!seen_[i].insert(u).second) ++st_.candidate_repeats;
    ObjectId v = p_.mate(u);
    path_.push_back(v);
    if (i == ell_) {
      auto w = p_.find_exposed(p_.object(v), true);
      if (!w || on_path(*w)) {
        path_.pop_back();
        p_.kill(ell_, u);
        return false;
      }
      path_.push_back(*w);
      emit();
      return true;
    }
    auto fresh = [this](ObjectId id) { return !on_path(id); };
    while (auto w = p_.find_layer(i + 1, p_.object(v), IdFilter(fresh))) {
      path_.push_back(*w);
      if (extend(i + 1)) return true;
      path_.pop_back();
    }
    path_.pop_back();
    p_.kill(i, u);
    return false;
  }

  void emit() {
    std::unordered_set<ObjectId> distinct(path_.begin(), path_.end());
    if (distinct.size() != path_.size()) ++st_.nonsimple_paths;
    ++st_.paths;
    p_.take(path_);
    out_.push_back(path_);
  }

  Policy& p_;
  int ell_;
  AugStats& st_;
  std::vector<std::unordered_set<ObjectId>> seen_;
  std::vector<ObjectId> path_;
  std::vector<std::vector<ObjectId>> out_;
};

// Flips the matching along a path v0 u1 v1 ... u_{ell+1}.
inline void augment(Mates& mates, const std::vector<ObjectId>& path) {
  for (std::size_t k = 0; k + 1 < path.size(); k += 2) {
    mates[path[k]] = path[k + 1];
    mates[path[k + 1]] = path[k];
  }
}

}  // namespace geodyn::detail
