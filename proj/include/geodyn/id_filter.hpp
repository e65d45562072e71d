#pragma once

#include <concepts>
#include <type_traits>

#include "geodyn/geometry.hpp"

namespace geodyn {

// Non-owning reference to a predicate over ids. The referenced callable must
// outlive every call.
class IdFilter {
 public:
  template <class F>
    requires(!std::same_as<std::decay_t<F>, IdFilter> && std::predicate<const F&, ObjectId>)
  IdFilter(const F& f)  // NOLINT(google-explicit-constructor)
      : obj_(&f), call_([](const void* o, ObjectId id) {
          return static_cast<bool>((*static_cast<const F*>(o))(id));
        }) {}

  bool operator()(ObjectId id) const { return call_(obj_, id); }

  static IdFilter accept_all() {
    static constexpr auto yes = [](ObjectId) { return true; };
    return IdFilter(yes);
  }

 private:
  const void* obj_;
  bool (*call_)(const void*, ObjectId);
};

}  // namespace geodyn
