#include "geodyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geodyn {

GeomObject make_disk(ObjectId id, double x, double y, double r, Side side) {
  GeomObject o;
  o.id = id;
  o.side = side;
  o.shape = Disk{{x, y}, r};
  validate(o);
  return o;
}

GeomObject make_box(ObjectId id, const std::vector<double>& lo, const std::vector<double>& hi,
                    Side side) {
  if (lo.size() != hi.size() || lo.empty() || lo.size() > static_cast<size_t>(kMaxDim))
    throw ContractViolation("make_box: bad dimension");
  Box b;
  b.dim = static_cast<int>(lo.size());
  for (int k = 0; k < b.dim; ++k) {
    b.lo[k] = lo[k];
    b.hi[k] = hi[k];
  }
  GeomObject o;
  o.id = id;
  o.side = side;
  o.shape = b;
  validate(o);
  return o;
}

GeomObject make_rect(ObjectId id, double x0, double y0, double x1, double y1, Side side) {
  return make_box(id, {x0, y0}, {x1, y1}, side);
}

void validate(const GeomObject& o) {
  if (o.kind() == ShapeKind::Disk) {
    const Disk& d = o.disk();
    if (!std::isfinite(d.center[0]) || !std::isfinite(d.center[1]))
      throw ContractViolation("disk center is not finite");
    if (!(d.radius > 0) || !std::isfinite(d.radius))
      throw ContractViolation("disk radius must be positive");
    return;
  }
  const Box& b = o.box();
  if (b.dim < 1 || b.dim > kMaxDim) throw ContractViolation("box dimension out of range");
  for (int k = 0; k < b.dim; ++k) {
    if (!std::isfinite(b.lo[k]) || !std::isfinite(b.hi[k]))
      throw ContractViolation("box coordinate is not finite");
    if (b.lo[k] > b.hi[k]) throw ContractViolation("box has lo > hi");
  }
}

bool intersects(const Disk& a, const Disk& b) {
  double dx = a.center[0] - b.center[0];
  double dy = a.center[1] - b.center[1];
  double rs = a.radius + b.radius;
  return dx * dx + dy * dy <= rs * rs;
}

bool intersects(const Box& a, const Box& b) {
  if (a.dim != b.dim) throw ContractViolation("intersects: dimension mismatch");
  for (int k = 0; k < a.dim; ++k)
    if (a.hi[k] < b.lo[k] || b.hi[k] < a.lo[k]) return false;
  return true;
}

bool intersects(const GeomObject& a, const GeomObject& b) {
  if (a.kind() != b.kind()) throw ContractViolation("intersects: shape mismatch");
  if (a.kind() == ShapeKind::Disk) return intersects(a.disk(), b.disk());
  return intersects(a.box(), b.box());
}

bool adjacent(const GeomObject& a, const GeomObject& b) {
  if (a.side != Side::None && a.side == b.side) return false;
  return intersects(a, b);
}

bool contains(const Box& a, const Box& b) {
  if (a.dim != b.dim) throw ContractViolation("contains: dimension mismatch");
  for (int k = 0; k < a.dim; ++k)
    if (b.lo[k] < a.lo[k] || b.hi[k] > a.hi[k]) return false;
  return true;
}

bool dominates(const Box& a, const Box& b) {
  if (a.dim != 2 || b.dim != 2) throw ContractViolation("dominates: rectangles only");
  return b.lo[0] < a.lo[0] && a.hi[0] < b.hi[0] && a.lo[1] < b.lo[1] && b.hi[1] < a.hi[1];
}

bool is_fat(const GeomObject& o, const FatnessConfig& cfg) {
  if (o.kind() == ShapeKind::Disk) return true;
  const Box& b = o.box();
  double shortest = b.hi[0] - b.lo[0], longest = shortest;
  for (int k = 1; k < b.dim; ++k) {
    double s = b.hi[k] - b.lo[k];
    shortest = std::min(shortest, s);
    longest = std::max(longest, s);
  }
  if (longest == 0) return true;  // a point
  return longest <= cfg.phi * shortest;
}

Box bounding_box(const GeomObject& o) {
  if (o.kind() == ShapeKind::Box) return o.box();
  const Disk& d = o.disk();
  Box b;
  b.dim = 2;
  for (int k = 0; k < 2; ++k) {
    b.lo[k] = d.center[k] - d.radius;
    b.hi[k] = d.center[k] + d.radius;
  }
  return b;
}

std::array<double, kMaxDim> reference_point(const GeomObject& o) {
  std::array<double, kMaxDim> p{};
  if (o.kind() == ShapeKind::Disk) {
    p[0] = o.disk().center[0];
    p[1] = o.disk().center[1];
    return p;
  }
  const Box& b = o.box();
  for (int k = 0; k < b.dim; ++k) p[k] = 0.5 * (b.lo[k] + b.hi[k]);
  return p;
}

double diameter(const GeomObject& o) {
  if (o.kind() == ShapeKind::Disk) return 2 * o.disk().radius;
  const Box& b = o.box();
  double m = 0;
  for (int k = 0; k < b.dim; ++k) m = std::max(m, b.hi[k] - b.lo[k]);
  return m;
}

std::string describe(const GeomObject& o) {
  std::ostringstream os;
  os << "#" << o.id << " ";
  if (o.kind() == ShapeKind::Disk) {
    const Disk& d = o.disk();
    os << "disk(" << d.center[0] << "," << d.center[1] << " r=" << d.radius << ")";
  } else {
    const Box& b = o.box();
    os << "box(";
    for (int k = 0; k < b.dim; ++k) os << (k ? " " : "") << "[" << b.lo[k] << "," << b.hi[k] << "]";
    os << ")";
  }
  return os.str();
}

}  // namespace geodyn
