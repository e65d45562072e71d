#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace geodyn {

using ObjectId = std::uint64_t;

inline constexpr int kMaxDim = 4;

// Thrown when a caller breaks an operation's precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

enum class Side : std::uint8_t { None, Left, Right };

inline Side opposite(Side s) {
  return s == Side::Left ? Side::Right : s == Side::Right ? Side::Left : Side::None;
}

enum class ShapeKind : std::uint8_t { Disk, Box };

struct Disk {
  std::array<double, 2> center{};
  double radius = 1.0;
};

struct Box {
  int dim = 2;
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
};

struct GeomObject {
  ObjectId id = 0;
  Side side = Side::None;
  std::variant<Disk, Box> shape;

  ShapeKind kind() const { return shape.index() == 0 ? ShapeKind::Disk : ShapeKind::Box; }
  int dim() const { return kind() == ShapeKind::Disk ? 2 : std::get<Box>(shape).dim; }
  const Disk& disk() const { return std::get<Disk>(shape); }
  const Box& box() const { return std::get<Box>(shape); }
};

struct FatnessConfig {
  double phi = 2.0;
};

GeomObject make_disk(ObjectId id, double x, double y, double r, Side side = Side::None);
GeomObject make_box(ObjectId id, const std::vector<double>& lo, const std::vector<double>& hi,
                    Side side = Side::None);
GeomObject make_rect(ObjectId id, double x0, double y0, double x1, double y1,
                     Side side = Side::None);

// Throws ContractViolation on radius <= 0, lo > hi, bad dimension or NaN.
void validate(const GeomObject& o);

// Closed-set intersection. Shapes must match in kind and dimension.
bool intersects(const GeomObject& a, const GeomObject& b);
bool intersects(const Disk& a, const Disk& b);
bool intersects(const Box& a, const Box& b);

// Edge of the intersection graph: intersecting, and on different sides when
// both objects carry a side tag.
bool adjacent(const GeomObject& a, const GeomObject& b);

// b is a subset of a.
bool contains(const Box& a, const Box& b);

// a is taller and thinner than b and their boundaries cross four times.
bool dominates(const Box& a, const Box& b);

bool is_fat(const GeomObject& o, const FatnessConfig& cfg = {});

// Bounding box of any shape (disks give their enclosing square).
Box bounding_box(const GeomObject& o);

// Center point used by the separator; coordinates beyond dim() are zero.
std::array<double, kMaxDim> reference_point(const GeomObject& o);

// Longest side of the bounding box.
double diameter(const GeomObject& o);

std::string describe(const GeomObject& o);

}  // namespace geodyn
