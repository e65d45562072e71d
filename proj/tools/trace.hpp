#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geodyn::tools {

enum class Mode { Vc, Mcm, McmGeneral };
enum class Kind { Disk, Rect, Box };

struct TraceHeader {
  Mode mode = Mode::Vc;
  Kind kind = Kind::Disk;
  int dim = 2;
  bool bipartite = false;
};

struct TraceOp {
  enum Type : char { Insert = 'I', Delete = 'D', Query = 'Q' } type = Query;
  std::uint64_t id = 0;
  char side = '-';             // 'L', 'R' or '-'
  std::vector<double> params;  // disk: x y r; box: lo1 hi1 ... lod hid
};

struct Trace {
  TraceHeader header;
  std::vector<TraceOp> ops;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Trace parse_trace(std::string_view text);
Trace read_trace(std::istream& in);
std::string format_trace(const Trace& t);
void write_trace(std::ostream& out, const Trace& t);

std::string_view mode_name(Mode m);  // vc, mcm, mcmg
std::string_view kind_name(Kind k);  // disk, rect, box
Mode parse_mode(std::string_view s);  // also accepts mcm-general
Kind parse_kind(std::string_view s);

// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace geodyn::tools
