#include "trace.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace geodyn::tools {

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Vc: return "vc";
    case Mode::Mcm: return "mcm";
    case Mode::McmGeneral: return "mcmg";
  }
  return "?";
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Disk: return "disk";
    case Kind::Rect: return "rect";
    case Kind::Box: return "box";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  if (s == "vc") return Mode::Vc;
  if (s == "mcm") return Mode::Mcm;
  if (s == "mcmg" || s == "mcm-general") return Mode::McmGeneral;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

Kind parse_kind(std::string_view s) {
  if (s == "disk") return Kind::Disk;
  if (s == "rect") return Kind::Rect;
  if (s == "box") return Kind::Box;
  throw std::invalid_argument("unknown kind '" + std::string(s) + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_num(std::string_view s, T& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

TraceHeader parse_header(std::string_view line, int ln) {
  TraceHeader h;
  bool seen[4] = {false, false, false, false};
  auto toks = split(line.substr(1));
  for (auto tok : toks) {
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw TraceError(ln, "header field without '='");
    auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
    try {
      if (key == "mode") {
        h.mode = parse_mode(val);
        seen[0] = true;
      } else if (key == "kind") {
        h.kind = parse_kind(val);
        seen[1] = true;
      } else if (key == "dim") {
        if (!parse_num(val, h.dim)) throw std::invalid_argument("bad dim");
        seen[2] = true;
      } else if (key == "bipartite") {
        if (val != "0" && val != "1") throw std::invalid_argument("bipartite must be 0 or 1");
        h.bipartite = val == "1";
        seen[3] = true;
      } else {
        throw std::invalid_argument("unknown header field '" + std::string(key) + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw TraceError(ln, e.what());
    }
  }
  for (bool s : seen)
    if (!s) throw TraceError(ln, "header needs mode, kind, dim and bipartite");
  if (h.dim < 1 || h.dim > 4) throw TraceError(ln, "dim must be in 1..4");
  if (h.kind != Kind::Box && h.dim != 2) throw TraceError(ln, "disks and rects need dim=2");
  if (h.mode == Mode::Mcm && !h.bipartite) throw TraceError(ln, "mode mcm needs bipartite=1");
  if (h.mode == Mode::McmGeneral && h.bipartite) throw TraceError(ln, "mode mcmg needs bipartite=0");
  return h;
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace t;
  bool have_header = false;
  std::unordered_set<std::uint64_t> live;
  int ln = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++ln;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto toks = split(line);
    if (toks.empty()) continue;
    if (!have_header) {
      if (line.front() != '#') throw TraceError(ln, "expected a '#mode=...' header line");
      t.header = parse_header(line, ln);
      have_header = true;
      continue;
    }
    const auto& h = t.header;
    TraceOp op;
    if (toks[0] == "Q") {
      if (toks.size() != 1) throw TraceError(ln, "Q takes no arguments");
      op.type = TraceOp::Query;
    } else if (toks[0] == "D") {
      if (toks.size() != 2 || !parse_num(toks[1], op.id)) throw TraceError(ln, "expected 'D <id>'");
      if (!live.erase(op.id)) throw TraceError(ln, "delete of id " + std::to_string(op.id) + " which is not live");
      op.type = TraceOp::Delete;
    } else if (toks[0] == "I") {
      op.type = TraceOp::Insert;
      std::size_t want = h.kind == Kind::Disk ? 3 : 2 * static_cast<std::size_t>(h.dim);
      if (toks.size() != 3 + want)
        throw TraceError(ln, "insert needs " + std::to_string(want) + " parameters");
      if (!parse_num(toks[1], op.id)) throw TraceError(ln, "bad id");
      if (toks[2].size() != 1 || (toks[2] != "L" && toks[2] != "R" && toks[2] != "-"))
        throw TraceError(ln, "side must be L, R or -");
      op.side = toks[2][0];
      if (h.bipartite != (op.side != '-'))
        throw TraceError(ln, h.bipartite ? "bipartite trace needs side L or R" : "side must be '-' without bipartite=1");
      for (std::size_t i = 0; i < want; ++i) {
        double v;
        if (!parse_num(toks[3 + i], v) || !std::isfinite(v))
          throw TraceError(ln, "bad number '" + std::string(toks[3 + i]) + "'");
        op.params.push_back(v);
      }
      if (h.kind == Kind::Disk && !(op.params[2] > 0)) throw TraceError(ln, "radius must be positive");
      if (h.kind != Kind::Disk)
        for (int k = 0; k < h.dim; ++k)
          if (op.params[2 * k] > op.params[2 * k + 1])
            throw TraceError(ln, "box has lo > hi on axis " + std::to_string(k + 1));
      if (!live.insert(op.id).second) throw TraceError(ln, "id " + std::to_string(op.id) + " is already live");
    } else {
      throw TraceError(ln, "unknown record '" + std::string(toks[0]) + "'");
    }
    t.ops.push_back(std::move(op));
  }
  if (!have_header) throw TraceError(ln == 0 ? 1 : ln, "missing header");
  return t;
}

Trace read_trace(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_trace(text);
}

std::string format_trace(const Trace& t) {
  std::ostringstream os;
  write_trace(os, t);
  return os.str();
}

void write_trace(std::ostream& out, const Trace& t) {
  const auto& h = t.header;
  out << "#mode=" << mode_name(h.mode) << " kind=" << kind_name(h.kind) << " dim=" << h.dim
      << " bipartite=" << (h.bipartite ? 1 : 0) << '\n';
  for (const auto& op : t.ops) {
    switch (op.type) {
      case TraceOp::Query: out << "Q\n"; break;
      case TraceOp::Delete: out << "D " << op.id << '\n'; break;
      case TraceOp::Insert:
        out << "I " << op.id << ' ' << op.side;
        for (double v : op.params) out << ' ' << format_double(v);
        out << '\n';
        break;
    }
  }
}

}  // namespace geodyn::tools
