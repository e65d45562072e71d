#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "gen.hpp"
#include "runner.hpp"
#include "trace.hpp"

using namespace geodyn::tools;

namespace {

struct HeaderFlags {
  std::string mode = "vc", kind = "disk";
  int dim = 2;
  bool bipartite = false;
};

void add_gen_options(CLI::App* app, HeaderFlags& hf, GenParams& gp) {
  app->add_option("--mode", hf.mode, "vc, mcm or mcmg")->check(CLI::IsMember({"vc", "mcm", "mcmg", "mcm-general"}));
  app->add_option("--kind", hf.kind, "disk, rect or box")->check(CLI::IsMember({"disk", "rect", "box"}));
  app->add_option("--dim", hf.dim, "box dimension (2 for disks and rects)")->check(CLI::Range(1, 4));
  app->add_flag("--bipartite", hf.bipartite, "tag objects with sides L/R");
  app->add_option("-n", gp.n, "inserts to generate when --steps is 0");
  app->add_option("--steps", gp.steps, "records to generate");
  app->add_option("--max-live", gp.max_live, "delete whenever this many objects are live");
  app->add_option("--churn", gp.churn, "probability of a deletion per record")->check(CLI::Range(0.0, 0.999));
  app->add_option("--range", gp.range, "positions in [0, range)");
  app->add_option("--rmin", gp.rmin, "smallest radius or side");
  app->add_option("--spread", gp.spread, "largest / smallest radius or side");
  app->add_option("--dist", gp.dist, "radius distribution")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, RadiusDist>{{"uniform", RadiusDist::Uniform}, {"powerlaw", RadiusDist::PowerLaw}}));
  app->add_option("--alpha", gp.alpha, "power-law exponent");
}

TraceHeader header_from(const HeaderFlags& hf) {
  TraceHeader h;
  h.mode = parse_mode(hf.mode);
  h.kind = parse_kind(hf.kind);
  h.dim = h.kind == Kind::Box ? hf.dim : 2;
  h.bipartite = hf.bipartite || h.mode == Mode::Mcm;
  return h;
}

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  return &file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic approximate vertex cover and matching on geometric objects"};
  app.require_subcommand(1);
  HeaderFlags hf;
  GenParams gp;
  RunParams rp;
  std::string out, trace_path, summary_path;

  auto* gen = app.add_subcommand("gen", "generate a trace");
  add_gen_options(gen, hf, gp);
  gen->add_option("--seed", gp.seed, "random seed");
  gen->add_option("--phi", gp.phi, "box kind: largest / smallest side of one box");
  gen->add_option("--out", out, "trace path (default stdout)");

  auto* run = app.add_subcommand("run", "replay a trace (or a generated one) and write CSV");
  run->add_option("trace", trace_path, "trace file, '-' for stdin; omitted: generate from the flags");
  add_gen_options(run, hf, gp);
  run->add_option("--eps", rp.eps, "approximation parameter")->check(CLI::Range(1e-6, 1.0));
  run->add_option("--delta", rp.delta, "MWU step (vc; default from preset)");
  run->add_option("--gamma", rp.gamma, "kernel window (vc; default from preset)");
  run->add_option("--phi", rp.phi, "fatness bound for boxes");
  run->add_option("--preset", rp.preset, "vc preset")->check(CLI::IsMember({"disks", "fat", "rect", "bipartite"}));
  run->add_option("--seed", rp.seed, "seed for the generator and the color families");
  run->add_option("--oracle-every", rp.oracle_every, "run the exact oracle every k steps");
  run->add_option("--out", out, "CSV path (default stdout)");
  run->add_option("--summary", summary_path, "JSON summary path (default stderr)");
  bool no_timing = false;
  run->add_flag("--no-timing", no_timing, "write ns = 0 for byte-reproducible output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gp.header = header_from(hf);
      Trace t = gen_instance(gp);
      std::ofstream f;
      write_trace(*open_out(out, f), t);
      return 0;
    }

    rp.timing = !no_timing;
    Trace t;
    if (trace_path.empty()) {
      gp.header = header_from(hf);
      gp.seed = rp.seed;
      gp.phi = rp.phi;
      t = gen_instance(gp);
    } else if (trace_path == "-") {
      t = read_trace(std::cin);
    } else {
      std::ifstream in(trace_path);
      if (!in) throw std::runtime_error("cannot open " + trace_path);
      t = read_trace(in);
    }
    RunReport rep = run_trace(t, rp);
    std::ofstream f;
    write_csv(*open_out(out, f), rep);
    std::string js = summary_json(rep, t, rp);
    if (summary_path.empty()) {
      std::cerr << js << '\n';
    } else {
      std::ofstream s(summary_path);
      s << js << '\n';
    }
    return rep.summary.all_valid ? 0 : 1;
  } catch (const TraceError& e) {
    std::cerr << "trace error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
