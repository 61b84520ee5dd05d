// jointpf: partition function, probabilities and sampling of RNA-RNA joint
// structures.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jpf/energy.hpp"
#include "jpf/error.hpp"
#include "jpf/inside.hpp"
#include "jpf/oracle.hpp"
#include "jpf/outside.hpp"
#include "jpf/report.hpp"
#include "jpf/sampler.hpp"

namespace fs = std::filesystem;
using namespace jpf;

namespace {

struct Config {
  std::vector<std::string> inputs;
  std::string params;
  std::string out;
  int threads = 1;
  std::string mem_budget = "2G";
  bool json = false;
  double threshold = 0.1;
  bool full = false;
  std::size_t num = 1000;
  std::uint64_t seed = 1;
  bool list = false;
  std::size_t limit = 10'000'000;
};

std::size_t parse_bytes(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "bad memory budget '" + text + "'");
  }
  const std::string suffix = text.substr(used);
  double scale = 1;
  if (suffix == "K" || suffix == "k") scale = 1024.0;
  else if (suffix == "M" || suffix == "m") scale = 1024.0 * 1024;
  else if (suffix == "G" || suffix == "g") scale = 1024.0 * 1024 * 1024;
  else if (!suffix.empty()) throw Error(ErrorKind::InvalidArgument, "bad memory budget '" + text + "'");
  if (v < 0) throw Error(ErrorKind::InvalidArgument, "negative memory budget");
  return static_cast<std::size_t>(v * scale);
}

/// Writes to --out (a file, or `<name>` inside an existing directory) or stdout.
class Output {
 public:
  Output(const std::string& out, const std::string& name) {
    if (out.empty() || out == "-") return;
    fs::path p(out);
    if (fs::is_directory(p)) p /= name;
    file_ = std::make_unique<std::ofstream>(p, std::ios::binary);
    if (!*file_) throw Error(ErrorKind::IoError, "cannot write " + p.string());
    path_ = p;
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (!file_) {
      std::cout.flush();
      if (!std::cout) throw Error(ErrorKind::IoError, "cannot write to stdout");
      return;
    }
    file_->close();
    if (!*file_) throw Error(ErrorKind::IoError, "cannot write " + path_.string());
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  fs::path path_;
};

EnergyModel load_model(const Config& cfg) {
  std::string path = cfg.params;
  if (path.empty()) {
    if (const char* env = std::getenv("JPF_PARAMS")) path = env;
  }
  return path.empty() ? EnergyModel() : load_params(path);
}

std::pair<Strand, Strand> load_strands(const Config& cfg) {
  std::vector<fs::path> paths(cfg.inputs.begin(), cfg.inputs.end());
  return ingest_fasta(paths);
}

InsideResult run_inside(const Config& cfg, bool adjoints) {
  const auto [r, s] = load_strands(cfg);
  const EnergyModel model = load_model(cfg);
  InsideOptions opt;
  opt.threads = cfg.threads;
  opt.memory_budget = parse_bytes(cfg.mem_budget);
  opt.with_adjoints = adjoints;
  std::cerr << "# memory: " << inside_bytes(r.size(), s.size(), adjoints)
            << " bytes needed, budget " << opt.memory_budget << "\n";
  return inside(r, s, model, opt);
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("inputs", cfg.inputs, "one FASTA file with R and S, or two files")
      ->required()
      ->expected(1, 2);
  sub->add_option("--params", cfg.params, "energy parameter file")->envname("JPF_PARAMS");
  sub->add_option("-o,--out", cfg.out, "output file or directory (default stdout)");
  sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--mem-budget", cfg.mem_budget, "table memory budget, e.g. 512M or 2G");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition function and sampling of RNA-RNA joint structures"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Config cfg;

  auto* pf = app.add_subcommand("pf", "partition functions Q_I, q_R, q_S");
  add_common(pf, cfg);
  pf->add_flag("--json", cfg.json, "JSON output");

  auto* bpp = app.add_subcommand("bpp", "interior and exterior base-pair probabilities (TSV)");
  add_common(bpp, cfg);
  bpp->add_option("--threshold", cfg.threshold, "omit entries at or below this")
      ->default_val(0.0)
      ->check(CLI::Range(0.0, 1.0));

  auto* hybrids = app.add_subcommand("hybrids", "hybrid footprint probabilities (TSV)");
  add_common(hybrids, cfg);
  hybrids->add_option("--threshold", cfg.threshold, "omit footprints at or below this")
      ->default_val(0.0)
      ->check(CLI::Range(0.0, 1.0));

  auto* targets = app.add_subcommand("targets", "ranked target-site regions");
  add_common(targets, cfg);
  targets->add_option("--threshold", cfg.threshold, "report regions above this probability")
      ->default_val(0.1)
      ->check(CLI::Range(0.0, 1.0));
  targets->add_flag("--full", cfg.full, "report every region with nonzero probability");

  auto* sample = app.add_subcommand("sample", "Boltzmann sample of joint structures");
  add_common(sample, cfg);
  sample->add_option("-n,--num", cfg.num, "number of structures")->check(CLI::PositiveNumber);
  sample->add_option("--seed", cfg.seed, "random seed");

  auto* dotplot = app.add_subcommand("dotplot", "SVG plot of exterior pair probabilities");
  add_common(dotplot, cfg);

  auto* oracle = app.add_subcommand("oracle", "exhaustive enumeration (small inputs only)");
  add_common(oracle, cfg);
  oracle->add_flag("--list", cfg.list, "list every structure with its probability");
  oracle->add_option("--limit", cfg.limit, "maximum number of structures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: InvalidArgument: " << e.what() << "\n";
    return 2;
  }

  try {
    if (pf->parsed()) {
      const InsideResult in = run_inside(cfg, false);
      Output out(cfg.out, cfg.json ? "pf.json" : "pf.txt");
      write_pf(out.stream(), make_pf(in), cfg.json);
      out.close();
    } else if (bpp->parsed()) {
      InsideResult in = run_inside(cfg, true);
      const ProbTables p = outside(in);
      Output out(cfg.out, "bpp.tsv");
      write_bpp(out.stream(), make_header(in), in, p, cfg.threshold);
      out.close();
    } else if (hybrids->parsed()) {
      InsideResult in = run_inside(cfg, true);
      const ProbTables p = outside(in);
      const HybridProbMatrix hy = hybrid_probabilities(in, p);
      Output out(cfg.out, "hybrids.tsv");
      write_hybrids(out.stream(), make_header(in), in, hy, cfg.threshold);
      out.close();
    } else if (targets->parsed()) {
      InsideResult in = run_inside(cfg, true);
      const ProbTables p = outside(in);
      const TargetTable t =
          target_sites(hybrid_probabilities(in, p), cfg.full ? 0.0 : cfg.threshold);
      Output out(cfg.out, "targets.txt");
      write_targets(out.stream(), make_header(in), t, in.m());
      out.close();
    } else if (sample->parsed()) {
      const InsideResult in = run_inside(cfg, false);
      const SampleBatch batch = sample_batch(in, cfg.num, cfg.seed, cfg.threads);
      Output out(cfg.out, "sample.txt");
      write_sample(out.stream(), make_header(in, cfg.seed), batch);
      out.close();
    } else if (dotplot->parsed()) {
      InsideResult in = run_inside(cfg, true);
      const ProbTables p = outside(in);
      Output out(cfg.out, "dotplot.svg");
      write_dotplot(out.stream(), make_header(in), in, p);
      out.close();
    } else if (oracle->parsed()) {
      const auto [r, s] = load_strands(cfg);
      const EnergyModel model = load_model(cfg);
      OracleLimits limits;
      limits.max_structures = cfg.limit;
      limits.keep_structures = cfg.list;
      const EnsembleReport rep = enumerate(r, s, model, limits);
      Header h;
      h.tool = std::string("jointpf ") + kVersion;
      h.fingerprint = model.fingerprint();
      h.r_id = r.id;
      h.s_id = s.id;
      h.n = r.size();
      h.m = s.size();
      Output out(cfg.out, "oracle.txt");
      write_oracle(out.stream(), h, rep, cfg.list);
      out.close();
    }
  } catch (const Error& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: IoError: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
