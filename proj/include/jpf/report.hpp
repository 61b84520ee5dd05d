#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jpf/inside.hpp"
#include "jpf/oracle.hpp"
#include "jpf/outside.hpp"
#include "jpf/sampler.hpp"
#include "jpf/seq_model.hpp"

namespace jpf {

inline constexpr const char* kVersion = "0.1.0";

/// Reads R and S from one file with two records or from two single-record
/// files. R keeps 5'->3' order; S is reversed so internal position 1 is its
/// 3' end.
std::pair<Strand, Strand> ingest_fasta(const std::vector<std::filesystem::path>& paths);
std::pair<Strand, Strand> parse_fasta(const std::string& text, const std::string& source);

struct Header {
  std::string tool;
  std::string fingerprint;
  std::optional<std::uint64_t> seed;
  std::string r_id, s_id;
  int n = 0, m = 0;
};

Header make_header(const InsideResult& in, std::optional<std::uint64_t> seed = {});
void write_header(std::ostream& out, const Header& h);

// Partition functions ------------------------------------------------------

struct PfReport {
  Header header;
  double q_total = 0.0;
  double q_r = 0.0;
  double q_s = 0.0;
};
PfReport make_pf(const InsideResult& in);
void write_pf(std::ostream& out, const PfReport& pf, bool json);
PfReport read_pf(std::istream& in);

// Base-pair probabilities ---------------------------------------------------

struct BppEntry {
  std::string kind;  // R, S or EXT
  int a, b;          // user coordinates (S 5'->3')
  double p;
};
/// Entries at or below `min_p` are omitted.
void write_bpp(std::ostream& out, const Header& h, const InsideResult& in,
               const ProbTables& p, double min_p = 0.0);
std::vector<BppEntry> read_bpp(std::istream& in);

// Hybrids --------------------------------------------------------------------

struct HybridEntry {
  std::string section;  // HY (per context) or RPROJ
  std::string ctx;      // EE, EK, KE, KK, ALL; "-" for RPROJ
  int i, j, h, l;       // user coordinates; h, l = 0 for RPROJ
  double p;
};
void write_hybrids(std::ostream& out, const Header& h, const InsideResult& in,
                   const HybridProbMatrix& hy, double min_p = 0.0);
std::vector<HybridEntry> read_hybrids(std::istream& in);

// Target sites ---------------------------------------------------------------

/// "i,j: pp.p%" with one decimal.
std::string format_target_row(int i, int j, double probability);
/// Rows in user coordinates, grouped by strand.
void write_targets(std::ostream& out, const Header& h, const TargetTable& t, int m);
struct TargetLine {
  char strand;  // 'R' or 'S'
  int i, j;
  double percent;
};
std::vector<TargetLine> read_targets(std::istream& in);

// Samples --------------------------------------------------------------------

/// Extended dot-bracket, all in user 5'->3' coordinates: R line with '('
/// ')' for interior arcs and '|' for exterior-paired bases, S line likewise,
/// then the exterior pairs as "i-h" (h counted on S 5'->3').
std::string format_structure(const JointStructure& js);
JointStructure parse_structure(const std::string& r_line, const std::string& s_line,
                               const std::string& pairs_line);
void write_sample(std::ostream& out, const Header& h, const SampleBatch& batch);
std::vector<JointStructure> read_sample(std::istream& in);

// Dot plot ---------------------------------------------------------------------

/// Exterior-arc probabilities as squares with area proportional to
/// probability; axes in 5'->3' coordinates of both strands.
void write_dotplot(std::ostream& out, const Header& h, const InsideResult& in,
                   const ProbTables& p);

// Oracle -----------------------------------------------------------------------

void write_oracle(std::ostream& out, const Header& h, const EnsembleReport& rep,
                  bool list_structures);

}  // namespace jpf
