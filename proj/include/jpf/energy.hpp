#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

namespace jpf {

/// Canonical pair types, indexed 0..5. -1 means "cannot pair".
enum PairType : int { kAU = 0, kCG, kGC, kUA, kGU, kUG, kNumPairTypes };

int base_index(char c);  // A=0 C=1 G=2 U=3, -1 otherwise
int pair_type(char five, char three);
const char* pair_type_name(int pt);

/// Loop context of an interval of one strand inside a joint structure:
/// the R-exterior (or S-exterior) loop, or a kissing loop closed by an
/// interior arc that covers exterior-arc endpoints.
enum class Loop : int { E = 0, K = 1 };

/// Joint context of an (R interval, S interval) pair.
struct HybridContext {
  Loop r = Loop::E;
  Loop s = Loop::E;
};

inline constexpr int kLoopTableMax = 30;

/// Free energies in kcal/mol. Weights are exp(-E / rt).
struct EnergyModel {
  double rt = 0.6163;
  int min_hairpin = 3;
  bool interaction = true;  // false disables every exterior arc
  std::array<bool, kNumPairTypes> allowed{true, true, true, true, true, true};

  // Loop energies by size; sizes beyond the table are extrapolated
  // logarithmically from the last entry.
  std::array<double, kLoopTableMax + 1> hairpin{};
  std::array<double, kLoopTableMax + 1> bulge{};
  std::array<double, kLoopTableMax + 1> interior{};  // by total unpaired size
  double interior_asym = 0.6;
  double loop_extrapolation = 1.07856;
  std::array<std::array<double, kNumPairTypes>, kNumPairTypes> stack{};

  double multi_init = 3.4;
  double multi_branch = 0.4;
  double multi_unpaired = 0.0;
  double kiss_init = 3.4;
  double kiss_branch = 0.4;
  double kiss_unpaired = 0.0;

  // Hybrid parameters.
  double sigma0 = 4.1;
  double sigma = 1.0;
  double beta3 = 0.3;
  std::array<double, kNumPairTypes> exterior_arc{};
  double hybrid_loop_init = 1.0;
  double hybrid_loop_per = 0.3;

  EnergyModel();
  /// Every energy zero, so every structure has weight one.
  static EnergyModel unit();

  double weight(double energy) const;

  bool can_pair(int pt) const { return pt >= 0 && allowed[pt]; }
  double hairpin_energy(int size) const;
  /// Interior loop with `left` and `right` unpaired bases; 0/0 is a stack.
  double interior_energy(int outer_pt, int inner_pt, int left, int right) const;
  /// G^Int of a hybrid step between consecutive exterior arcs.
  double g_int(int prev_pt, int next_pt, int gap_r, int gap_s) const;
  /// Exponent of one hybrid extension step in the given loop context.
  double hybrid_step_energy(double g_int_value, int gap_r, int gap_s,
                            HybridContext ctx) const;

  /// Stable hex digest of every parameter.
  std::string fingerprint() const;
  std::string serialize() const;
};

/// Boltzmann weight of the step from exterior arc (i1,h1) to (j,l) with the
/// residues of R and S (internal order). Throws Error(InvalidGap) unless
/// i1 < j and h1 < l.
double weight_hybrid_step(const EnergyModel& model, const std::string& r,
                          const std::string& s, int i1, int h1, int j, int l,
                          HybridContext ctx);

/// Reads `key = value` lines (with `#` comments) over the defaults.
EnergyModel load_params(const std::filesystem::path& path);
EnergyModel parse_params(const std::string& text);

}  // namespace jpf
