#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "jpf/energy.hpp"
#include "jpf/seq_model.hpp"

namespace jpf {

struct OracleLimits {
  std::size_t max_structures = 10'000'000;
  bool keep_structures = true;
};

struct WeightedStructure {
  JointStructure structure;
  double weight;
};

using Footprint = std::array<int, 4>;  // i, j, h, l

struct EnsembleReport {
  std::size_t count = 0;
  double weighted_sum = 0.0;
  std::vector<WeightedStructure> structures;  // filled if keep_structures
  // Unnormalized marginal masses (divide by weighted_sum).
  std::vector<std::vector<double>> mass_r, mass_s, mass_ext;
  std::map<Footprint, double> mass_hy;
};

struct OracleMarginals {
  std::vector<std::vector<double>> bpp_r, bpp_s, bpp_ext;
  std::map<Footprint, double> p_hy;
  std::map<std::pair<int, int>, double> p_tar_r, p_tar_s;
  std::vector<double> structure_probability;  // parallel to report.structures
};

/// Free energy of a joint structure priced from its loops and hybrids.
/// Returns +inf when the structure uses a forbidden pair.
double structure_energy(const JointStructure& js, const Strand& r, const Strand& s,
                        const EnergyModel& model);

/// Every valid joint structure of (R, S) exactly once. Throws
/// Error(LimitExceeded) past `limits.max_structures`.
EnsembleReport enumerate(const Strand& r, const Strand& s, const EnergyModel& model,
                         const OracleLimits& limits = {});

OracleMarginals exact_probabilities(const EnsembleReport& report);

}  // namespace jpf
