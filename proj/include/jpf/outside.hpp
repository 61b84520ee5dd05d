#pragma once

#include <vector>

#include "jpf/inside.hpp"

namespace jpf {

/// 2D matrix indexed [a][b], 1-based, (rows+1) x (cols+1).
using Matrix = std::vector<std::vector<double>>;

struct ProbTables {
  int n = 0, m = 0;
  Matrix bpp_r;    // [i][j], R interior arcs
  Matrix bpp_s;    // [h][l], S interior arcs, internal coordinates
  Matrix bpp_ext;  // [i][h], exterior arcs
  double root = 0.0;           // probability of the root, 1 by construction
  double max_tpf_error = 0.0;  // worst relative child-sum deviation
  std::size_t reachable_cells = 0;

  /// Probability of a joint-table cell (expected number of uses in a parse).
  double node(const InsideResult& in, JTab t, int y, int i, int j, int h, int l) const;
};

/// Runs the outside sweep over an inside result built with adjoints.
ProbTables outside(InsideResult& in);

struct HybridProbMatrix {
  int n = 0, m = 0;
  /// p[y][cell] with cell = ((i*(n+1)+j)*(m+1)+h)*(m+1)+l.
  std::vector<std::vector<double>> by_context;
  std::vector<double> total;

  double operator()(int i, int j, int h, int l) const { return total[index(i, j, h, l)]; }
  double context(int y, int i, int j, int h, int l) const {
    return by_context[y][index(i, j, h, l)];
  }
  std::size_t index(int i, int j, int h, int l) const {
    return ((static_cast<std::size_t>(i) * (n + 1) + j) * (m + 1) + h) * (m + 1) + l;
  }
};

HybridProbMatrix hybrid_probabilities(const InsideResult& in, const ProbTables& p);

enum class Side { R, S };

struct TargetRow {
  Side strand;
  int i, j;  // internal coordinates
  double probability;
};

struct TargetTable {
  std::vector<TargetRow> rows;  // sorted by descending probability
  TargetRow p_opt{Side::R, 0, 0, 0.0};
  bool has_opt = false;
};

/// Region probabilities of both strands. Rows at or below `threshold` are
/// dropped; p_opt is taken before filtering.
TargetTable target_sites(const HybridProbMatrix& hy, double threshold = 0.1);

}  // namespace jpf
