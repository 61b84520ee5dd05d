#include "jpf/outside.hpp"

#include <algorithm>
#include <cmath>

#include "jpf/error.hpp"

namespace jpf {

double ProbTables::node(const InsideResult& in, JTab t, int y, int i, int j, int h,
                        int l) const {
  const JointGrammar& g = in.grammar();
  if (!g.allocated(t, y)) return 0.0;
  return g.value(t, y, i, j, h, l) * g.adjoint(t, y, i, j, h, l) / in.q_total();
}

ProbTables outside(InsideResult& in) {
  JointGrammar& g = in.grammar();
  if (!g.has_adjoints())
    throw Error(ErrorKind::InvalidArgument, "inside result was built without adjoints");
  const int n = g.n(), m = g.m();
  const double q = g.root_value();
  ProbTables out;
  out.n = n;
  out.m = m;
  out.root = 1.0;

  g.root_adjoint_slot() = 1.0;
  {
    OutsideOp op;
    op.g = 1.0;
    g.produce_root(op);
  }

  double worst = 0.0;
  std::size_t reachable = 0;
  for (int dr = n - 1; dr >= 0; --dr) {
    for (int ds = m - 1; ds >= 0; --ds) {
      for (int i = 1; i + dr <= n; ++i) {
        for (int h = 1; h + ds <= m; ++h) {
          const int j = i + dr, l = h + ds;
          for (int y = kContexts - 1; y >= 0; --y) {
            for (int t = kJTabs - 1; t >= 0; --t) {
              const auto tab = static_cast<JTab>(t);
              if (!jtab_needed(tab, y)) continue;
              const Ref cell = g.ref(tab, y, i, j, h, l);
              if (*cell.g == 0.0 || *cell.v == 0.0) continue;
              OutsideOp op;
              op.g = *cell.g;
              g.produce(op, tab, y, i, j, h, l);
              worst = std::max(worst, std::abs(op.sum - *cell.v) / *cell.v);
              ++reachable;
            }
          }
        }
      }
    }
  }
  worst = std::max(worst, backward_secondary(g.sec(0)));
  worst = std::max(worst, backward_secondary(g.sec(1)));
  out.max_tpf_error = worst;
  out.reachable_cells = reachable;

  out.bpp_r.assign(n + 1, std::vector<double>(n + 1, 0.0));
  out.bpp_s.assign(m + 1, std::vector<double>(m + 1, 0.0));
  out.bpp_ext.assign(n + 1, std::vector<double>(m + 1, 0.0));
  for (int k = 0; k < 2; ++k) {
    const SecStrand& s = g.sec(k);
    Matrix& bpp = k == 0 ? out.bpp_r : out.bpp_s;
    for (int a = 1; a <= s.n(); ++a)
      for (int b = a + 1; b <= s.n(); ++b)
        bpp[a][b] = s.value(SecTab::Closed, a, b) * s.adjoint(SecTab::Closed, a, b) / q;
  }
  for (int y = 0; y < kContexts; ++y) {
    for (int i = 1; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        for (int h = 1; h <= m; ++h) {
          for (int l = h; l <= m; ++l) {
            const double tr = out.node(in, JTab::TightR, y, i, j, h, l);
            const double ts = out.node(in, JTab::TightS, y, i, j, h, l);
            const double trs = out.node(in, JTab::TightRS, y, i, j, h, l);
            out.bpp_r[i][j] += tr + trs;
            out.bpp_s[h][l] += ts + trs;
            out.bpp_ext[j][l] += out.node(in, JTab::HybridPrefix, y, i, j, h, l);
          }
        }
      }
    }
  }
  return out;
}

HybridProbMatrix hybrid_probabilities(const InsideResult& in, const ProbTables& p) {
  HybridProbMatrix hy;
  hy.n = in.n();
  hy.m = in.m();
  const std::size_t size = static_cast<std::size_t>(hy.n + 1) * (hy.n + 1) * (hy.m + 1) *
                           (hy.m + 1);
  hy.by_context.assign(kContexts, std::vector<double>(size, 0.0));
  hy.total.assign(size, 0.0);
  for (int i = 1; i <= hy.n; ++i)
    for (int j = i; j <= hy.n; ++j)
      for (int h = 1; h <= hy.m; ++h)
        for (int l = h; l <= hy.m; ++l) {
          const std::size_t k = hy.index(i, j, h, l);
          for (int y = 0; y < kContexts; ++y) {
            hy.by_context[y][k] = p.node(in, JTab::Hybrid, y, i, j, h, l);
            hy.total[k] += hy.by_context[y][k];
          }
        }
  return hy;
}

TargetTable target_sites(const HybridProbMatrix& hy, double threshold) {
  std::vector<TargetRow> all;
  for (int i = 1; i <= hy.n; ++i) {
    for (int j = i; j <= hy.n; ++j) {
      double sum = 0.0;
      for (int h = 1; h <= hy.m; ++h)
        for (int l = h; l <= hy.m; ++l) sum += hy(i, j, h, l);
      if (sum > 0.0) all.push_back({Side::R, i, j, sum});
    }
  }
  for (int h = 1; h <= hy.m; ++h) {
    for (int l = h; l <= hy.m; ++l) {
      double sum = 0.0;
      for (int i = 1; i <= hy.n; ++i)
        for (int j = i; j <= hy.n; ++j) sum += hy(i, j, h, l);
      if (sum > 0.0) all.push_back({Side::S, h, l, sum});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const TargetRow& a, const TargetRow& b) {
    return a.probability > b.probability;
  });
  TargetTable table;
  if (!all.empty()) {
    table.p_opt = all.front();
    table.has_opt = true;
  }
  for (const auto& row : all)
    if (row.probability > threshold) table.rows.push_back(row);
  return table;
}

}  // namespace jpf
