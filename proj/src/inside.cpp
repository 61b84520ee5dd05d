#include "jpf/inside.hpp"

#include <omp.h>

#include <string>

#include "jpf/error.hpp"

namespace jpf {

const char* sec_tab_name(SecTab t) {
  switch (t) {
    case SecTab::Closed: return "Closed";
    case SecTab::Branch1E: return "Branch1E";
    case SecTab::Branch1M: return "Branch1M";
    case SecTab::Branch1K: return "Branch1K";
    case SecTab::BranchesE: return "BranchesE";
    case SecTab::BranchesM: return "BranchesM";
    case SecTab::BranchesK: return "BranchesK";
    case SecTab::SegE: return "SegE";
    case SecTab::SegK: return "SegK";
    case SecTab::Count: break;
  }
  return "?";
}

const char* jtab_name(JTab t) {
  static const char* const names[] = {
      "HybridPrefix", "Hybrid", "TightR", "TightS", "TightRS", "Tight",
      "ChainH", "ChainTMulti", "ChainT", "Chain", "ChainInR", "ChainInS",
      "GapR", "Gapped", "GapRH", "UnpRH", "GappedH", "InRLeft", "InR",
      "InSLeft", "InS", "WrapL", "WrapLR", "WrapLRS", "Wrap"};
  const auto k = static_cast<int>(t);
  return k < kJTabs ? names[k] : "?";
}

const char* ctx_name(int y) {
  static const char* const names[] = {"EE", "EK", "KE", "KK"};
  return y >= 0 && y < kContexts ? names[y] : "?";
}

ComponentKind component_kind(JTab t) {
  switch (t) {
    case JTab::HybridPrefix: return ComponentKind::HybridPart;
    case JTab::Hybrid: return ComponentKind::Hybrid;
    case JTab::TightR: return ComponentKind::TightNablaR;
    case JTab::TightS: return ComponentKind::TightTriangleS;
    case JTab::TightRS: return ComponentKind::TightSquare;
    case JTab::Tight: return ComponentKind::TightAny;
    case JTab::ChainH:
    case JTab::ChainTMulti:
    case JTab::ChainT:
    case JTab::Chain:
    case JTab::ChainInR:
    case JTab::ChainInS: return ComponentKind::DoubleTight;
    case JTab::GapR:
    case JTab::Gapped:
    case JTab::GapRH:
    case JTab::UnpRH:
    case JTab::GappedH: return ComponentKind::RightTight;
    default: return ComponentKind::Arbitrary;
  }
}

bool jtab_needed(JTab t, int y) {
  switch (t) {
    case JTab::InRLeft:
    case JTab::InR:
    case JTab::ChainInR: return ctx_r(y) == Loop::K;
    case JTab::InSLeft:
    case JTab::InS:
    case JTab::ChainInS: return ctx_s(y) == Loop::K;
    case JTab::WrapL:
    case JTab::WrapLR:
    case JTab::WrapLRS:
    case JTab::Wrap: return y == kEE || y == kKK;
    default: return true;
  }
}

namespace {

std::size_t sec_bytes(int n, bool with_adjoints) {
  const std::size_t cells = static_cast<std::size_t>(n + 2) * (n + 2);
  return cells * sizeof(double) * kSecTabs * (with_adjoints ? 2 : 1);
}

}  // namespace

std::size_t JointGrammar::estimate_bytes(int n, int m, bool with_adjoints) {
  std::size_t tables = 0;
  for (int t = 0; t < kJTabs; ++t)
    for (int y = 0; y < kContexts; ++y)
      if (jtab_needed(static_cast<JTab>(t), y)) ++tables;
  const std::size_t cell_bytes = DPTensor4::cells(n, m) * sizeof(double);
  return tables * cell_bytes * (with_adjoints ? 2 : 1) + sec_bytes(n, with_adjoints) +
         sec_bytes(m, with_adjoints);
}

std::size_t inside_bytes(int n, int m, bool with_adjoints) {
  return JointGrammar::estimate_bytes(n, m, with_adjoints);
}

JointGrammar::JointGrammar(const Strand& r, const Strand& s, const EnergyModel& model,
                           bool with_adjoints)
    : n_(static_cast<int>(r.size())), m_(static_cast<int>(s.size())),
      with_adjoints_(with_adjoints) {
  sec_[0] = SecStrand(r.residues, false, model, 0, with_adjoints);
  sec_[1] = SecStrand(s.residues, true, model, 1, with_adjoints);
  for (int t = 0; t < kJTabs; ++t) {
    for (int y = 0; y < kContexts; ++y) {
      if (!jtab_needed(static_cast<JTab>(t), y)) continue;
      val_[t][y] = DPTensor4(n_, m_);
      if (with_adjoints) adj_[t][y] = DPTensor4(n_, m_);
    }
  }

  ext_pt_.assign(static_cast<std::size_t>(n_ + 1) * (m_ + 1), -1);
  ext_w_.assign(ext_pt_.size(), 0.0);
  for (int i = 1; i <= n_; ++i) {
    for (int h = 1; h <= m_; ++h) {
      const int pt = pair_type(r.residues[i - 1], s.residues[h - 1]);
      ext_pt_[i * (m_ + 1) + h] = pt;
      if (model.interaction && model.can_pair(pt))
        ext_w_[i * (m_ + 1) + h] = model.weight(model.exterior_arc[pt]);
    }
  }
  for (int p = 0; p < kNumPairTypes; ++p)
    for (int q = 0; q < kNumPairTypes; ++q)
      w_hy_stack_[p][q] = model.weight(model.hybrid_step_energy(
          model.g_int(p, q, 0, 0), 0, 0, HybridContext{}));
  w_hy_gap_.assign(n_ + m_ + 1, 0.0);
  for (int g = 1; g <= n_ + m_; ++g)
    w_hy_gap_[g] = model.weight(
        model.hybrid_step_energy(model.g_int(0, 0, g, 0), g, 0, HybridContext{}));
  w_beta_pow_.assign(std::max(n_, m_) + 1, 1.0);
  for (int k = 0; k <= std::max(n_, m_); ++k) w_beta_pow_[k] = model.weight(k * model.beta3);
  w_kiss_init_ = model.weight(model.kiss_init);
  w_kiss_branch_ = model.weight(model.kiss_branch);
}

namespace {

void fill_cell(JointGrammar& g, int i, int j, int h, int l) {
  for (int y = 0; y < kContexts; ++y) {
    for (int t = 0; t < kJTabs; ++t) {
      const auto tab = static_cast<JTab>(t);
      if (!jtab_needed(tab, y)) continue;
      InsideOp op;
      g.produce(op, tab, y, i, j, h, l);
      *g.ref(tab, y, i, j, h, l).v = op.acc;
    }
  }
}

void fill_root(JointGrammar& g) {
  InsideOp op;
  g.produce_root(op);
  *g.root().v = op.acc;
}

}  // namespace

void fill_serial(JointGrammar& g) {
  fill_secondary(g.sec(0));
  fill_secondary(g.sec(1));
  for (int dr = 0; dr < g.n(); ++dr)
    for (int ds = 0; ds < g.m(); ++ds)
      for (int i = 1; i + dr <= g.n(); ++i)
        for (int h = 1; h + ds <= g.m(); ++h) fill_cell(g, i, i + dr, h, h + ds);
  fill_root(g);
}

void fill_parallel(JointGrammar& g, int threads) {
  if (threads <= 1) {
    fill_serial(g);
    return;
  }
  fill_secondary(g.sec(0));
  fill_secondary(g.sec(1));
  const int n = g.n(), m = g.m();
#pragma omp parallel num_threads(threads)
  for (int dr = 0; dr < n; ++dr) {
    for (int ds = 0; ds < m; ++ds) {
      const int rows = n - dr, cols = m - ds;
#pragma omp for schedule(dynamic, 1)
      for (int c = 0; c < rows * cols; ++c) {
        const int i = 1 + c / cols, h = 1 + c % cols;
        fill_cell(g, i, i + dr, h, h + ds);
      }
    }
  }
  fill_root(g);
}

InsideResult inside(const Strand& r, const Strand& s, const EnergyModel& model,
                    const InsideOptions& opt) {
  if (r.size() == 0 || s.size() == 0)
    throw Error(ErrorKind::InvalidArgument, "both strands must be nonempty");
  const std::size_t need = inside_bytes(static_cast<int>(r.size()),
                                        static_cast<int>(s.size()), opt.with_adjoints);
  if (need > opt.memory_budget) {
    throw Error(ErrorKind::CapacityExceeded,
                "tables need " + std::to_string(need) + " bytes, budget is " +
                    std::to_string(opt.memory_budget));
  }
  auto g = std::make_shared<JointGrammar>(r, s, model, opt.with_adjoints);
  fill_parallel(*g, opt.threads);
  return InsideResult(std::move(g), r, s, model);
}

}  // namespace jpf
