#pragma once

// Productions of the joint-structure grammar.
//
// Every nonterminal is one table (2D for single-strand secondary structure,
// 4D per loop context for joint structures). `produce` enumerates the
// mutually exclusive right-hand sides of one cell and hands each term to an
// Op: the inside pass sums them, the outside pass pushes adjoints to the
// factors, and the sampler draws one term. docs/grammar.md lists the rules.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "jpf/energy.hpp"
#include "jpf/seq_model.hpp"
#include "jpf/tensor.hpp"

namespace jpf {

enum class SecTab : std::uint8_t {
  Closed,     // closed by arc (a,b), non-kissing loop
  Branch1E,   // one branch starting at a, then unpaired to b
  Branch1M,
  Branch1K,
  BranchesE,  // at least one branch
  BranchesM,
  BranchesK,
  SegE,       // any secondary structure, exterior-loop pricing
  SegK,       // any secondary structure, kissing-loop pricing
  Count
};

enum class JTab : std::uint8_t {
  HybridPrefix,  // run of exterior arcs anchored at (i,h) and (j,l)
  Hybrid,        // the same run used as a maximal hybrid block
  TightR,        // closed by R arc (i,j) only
  TightS,        // closed by S arc (h,l) only
  TightRS,       // closed by both
  Tight,
  ChainH,        // block chain flush on all four ends, last block a hybrid
  ChainTMulti,   // >= 2 blocks, last block tight
  ChainT,
  Chain,
  ChainInR,      // Chain minus a lone TightS/TightRS block
  ChainInS,      // Chain minus a lone TightR/TightRS block
  GapR,          // Chain + trailing R segment
  Gapped,        // Chain + trailing R and S segments
  GapRH,         // trailing segments not both empty of arcs (after a hybrid)
  UnpRH,
  GappedH,
  InRLeft,       // content of a TightR: free R ends, flush S ends
  InR,
  InSLeft,       // content of a TightS: flush R ends, free S ends
  InS,
  WrapL,         // Chain with free ends on both strands
  WrapLR,
  WrapLRS,
  Wrap,
  Count
};

inline constexpr int kSecTabs = static_cast<int>(SecTab::Count);
inline constexpr int kJTabs = static_cast<int>(JTab::Count);
inline constexpr int kContexts = 4;  // index = 2 * (R is K) + (S is K)
inline constexpr int kEE = 0, kEK = 1, kKE = 2, kKK = 3;

inline constexpr Loop ctx_r(int y) { return (y >> 1) ? Loop::K : Loop::E; }
inline constexpr Loop ctx_s(int y) { return (y & 1) ? Loop::K : Loop::E; }
inline constexpr int make_ctx(Loop r, Loop s) {
  return 2 * static_cast<int>(r) + static_cast<int>(s);
}

const char* sec_tab_name(SecTab t);
const char* jtab_name(JTab t);
const char* ctx_name(int y);

/// Component classes of the decomposition, for reporting.
enum class ComponentKind {
  Arbitrary,
  RightTight,
  DoubleTight,
  TightAny,
  TightSquare,
  TightNablaR,
  TightTriangleS,
  Hybrid,
  HybridPart,
  Isolated,
  SecondaryR,
  SecondaryS,
};
ComponentKind component_kind(JTab t);

/// Whether a joint table is ever reachable in context y.
bool jtab_needed(JTab t, int y);

enum class NodeKind : std::uint8_t { One, Root, Sec, Joint };

struct Node {
  NodeKind kind = NodeKind::One;
  std::uint8_t tab = 0;
  std::uint8_t sub = 0;  // strand (0 = R, 1 = S) or context
  std::int16_t i = 0, j = 0, h = 0, l = 0;
};

struct Ref {
  double* v;
  double* g;
  Node key;
};

enum class ArcKind : std::uint8_t { R, S, Ext };
struct EmitArc {
  ArcKind kind;
  std::int16_t a, b;
};
struct Emit {
  std::uint8_t n = 0;
  EmitArc arcs[2];
};
inline const Emit kNoEmit{};

inline Emit emit1(ArcKind k, int a, int b) {
  Emit e;
  e.n = 1;
  e.arcs[0] = {k, static_cast<std::int16_t>(a), static_cast<std::int16_t>(b)};
  return e;
}

/// Single-strand tables and weights. Strand 1 (S) is stored in internal
/// order, with pair types read 5'->3'.
class SecStrand {
 public:
  SecStrand() = default;
  SecStrand(const std::string& residues, bool reversed, const EnergyModel& model,
            int strand_id, bool with_adjoints);

  int n() const { return n_; }
  int strand_id() const { return id_; }
  int pt(int a, int b) const { return pt_[a * (n_ + 2) + b]; }
  bool can_pair(int a, int b) const {
    return b - a - 1 >= min_hairpin_ && model_pair_ok_[pt(a, b) + 1];
  }

  Ref ref(SecTab t, int a, int b) {
    const auto k = static_cast<int>(t);
    const std::size_t off = val_[k].offset(a, b);
    Ref r{val_[k].data() + off, adj_[k].allocated() ? adj_[k].data() + off : nullptr,
          {NodeKind::Sec, static_cast<std::uint8_t>(k),
           static_cast<std::uint8_t>(id_), static_cast<std::int16_t>(a),
           static_cast<std::int16_t>(b), 0, 0}};
    return r;
  }
  double value(SecTab t, int a, int b) const { return val_[static_cast<int>(t)](a, b); }
  double adjoint(SecTab t, int a, int b) const { return adj_[static_cast<int>(t)](a, b); }
  double& adjoint_slot(SecTab t, int a, int b) { return adj_[static_cast<int>(t)](a, b); }
  bool has_adjoints() const { return adj_[0].allocated(); }

  // Loop-context pricing for segments: 0 = E, 1 = M, 2 = K.
  double unpaired_pow(int c, int k) const { return upow_[c][k]; }

  template <class Op>
  void produce(Op& op, SecTab t, int a, int b);

  std::size_t bytes() const;

 private:
  int n_ = 0;
  int id_ = 0;
  int min_hairpin_ = 3;
  std::vector<int> pt_;
  std::array<bool, kNumPairTypes + 1> model_pair_ok_{};
  std::vector<double> w_hairpin_;
  std::vector<double> w_loop_;  // (left, right) for non-stack interior loops
  std::array<std::array<double, kNumPairTypes>, kNumPairTypes> w_stack_{};
  double w_multi_init_ = 1.0;
  std::array<double, 3> branch_w_{};
  std::array<std::vector<double>, 3> upow_;
  std::array<Table2, kSecTabs> val_;
  std::array<Table2, kSecTabs> adj_;

  double w_loop(int left, int right) const { return w_loop_[left * (n_ + 1) + right]; }

  friend class JointGrammar;
};

/// All joint tables for one (R, S, model) triple.
class JointGrammar {
 public:
  JointGrammar(const Strand& r, const Strand& s, const EnergyModel& model,
               bool with_adjoints);

  /// Bytes the tables of an (n, m) instance need, before allocation.
  static std::size_t estimate_bytes(int n, int m, bool with_adjoints);

  int n() const { return n_; }
  int m() const { return m_; }
  SecStrand& sec(int k) { return sec_[k]; }
  const SecStrand& sec(int k) const { return sec_[k]; }

  Ref ref(JTab t, int y, int i, int j, int h, int l) {
    auto& tv = val_[static_cast<int>(t)][y];
    const std::size_t off = tv.offset(i, j, h, l);
    auto& tg = adj_[static_cast<int>(t)][y];
    return {tv.data() + off, tg.allocated() ? tg.data() + off : nullptr,
            {NodeKind::Joint, static_cast<std::uint8_t>(t),
             static_cast<std::uint8_t>(y), static_cast<std::int16_t>(i),
             static_cast<std::int16_t>(j), static_cast<std::int16_t>(h),
             static_cast<std::int16_t>(l)}};
  }
  Ref root() { return {&root_v_, &root_g_, {NodeKind::Root, 0, 0, 0, 0, 0, 0}}; }
  Ref one() { return {&one_v_, &one_g_, {NodeKind::One, 0, 0, 0, 0, 0, 0}}; }

  double value(JTab t, int y, int i, int j, int h, int l) const {
    return val_[static_cast<int>(t)][y](i, j, h, l);
  }
  double adjoint(JTab t, int y, int i, int j, int h, int l) const {
    return adj_[static_cast<int>(t)][y](i, j, h, l);
  }
  bool allocated(JTab t, int y) const { return val_[static_cast<int>(t)][y].allocated(); }
  bool has_adjoints() const { return with_adjoints_; }
  double root_value() const { return root_v_; }
  double root_adjoint() const { return root_g_; }
  double& root_adjoint_slot() { return root_g_; }

  bool ext_ok(int i, int h) const { return ext_w_[i * (m_ + 1) + h] > 0.0; }
  double ext_weight(int i, int h) const { return ext_w_[i * (m_ + 1) + h]; }

  template <class Op>
  void produce(Op& op, JTab t, int y, int i, int j, int h, int l);
  template <class Op>
  void produce_root(Op& op);
  /// Dispatches on a node key (used by the sampler).
  template <class Op>
  void produce_node(Op& op, const Node& node);

 private:
  int n_, m_;
  bool with_adjoints_;
  std::array<SecStrand, 2> sec_;
  std::array<std::array<DPTensor4, kContexts>, kJTabs> val_;
  std::array<std::array<DPTensor4, kContexts>, kJTabs> adj_;
  double root_v_ = 0.0, root_g_ = 0.0;
  double one_v_ = 1.0, one_g_ = 0.0;

  std::vector<int> ext_pt_;
  std::vector<double> ext_w_;
  std::array<std::array<double, kNumPairTypes>, kNumPairTypes> w_hy_stack_{};
  std::vector<double> w_hy_gap_;   // by total gap
  std::vector<double> w_beta_pow_;
  double w_kiss_init_ = 1.0;
  double w_kiss_branch_ = 1.0;

  int ext_pt(int i, int h) const { return ext_pt_[i * (m_ + 1) + h]; }
  double branch(Loop c) const { return c == Loop::K ? w_kiss_branch_ : 1.0; }

  Ref seg(int strand, int y, int a, int b) {
    if (a > b) return one();
    const Loop c = strand == 0 ? ctx_r(y) : ctx_s(y);
    return sec_[strand].ref(c == Loop::K ? SecTab::SegK : SecTab::SegE, a, b);
  }
  Ref branches(int strand, int y, int a, int b) {
    const Loop c = strand == 0 ? ctx_r(y) : ctx_s(y);
    return sec_[strand].ref(c == Loop::K ? SecTab::BranchesK : SecTab::BranchesE, a, b);
  }
  double unpaired_pow(int strand, int y, int k) const {
    const Loop c = strand == 0 ? ctx_r(y) : ctx_s(y);
    return sec_[strand].unpaired_pow(c == Loop::K ? 2 : 0, k);
  }
  double hybrid_step(int y, int i1, int h1, int j, int l) const {
    const int gr = j - i1 - 1, gs = l - h1 - 1;
    if (gr == 0 && gs == 0) return w_hy_stack_[ext_pt(i1, h1)][ext_pt(j, l)];
    double w = w_hy_gap_[gr + gs];
    if (ctx_r(y) == Loop::K) w *= w_beta_pow_[gr];
    if (ctx_s(y) == Loop::K) w *= w_beta_pow_[gs];
    return w;
  }
};

// ---------------------------------------------------------------------------

template <class Op>
void SecStrand::produce(Op& op, SecTab t, int a, int b) {
  switch (t) {
    case SecTab::Closed: {
      if (!can_pair(a, b)) return;
      const Emit arc = emit1(id_ == 0 ? ArcKind::R : ArcKind::S, a, b);
      op.term(w_hairpin_[b - a - 1], arc);
      const int outer = pt(a, b);
      for (int p = a + 1; p < b; ++p) {
        for (int q = p + min_hairpin_ + 1; q < b; ++q) {
          if (!can_pair(p, q)) continue;
          const int left = p - a - 1, right = b - q - 1;
          const double w =
              (left == 0 && right == 0) ? w_stack_[outer][pt(p, q)] : w_loop(left, right);
          op.term(w, arc, ref(SecTab::Closed, p, q));
        }
      }
      for (int u = a + 2; u < b; ++u) {
        op.term(w_multi_init_, arc, ref(SecTab::BranchesM, a + 1, u - 1),
                ref(SecTab::Branch1M, u, b - 1));
      }
      return;
    }
    case SecTab::Branch1E:
    case SecTab::Branch1M:
    case SecTab::Branch1K: {
      const int c = static_cast<int>(t) - static_cast<int>(SecTab::Branch1E);
      for (int w = a + 1; w <= b; ++w) {
        op.term(branch_w_[c] * upow_[c][b - w], kNoEmit, ref(SecTab::Closed, a, w));
      }
      return;
    }
    case SecTab::BranchesE:
    case SecTab::BranchesM:
    case SecTab::BranchesK: {
      const int c = static_cast<int>(t) - static_cast<int>(SecTab::BranchesE);
      const auto one_branch = static_cast<SecTab>(static_cast<int>(SecTab::Branch1E) + c);
      for (int u = a; u <= b; ++u) {
        op.term(upow_[c][u - a], kNoEmit, ref(one_branch, u, b));
        if (u > a) op.term(1.0, kNoEmit, ref(t, a, u - 1), ref(one_branch, u, b));
      }
      return;
    }
    case SecTab::SegE:
    case SecTab::SegK: {
      const int c = t == SecTab::SegE ? 0 : 2;
      const auto many = t == SecTab::SegE ? SecTab::BranchesE : SecTab::BranchesK;
      op.term(upow_[c][b - a + 1], kNoEmit);
      op.term(1.0, kNoEmit, ref(many, a, b));
      return;
    }
    case SecTab::Count: return;
  }
}

template <class Op>
void JointGrammar::produce(Op& op, JTab t, int y, int i, int j, int h, int l) {
  switch (t) {
    case JTab::HybridPrefix: {
      if (i == j && h == l) {
        if (ext_ok(i, h)) op.term(ext_weight(i, h), emit1(ArcKind::Ext, i, h));
        return;
      }
      if (i == j || h == l || !ext_ok(j, l)) return;
      const Emit arc = emit1(ArcKind::Ext, j, l);
      for (int i1 = i; i1 < j; ++i1) {
        for (int h1 = h; h1 < l; ++h1) {
          if ((i1 == i) != (h1 == h)) continue;
          op.term(hybrid_step(y, i1, h1, j, l), arc, ref(JTab::HybridPrefix, y, i, i1, h, h1));
        }
      }
      return;
    }
    case JTab::Hybrid:
      op.term(1.0, kNoEmit, ref(JTab::HybridPrefix, y, i, j, h, l));
      return;
    case JTab::TightR: {
      if (j - i < 2 || !sec_[0].can_pair(i, j)) return;
      op.term(branch(ctx_r(y)) * w_kiss_init_, emit1(ArcKind::R, i, j),
              ref(JTab::InR, make_ctx(Loop::K, ctx_s(y)), i + 1, j - 1, h, l));
      return;
    }
    case JTab::TightS: {
      if (l - h < 2 || !sec_[1].can_pair(h, l)) return;
      op.term(branch(ctx_s(y)) * w_kiss_init_, emit1(ArcKind::S, h, l),
              ref(JTab::InS, make_ctx(ctx_r(y), Loop::K), i, j, h + 1, l - 1));
      return;
    }
    case JTab::TightRS: {
      if (j - i < 2 || l - h < 2 || !sec_[0].can_pair(i, j) || !sec_[1].can_pair(h, l))
        return;
      Emit e = emit1(ArcKind::R, i, j);
      e.n = 2;
      e.arcs[1] = {ArcKind::S, static_cast<std::int16_t>(h), static_cast<std::int16_t>(l)};
      op.term(branch(ctx_r(y)) * branch(ctx_s(y)) * w_kiss_init_ * w_kiss_init_, e,
              ref(JTab::Wrap, kKK, i + 1, j - 1, h + 1, l - 1));
      return;
    }
    case JTab::Tight:
      op.term(1.0, kNoEmit, ref(JTab::TightR, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::TightS, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::TightRS, y, i, j, h, l));
      return;
    case JTab::ChainH:
      op.term(1.0, kNoEmit, ref(JTab::Hybrid, y, i, j, h, l));
      for (int i2 = i + 1; i2 <= j; ++i2) {
        for (int h2 = h + 1; h2 <= l; ++h2) {
          op.term(1.0, kNoEmit, ref(JTab::GappedH, y, i, i2 - 1, h, h2 - 1),
                  ref(JTab::Hybrid, y, i2, j, h2, l));
        }
      }
      return;
    case JTab::ChainTMulti:
      for (int i2 = i + 1; i2 <= j; ++i2) {
        for (int h2 = h + 1; h2 <= l; ++h2) {
          op.term(1.0, kNoEmit, ref(JTab::Gapped, y, i, i2 - 1, h, h2 - 1),
                  ref(JTab::Tight, y, i2, j, h2, l));
        }
      }
      return;
    case JTab::ChainT:
      op.term(1.0, kNoEmit, ref(JTab::ChainTMulti, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::Tight, y, i, j, h, l));
      return;
    case JTab::Chain:
      op.term(1.0, kNoEmit, ref(JTab::ChainH, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::ChainT, y, i, j, h, l));
      return;
    case JTab::ChainInR:
      op.term(1.0, kNoEmit, ref(JTab::ChainH, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::ChainTMulti, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::TightR, y, i, j, h, l));
      return;
    case JTab::ChainInS:
      op.term(1.0, kNoEmit, ref(JTab::ChainH, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::ChainTMulti, y, i, j, h, l));
      op.term(1.0, kNoEmit, ref(JTab::TightS, y, i, j, h, l));
      return;
    case JTab::GapR:
      for (int i1 = i; i1 <= j; ++i1)
        op.term(1.0, kNoEmit, ref(JTab::Chain, y, i, i1, h, l), seg(0, y, i1 + 1, j));
      return;
    case JTab::Gapped:
      for (int l1 = h; l1 <= l; ++l1)
        op.term(1.0, kNoEmit, ref(JTab::GapR, y, i, j, h, l1), seg(1, y, l1 + 1, l));
      return;
    case JTab::GapRH:
      for (int i1 = i; i1 <= j; ++i1) {
        op.term(1.0, kNoEmit, ref(JTab::ChainT, y, i, i1, h, l), seg(0, y, i1 + 1, j));
        if (i1 < j)
          op.term(1.0, kNoEmit, ref(JTab::ChainH, y, i, i1, h, l), branches(0, y, i1 + 1, j));
      }
      return;
    case JTab::UnpRH:
      for (int i1 = i; i1 <= j; ++i1)
        op.term(unpaired_pow(0, y, j - i1), kNoEmit, ref(JTab::ChainH, y, i, i1, h, l));
      return;
    case JTab::GappedH:
      for (int l1 = h; l1 <= l; ++l1) {
        op.term(1.0, kNoEmit, ref(JTab::GapRH, y, i, j, h, l1), seg(1, y, l1 + 1, l));
        if (l1 < l)
          op.term(1.0, kNoEmit, ref(JTab::UnpRH, y, i, j, h, l1), branches(1, y, l1 + 1, l));
      }
      return;
    case JTab::InRLeft:
      for (int i1 = i; i1 <= j; ++i1)
        op.term(1.0, kNoEmit, seg(0, y, i, i1 - 1), ref(JTab::ChainInR, y, i1, j, h, l));
      return;
    case JTab::InR:
      for (int j1 = i; j1 <= j; ++j1)
        op.term(1.0, kNoEmit, ref(JTab::InRLeft, y, i, j1, h, l), seg(0, y, j1 + 1, j));
      return;
    case JTab::InSLeft:
      for (int h1 = h; h1 <= l; ++h1)
        op.term(1.0, kNoEmit, seg(1, y, h, h1 - 1), ref(JTab::ChainInS, y, i, j, h1, l));
      return;
    case JTab::InS:
      for (int l1 = h; l1 <= l; ++l1)
        op.term(1.0, kNoEmit, ref(JTab::InSLeft, y, i, j, h, l1), seg(1, y, l1 + 1, l));
      return;
    case JTab::WrapL:
      for (int i1 = i; i1 <= j; ++i1)
        op.term(1.0, kNoEmit, seg(0, y, i, i1 - 1), ref(JTab::Chain, y, i1, j, h, l));
      return;
    case JTab::WrapLR:
      for (int j1 = i; j1 <= j; ++j1)
        op.term(1.0, kNoEmit, ref(JTab::WrapL, y, i, j1, h, l), seg(0, y, j1 + 1, j));
      return;
    case JTab::WrapLRS:
      for (int h1 = h; h1 <= l; ++h1)
        op.term(1.0, kNoEmit, seg(1, y, h, h1 - 1), ref(JTab::WrapLR, y, i, j, h1, l));
      return;
    case JTab::Wrap:
      for (int l1 = h; l1 <= l; ++l1)
        op.term(1.0, kNoEmit, ref(JTab::WrapLRS, y, i, j, h, l1), seg(1, y, l1 + 1, l));
      return;
    case JTab::Count: return;
  }
}

template <class Op>
void JointGrammar::produce_root(Op& op) {
  op.term(1.0, kNoEmit, sec_[0].ref(SecTab::SegE, 1, n_), sec_[1].ref(SecTab::SegE, 1, m_));
  op.term(1.0, kNoEmit, ref(JTab::Wrap, kEE, 1, n_, 1, m_));
}

template <class Op>
void JointGrammar::produce_node(Op& op, const Node& node) {
  switch (node.kind) {
    case NodeKind::Root: produce_root(op); return;
    case NodeKind::Sec:
      sec_[node.sub].produce(op, static_cast<SecTab>(node.tab), node.i, node.j);
      return;
    case NodeKind::Joint:
      produce(op, static_cast<JTab>(node.tab), node.sub, node.i, node.j, node.h, node.l);
      return;
    case NodeKind::One: return;
  }
}

// ---------------------------------------------------------------------------
// Inside and outside operators.

/// Sums the terms of one cell into it.
struct InsideOp {
  double acc = 0.0;
  void term(double c, const Emit&) { acc += c; }
  void term(double c, const Emit&, const Ref& a) { acc += c * *a.v; }
  void term(double c, const Emit&, const Ref& a, const Ref& b) { acc += c * *a.v * *b.v; }
};

/// Pushes the adjoint of one cell to its factors; also re-derives the cell
/// as the sum of its terms to check conservation.
struct OutsideOp {
  double g = 0.0;
  double sum = 0.0;
  void term(double c, const Emit&) { sum += c; }
  void term(double c, const Emit&, const Ref& a) {
    *a.g += g * c;
    sum += c * *a.v;
  }
  void term(double c, const Emit&, const Ref& a, const Ref& b) {
    *a.g += g * c * *b.v;
    *b.g += g * c * *a.v;
    sum += c * *a.v * *b.v;
  }
};

}  // namespace jpf
