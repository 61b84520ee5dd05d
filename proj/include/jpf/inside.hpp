#pragma once

#include <cstddef>
#include <memory>

#include "jpf/energy.hpp"
#include "jpf/grammar.hpp"
#include "jpf/secfold.hpp"
#include "jpf/seq_model.hpp"

namespace jpf {

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

struct InsideOptions {
  int threads = 1;                              // 1 = serial reference fill
  std::size_t memory_budget = kDefaultMemoryBudget;
  bool with_adjoints = true;                    // room for the outside pass
};

class InsideResult {
 public:
  InsideResult(std::shared_ptr<JointGrammar> g, Strand r, Strand s, EnergyModel model)
      : g_(std::move(g)), r_(std::move(r)), s_(std::move(s)), model_(std::move(model)) {}

  double q_total() const { return g_->root_value(); }
  /// Partition functions of the strands alone.
  double q_r() const { return g_->sec(0).value(SecTab::SegE, 1, g_->n()); }
  double q_s() const { return g_->sec(1).value(SecTab::SegE, 1, g_->m()); }
  int n() const { return g_->n(); }
  int m() const { return g_->m(); }
  const Strand& r() const { return r_; }
  const Strand& s() const { return s_; }
  const EnergyModel& model() const { return model_; }
  JointGrammar& grammar() { return *g_; }
  const JointGrammar& grammar() const { return *g_; }
  std::shared_ptr<JointGrammar> grammar_ptr() const { return g_; }

  /// Entry of a joint table; 0 for tables never used in context y.
  double table(JTab t, int y, int i, int j, int h, int l) const {
    return g_->allocated(t, y) ? g_->value(t, y, i, j, h, l) : 0.0;
  }
  /// Hybrids anchored at (i,h) and (j,l) in context y (EE, EK, KE, KK).
  double hybrid(int y, int i, int j, int h, int l) const {
    return table(JTab::Hybrid, y, i, j, h, l);
  }

 private:
  std::shared_ptr<JointGrammar> g_;
  Strand r_, s_;
  EnergyModel model_;
};

/// Bytes `inside` allocates for an (n, m) instance.
std::size_t inside_bytes(int n, int m, bool with_adjoints);

/// Throws Error(CapacityExceeded) when the tables do not fit the budget.
InsideResult inside(const Strand& r, const Strand& s, const EnergyModel& model,
                    const InsideOptions& opt = {});

/// Fill kernels over an allocated grammar. The parallel kernel computes each
/// cell with the same code and order as the serial one, so results are
/// bitwise identical for any thread count.
void fill_serial(JointGrammar& g);
void fill_parallel(JointGrammar& g, int threads);

}  // namespace jpf
