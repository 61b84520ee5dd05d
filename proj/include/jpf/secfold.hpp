#pragma once

#include <memory>
#include <vector>

#include "jpf/energy.hpp"
#include "jpf/grammar.hpp"
#include "jpf/seq_model.hpp"

namespace jpf {

/// Partition functions of one strand's secondary structures.
///   q(i,j)  all structures on [i,j] (exterior-loop pricing), q(i,i-1) = 1
///   qb(i,j) structures closed by the arc (i,j)
///   qm(i,j) at least one branch, priced as inside a multi-loop
///   qk(i,j) at least one branch, priced as inside a kissing loop
class SecTables {
 public:
  explicit SecTables(std::shared_ptr<SecStrand> strand) : strand_(std::move(strand)) {}
  int n() const { return strand_->n(); }
  double q(int i, int j) const { return strand_->value(SecTab::SegE, i, j); }
  double qb(int i, int j) const { return strand_->value(SecTab::Closed, i, j); }
  double qm(int i, int j) const { return strand_->value(SecTab::BranchesM, i, j); }
  double qk(int i, int j) const { return strand_->value(SecTab::BranchesK, i, j); }
  /// Any structure on [i,j] priced as the content of a kissing loop.
  double q_kissing(int i, int j) const { return strand_->value(SecTab::SegK, i, j); }
  SecStrand& strand() { return *strand_; }
  const SecStrand& strand() const { return *strand_; }

 private:
  std::shared_ptr<SecStrand> strand_;
};

SecTables fold(const Strand& strand, const EnergyModel& model);

/// Fills every secondary table of `s` by increasing span.
void fill_secondary(SecStrand& s);

/// Propagates adjoints already seeded on `s` down to every cell, in reverse
/// fill order. Returns the largest relative deviation between a reachable
/// cell and the sum of its terms.
double backward_secondary(SecStrand& s);

/// Single-strand base-pair probabilities (McCaskill), indexed [i][j].
std::vector<std::vector<double>> base_pair_probs(const Strand& strand,
                                                 const EnergyModel& model);

}  // namespace jpf
