#include "jpf/secfold.hpp"

#include <cmath>

namespace jpf {

SecStrand::SecStrand(const std::string& residues, bool reversed,
                     const EnergyModel& model, int strand_id, bool with_adjoints)
    : n_(static_cast<int>(residues.size())), id_(strand_id),
      min_hairpin_(model.min_hairpin) {
  const int stride = n_ + 2;
  pt_.assign(static_cast<std::size_t>(stride) * stride, -1);
  for (int a = 1; a <= n_; ++a) {
    for (int b = a + 1; b <= n_; ++b) {
      const char five = reversed ? residues[b - 1] : residues[a - 1];
      const char three = reversed ? residues[a - 1] : residues[b - 1];
      pt_[a * stride + b] = pair_type(five, three);
    }
  }
  model_pair_ok_[0] = false;
  for (int p = 0; p < kNumPairTypes; ++p) model_pair_ok_[p + 1] = model.can_pair(p);

  w_hairpin_.resize(n_ + 1);
  for (int k = 0; k <= n_; ++k) w_hairpin_[k] = model.weight(model.hairpin_energy(k));
  w_loop_.assign(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0.0);
  for (int left = 0; left <= n_; ++left) {
    for (int right = 0; right <= n_; ++right) {
      if (left + right == 0) continue;
      w_loop_[left * (n_ + 1) + right] =
          model.weight(model.interior_energy(0, 0, left, right));
    }
  }
  for (int p = 0; p < kNumPairTypes; ++p)
    for (int q = 0; q < kNumPairTypes; ++q) w_stack_[p][q] = model.weight(model.stack[p][q]);
  w_multi_init_ = model.weight(model.multi_init);
  branch_w_ = {1.0, model.weight(model.multi_branch), model.weight(model.kiss_branch)};
  const std::array<double, 3> unpaired = {0.0, model.multi_unpaired, model.kiss_unpaired};
  for (int c = 0; c < 3; ++c) {
    upow_[c].resize(n_ + 2);
    for (int k = 0; k <= n_ + 1; ++k) upow_[c][k] = model.weight(k * unpaired[c]);
  }

  for (int t = 0; t < kSecTabs; ++t) {
    val_[t] = Table2(n_);
    if (with_adjoints) adj_[t] = Table2(n_);
  }
  for (int a = 1; a <= n_ + 1; ++a) {
    val_[static_cast<int>(SecTab::SegE)](a, a - 1) = 1.0;
    val_[static_cast<int>(SecTab::SegK)](a, a - 1) = 1.0;
  }
}

std::size_t SecStrand::bytes() const {
  std::size_t total = 0;
  for (int t = 0; t < kSecTabs; ++t) total += (val_[t].size() + adj_[t].size()) * sizeof(double);
  return total;
}

void fill_secondary(SecStrand& s) {
  for (int d = 0; d < s.n(); ++d) {
    for (int a = 1; a + d <= s.n(); ++a) {
      for (int t = 0; t < kSecTabs; ++t) {
        InsideOp op;
        s.produce(op, static_cast<SecTab>(t), a, a + d);
        *s.ref(static_cast<SecTab>(t), a, a + d).v = op.acc;
      }
    }
  }
}

double backward_secondary(SecStrand& s) {
  double worst = 0.0;
  for (int d = s.n() - 1; d >= 0; --d) {
    for (int a = 1; a + d <= s.n(); ++a) {
      for (int t = kSecTabs - 1; t >= 0; --t) {
        const Ref cell = s.ref(static_cast<SecTab>(t), a, a + d);
        if (*cell.g == 0.0) continue;
        OutsideOp op;
        op.g = *cell.g;
        s.produce(op, static_cast<SecTab>(t), a, a + d);
        if (*cell.v > 0.0) worst = std::max(worst, std::abs(op.sum - *cell.v) / *cell.v);
      }
    }
  }
  return worst;
}

SecTables fold(const Strand& strand, const EnergyModel& model) {
  auto s = std::make_shared<SecStrand>(strand.residues, strand.role == Role::Target,
                                       model, strand.role == Role::Target ? 1 : 0, false);
  fill_secondary(*s);
  return SecTables(std::move(s));
}

std::vector<std::vector<double>> base_pair_probs(const Strand& strand,
                                                 const EnergyModel& model) {
  SecStrand s(strand.residues, strand.role == Role::Target, model,
              strand.role == Role::Target ? 1 : 0, true);
  fill_secondary(s);
  const int n = s.n();
  const double z = s.value(SecTab::SegE, 1, n);
  s.adjoint_slot(SecTab::SegE, 1, n) = 1.0;
  backward_secondary(s);
  std::vector<std::vector<double>> p(n + 1, std::vector<double>(n + 1, 0.0));
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      p[a][b] = s.value(SecTab::Closed, a, b) * s.adjoint(SecTab::Closed, a, b) / z;
  return p;
}

}  // namespace jpf
