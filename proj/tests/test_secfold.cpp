#include <cmath>
#include <random>

#include "doctest.h"
#include "jpf/inside.hpp"
#include "jpf/oracle.hpp"
#include "jpf/secfold.hpp"
#include "test_util.hpp"

using namespace jpf;
using jpf::testing::query;

namespace {

/// Brute-force count of secondary structures on [1, n].
double count_structures(const std::string& seq, int min_hairpin, int a, int b) {
  if (a >= b) return 1.0;
  double total = count_structures(seq, min_hairpin, a + 1, b);
  for (int k = a + min_hairpin + 1; k <= b; ++k)
    if (pair_type(seq[a - 1], seq[k - 1]) >= 0)
      total += count_structures(seq, min_hairpin, a + 1, k - 1) *
               count_structures(seq, min_hairpin, k + 1, b);
  return total;
}

}  // namespace

TEST_CASE("small single-strand counts") {
  const EnergyModel unit = EnergyModel::unit();
  CHECK(fold(query("AAAA"), unit).q(1, 4) == 1.0);
  CHECK(fold(query("GAAAC"), unit).q(1, 5) == 2.0);
  // empty, (1,7), (1,6), (2,7), (2,6), (1,7)+(2,6)
  CHECK(fold(query("GGAAACC"), unit).q(1, 7) == count_structures("GGAAACC", 3, 1, 7));
  CHECK(fold(query("GGAAACC"), unit).q(1, 7) == 6.0);
  const auto t = fold(query("GGAAACC"), unit);
  CHECK(t.q(3, 2) == 1.0);
  CHECK(t.qb(1, 7) == 2.0);
}

TEST_CASE("counts match enumeration up to length 12") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const std::string seq = jpf::testing::random_rna(rng, n);
    EnergyModel unit = EnergyModel::unit();
    unit.min_hairpin = trial % 4;
    CHECK(fold(query(seq), unit).q(1, n) == count_structures(seq, unit.min_hairpin, 1, n));
  }
}

TEST_CASE("weighted folding matches the oracle") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    EnergyModel m = jpf::testing::random_model(rng, 3);
    m.interaction = false;
    const Strand r = query(jpf::testing::random_rna(rng, n));
    const Strand s = jpf::testing::target("A");
    const auto rep = enumerate(r, s, m);
    CHECK(fold(r, m).q(1, n) == doctest::Approx(rep.weighted_sum).epsilon(1e-9));
  }
}

TEST_CASE("kissing and multi tables differ only in pricing") {
  const EnergyModel unit = EnergyModel::unit();
  const auto t = fold(query("GGGAAACCCAGGAAACCU"), unit);
  for (int i = 1; i <= 18; ++i)
    for (int j = i; j <= 18; ++j) CHECK(t.qm(i, j) == t.qk(i, j));
}

TEST_CASE("adding a pair type never lowers q") {
  EnergyModel m;
  m.allowed[kGU] = m.allowed[kUG] = false;
  const Strand r = query("GGGUAAAUCUCAGGAAACUU");
  const double without = fold(r, m).q(1, 20);
  m.allowed[kGU] = m.allowed[kUG] = true;
  CHECK(fold(r, m).q(1, 20) >= without);
}

TEST_CASE("base-pair probabilities of a single strand") {
  const EnergyModel unit = EnergyModel::unit();
  const auto p = base_pair_probs(query("GGAAACC"), unit);
  CHECK(p[1][7] == doctest::Approx(2.0 / 6));
  CHECK(p[2][6] == doctest::Approx(2.0 / 6));
  CHECK(p[1][6] == doctest::Approx(1.0 / 6));
  CHECK(p[3][7] == 0.0);
}
