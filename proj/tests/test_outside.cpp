#include <cmath>
#include <random>

#include "doctest.h"
#include "jpf/oracle.hpp"
#include "jpf/outside.hpp"
#include "jpf/secfold.hpp"
#include "test_util.hpp"

using namespace jpf;
using jpf::testing::query;
using jpf::testing::target;

TEST_CASE("poly-A against poly-U marginals") {
  const EnergyModel unit = EnergyModel::unit();
  InsideResult in = inside(query("AAA"), target("UUU"), unit);
  const ProbTables p = outside(in);
  CHECK(p.root == 1.0);
  CHECK(p.bpp_ext[1][1] == doctest::Approx(0.3).epsilon(1e-12));
  const HybridProbMatrix hy = hybrid_probabilities(in, p);
  // Two of the 20 structures are one hybrid anchored at (1,1) and (3,3).
  CHECK(hy(1, 3, 1, 3) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(hy.context(kEE, 1, 3, 1, 3) == doctest::Approx(0.1).epsilon(1e-12));
  const TargetTable t = target_sites(hy, 0.0);
  double r11 = -1;
  for (const auto& row : t.rows)
    if (row.strand == Side::R && row.i == 1 && row.j == 1) r11 = row.probability;
  CHECK(r11 == doctest::Approx(0.15).epsilon(1e-12));
  REQUIRE(t.has_opt);
  CHECK(t.p_opt.i == 1);
  CHECK(t.p_opt.j == 3);
  CHECK(t.p_opt.probability == doctest::Approx(0.2).epsilon(1e-12));
  for (std::size_t k = 1; k < t.rows.size(); ++k)
    CHECK(t.rows[k - 1].probability >= t.rows[k].probability);
}

TEST_CASE("single arc") {
  InsideResult in = inside(query("A"), target("U"), EnergyModel::unit());
  const ProbTables p = outside(in);
  CHECK(hybrid_probabilities(in, p)(1, 1, 1, 1) == doctest::Approx(0.5));
}

TEST_CASE("threshold is strict") {
  InsideResult in = inside(query("AAA"), target("UUU"), EnergyModel::unit());
  const auto hy = hybrid_probabilities(in, outside(in));
  CHECK(target_sites(hy, 0.16).rows.size() == 2);
  CHECK(target_sites(hy, 0.1).rows.size() == 12);
}

TEST_CASE("no interaction reduces to single-strand probabilities") {
  EnergyModel m;
  m.interaction = false;
  const Strand r = query("GGGAAAUCCCAGCUAGCU");
  InsideResult in = inside(r, target("AGCUAGGGAUUUCC"), m);
  const ProbTables p = outside(in);
  const auto single = base_pair_probs(r, m);
  for (int i = 1; i <= r.size(); ++i)
    for (int j = 1; j <= r.size(); ++j) CHECK(p.bpp_r[i][j] == doctest::Approx(single[i][j]).epsilon(1e-9));
  for (const auto& row : p.bpp_ext)
    for (double v : row) CHECK(v == 0.0);
  CHECK(target_sites(hybrid_probabilities(in, p)).rows.empty());
}

TEST_CASE("unpairable footprint has probability zero") {
  InsideResult in = inside(query("AG"), target("UG"), EnergyModel::unit());
  const auto hy = hybrid_probabilities(in, outside(in));
  CHECK(hy(2, 2, 1, 1) == 0.0);  // G with G
}

TEST_CASE("marginals match the oracle") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 5);
    const EnergyModel model = jpf::testing::random_model(rng, trial % 2);
    const Strand r = query(jpf::testing::random_rna(rng, n));
    const Strand s = target(jpf::testing::random_rna(rng, m));
    InsideResult in = inside(r, s, model);
    const ProbTables p = outside(in);
    const auto hy = hybrid_probabilities(in, p);
    const auto om = exact_probabilities(enumerate(r, s, model));
    CHECK(p.max_tpf_error <= 1e-9);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) CHECK(std::abs(p.bpp_r[i][j] - om.bpp_r[i][j]) <= 1e-9);
    for (int h = 1; h <= m; ++h)
      for (int l = 1; l <= m; ++l) CHECK(std::abs(p.bpp_s[h][l] - om.bpp_s[h][l]) <= 1e-9);
    for (int i = 1; i <= n; ++i)
      for (int h = 1; h <= m; ++h) CHECK(std::abs(p.bpp_ext[i][h] - om.bpp_ext[i][h]) <= 1e-9);
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        for (int h = 1; h <= m; ++h)
          for (int l = h; l <= m; ++l) {
            const auto it = om.p_hy.find({i, j, h, l});
            CHECK(std::abs(hy(i, j, h, l) - (it == om.p_hy.end() ? 0.0 : it->second)) <= 1e-9);
          }
  }
}

TEST_CASE("a position pairs at most once") {
  InsideResult in = inside(query("GGGAAAUCCCAG"), target("CUGGGAUUUCCC"), EnergyModel());
  const ProbTables p = outside(in);
  for (int i = 1; i <= in.n(); ++i) {
    double sum = 0.0;
    for (int j = 1; j <= in.n(); ++j) sum += p.bpp_r[std::min(i, j)][std::max(i, j)];
    for (int h = 1; h <= in.m(); ++h) sum += p.bpp_ext[i][h];
    CHECK(sum <= 1.0 + 1e-9);
  }
  const auto hy = hybrid_probabilities(in, p);
  for (int pos = 1; pos <= in.n(); ++pos) {
    double cover = 0.0;
    for (int i = 1; i <= pos; ++i)
      for (int j = pos; j <= in.n(); ++j)
        for (int h = 1; h <= in.m(); ++h)
          for (int l = h; l <= in.m(); ++l) cover += hy(i, j, h, l);
    CHECK(cover <= 1.0 + 1e-9);
  }
}
