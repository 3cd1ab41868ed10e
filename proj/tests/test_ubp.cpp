#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ccvar/random.hpp"
#include "ccvar/ubp.hpp"

using namespace ccvar;

namespace {

SparsePolynomial::ExponentVector mono(const IndexTable& t, const std::vector<std::vector<int>>& sets) {
  SparsePolynomial::ExponentVector e(t.size(), 0);
  for (const auto& s : sets) ++e[t.index_of(mask_from_members(s))];
  return e;
}

}  // namespace

TEST_CASE("uniform block permutation counts 1, 3, 16, 131, 1496, 22482") {
  std::vector<std::size_t> expected = {1, 3, 16, 131, 1496, 22482};
  for (int d = 1; d <= 6; ++d) CHECK(enumerate_ubp(d).size() == expected[d - 1]);
  CHECK_THROWS_AS(enumerate_ubp(7), ResourceLimit);
  CHECK_THROWS_AS(enumerate_ubp(0), ResourceLimit);
}

TEST_CASE("d=1 has the single block ({1},{2}) with sign +1") {
  auto ubps = enumerate_ubp(1);
  REQUIRE(ubps.size() == 1);
  CHECK(ubps[0].blocks.size() == 1);
  CHECK(ubps[0].blocks[0].alpha == mask_from_members({1}));
  CHECK(ubps[0].blocks[0].beta == mask_from_members({2}));
  CHECK(ubps[0].sign == 1);
  CHECK(ubps[0].nu == 0);
}

TEST_CASE("block structure invariants for d <= 4") {
  for (int d = 1; d <= 4; ++d) {
    OrbitalMask ref = reference_mask(d);
    OrbitalMask bar = reference_mask(2 * d) & ~ref;
    for (const auto& ubp : enumerate_ubp(d)) {
      OrbitalMask used_alpha = 0, used_beta = 0;
      int sum_sizes = 0;
      for (const auto& block : ubp.blocks) {
        CHECK(popcount(block.alpha) == popcount(block.beta));
        CHECK(popcount(block.alpha) >= 1);
        CHECK((block.alpha & used_alpha) == 0u);
        CHECK((block.beta & used_beta) == 0u);
        used_alpha |= block.alpha;
        used_beta |= block.beta;
        sum_sizes += popcount(block.alpha) * (popcount(block.alpha) - 1) / 2;
      }
      CHECK(used_alpha == ref);
      CHECK(used_beta == bar);
      CHECK((ubp.sign == 1 || ubp.sign == -1));
      CHECK(ubp.nu == d * (d - 1) / 2 - sum_sizes);
      int k = ubp.block_count();
      std::int64_t fact = 1;
      for (int i = 2; i < k; ++i) fact *= i;
      CHECK(std::abs(ubp.mobius()) == fact);
    }
  }
}

TEST_CASE("master polynomials at d=2 match the displayed quadrics") {
  IndexTable t(2, 4);
  SparsePolynomial fwd = master_forward(2);
  REQUIRE(fwd.term_count() == 3);
  CHECK(fwd.coefficient(mono(t, {{3, 4}})) == 1);
  CHECK(fwd.coefficient(mono(t, {{1, 4}, {2, 3}})) == 1);
  CHECK(fwd.coefficient(mono(t, {{1, 3}, {2, 4}})) == -1);

  SparsePolynomial bwd = master_backward(2);
  REQUIRE(bwd.term_count() == 3);
  CHECK(bwd.coefficient(mono(t, {{3, 4}})) == 1);
  CHECK(bwd.coefficient(mono(t, {{1, 4}, {2, 3}})) == 1);
  CHECK(bwd.coefficient(mono(t, {{1, 3}, {2, 4}})) == -1);
}

TEST_CASE("master forward at d=3 has 16 terms, all coefficients +-1") {
  SparsePolynomial fwd = master_forward(3);
  REQUIRE(fwd.term_count() == 16);
  for (const auto& [exps, coeff] : fwd.terms()) CHECK(std::abs(coeff) == 1);
}

TEST_CASE("master backward at d=3 equals the displayed 16-term inversion") {
  IndexTable t(3, 6);
  SparsePolynomial bwd = master_backward(3);
  REQUIRE(bwd.term_count() == 16);

  SparsePolynomial expected(t.size());
  expected.add(mono(t, {{4, 5, 6}}), 1);
  expected.add(mono(t, {{1, 2, 4}, {3, 5, 6}}), -1);
  expected.add(mono(t, {{1, 2, 5}, {3, 4, 6}}), 1);
  expected.add(mono(t, {{1, 2, 6}, {3, 4, 5}}), -1);
  expected.add(mono(t, {{1, 3, 4}, {2, 5, 6}}), 1);
  expected.add(mono(t, {{1, 3, 5}, {2, 4, 6}}), -1);
  expected.add(mono(t, {{1, 3, 6}, {2, 4, 5}}), 1);
  expected.add(mono(t, {{1, 4, 5}, {2, 3, 6}}), -1);
  expected.add(mono(t, {{1, 4, 6}, {2, 3, 5}}), 1);
  expected.add(mono(t, {{1, 5, 6}, {2, 3, 4}}), -1);
  expected.add(mono(t, {{1, 2, 4}, {1, 3, 5}, {2, 3, 6}}), 2);
  expected.add(mono(t, {{1, 2, 4}, {1, 3, 6}, {2, 3, 5}}), -2);
  expected.add(mono(t, {{1, 2, 5}, {1, 3, 4}, {2, 3, 6}}), -2);
  expected.add(mono(t, {{1, 2, 5}, {1, 3, 6}, {2, 3, 4}}), 2);
  expected.add(mono(t, {{1, 2, 6}, {1, 3, 4}, {2, 3, 5}}), 2);
  expected.add(mono(t, {{1, 2, 6}, {1, 3, 5}, {2, 3, 4}}), -2);
  CHECK(bwd == expected);
}

TEST_CASE("master backward coefficient spectrum at d=4 and d=5") {
  IndexTable t4(4, 8);
  SparsePolynomial b4 = master_backward(4);
  REQUIRE(b4.term_count() == 131);
  CHECK(b4.coefficient(mono(t4, {{5, 6, 7, 8}})) == 1);
  CHECK(b4.coefficient(mono(t4, {{1, 2, 3, 5}, {4, 6, 7, 8}})) == -1);
  CHECK(b4.coefficient(mono(t4, {{1, 2, 7, 8}, {1, 3, 4, 6}, {2, 3, 4, 5}})) == -2);
  CHECK(b4.coefficient(mono(t4, {{1, 2, 3, 8}, {1, 2, 4, 7}, {1, 3, 4, 6}, {2, 3, 4, 5}})) == -6);
  for (const auto& [exps, coeff] : b4.terms()) {
    std::int64_t m = std::abs(coeff);
    CHECK((m == 1 || m == 2 || m == 6));
  }

  IndexTable t5(5, 10);
  SparsePolynomial b5 = master_backward(5);
  REQUIRE(b5.term_count() == 1496);
  CHECK(b5.coefficient(mono(t5, {{6, 7, 8, 9, 10}})) == 1);
  CHECK(b5.coefficient(mono(t5, {{1, 2, 3, 4, 6}, {5, 7, 8, 9, 10}})) == -1);
  CHECK(b5.coefficient(mono(t5, {{1, 2, 8, 9, 10}, {1, 3, 4, 5, 7}, {2, 3, 4, 5, 6}})) == -2);
  CHECK(b5.coefficient(
            mono(t5, {{1, 2, 3, 9, 10}, {1, 2, 4, 5, 8}, {1, 3, 4, 5, 7}, {2, 3, 4, 5, 6}})) == 6);
  CHECK(b5.coefficient(mono(t5, {{1, 2, 3, 4, 9}, {1, 2, 3, 5, 8}, {1, 2, 4, 5, 7}, {1, 3, 4, 5, 6},
                                 {2, 3, 4, 5, 10}})) == 24);
}

TEST_CASE("replication: the level-2 coordinate {1,4,5} at (3,6)") {
  IndexTable master_table(2, 4), t(3, 6);
  SparsePolynomial rep = replicate(master_forward(2), master_table, t, mask_from_members({1, 4, 5}));
  SparsePolynomial expected(t.size());
  expected.add(mono(t, {{1, 4, 5}}), 1);
  expected.add(mono(t, {{1, 2, 5}, {1, 3, 4}}), 1);
  expected.add(mono(t, {{1, 2, 4}, {1, 3, 5}}), -1);
  CHECK(rep == expected);
}

TEST_CASE("replication to level-one targets is a signed single variable") {
  IndexTable master_table(1, 2), t(3, 6);
  SparsePolynomial rep = replicate(master_forward(1), master_table, t, mask_from_members({1, 3, 4}));
  SparsePolynomial expected(t.size());
  expected.add(mono(t, {{1, 3, 4}}), -1);
  CHECK(rep == expected);

  rep = replicate(master_forward(1), master_table, t, mask_from_members({1, 2, 4}));
  expected = SparsePolynomial(t.size());
  expected.add(mono(t, {{1, 2, 4}}), 1);
  CHECK(rep == expected);

  CHECK_THROWS_AS(replicate(master_forward(1), master_table, t, mask_from_members({1, 4, 5})),
                  InvalidInput);
}

TEST_CASE("symbolic round trip: forward master composed with backward replicates") {
  for (int d = 1; d <= 3; ++d) {
    IndexTable t(d, 2 * d);
    SparsePolynomial fwd = master_forward(d);
    std::vector<SparsePolynomial> storage;
    storage.reserve(t.size());
    std::vector<const SparsePolynomial*> replacement(t.size(), nullptr);
    std::vector<IndexTable> master_tables;
    for (int lvl = 1; lvl <= d; ++lvl) master_tables.emplace_back(lvl, 2 * lvl);
    for (int v = 1; v < t.size(); ++v) {
      int lvl = t.level_of(v);
      storage.push_back(replicate(master_backward(lvl), master_tables[lvl - 1], t, t.set_at(v)));
    }
    for (int v = 1; v < t.size(); ++v) replacement[v] = &storage[v - 1];

    SparsePolynomial composed = fwd.substituted(replacement);
    SparsePolynomial expected(t.size());
    SparsePolynomial::ExponentVector top(t.size(), 0);
    top[t.size() - 1] = 1;
    expected.add(top, 1);
    CHECK(composed == expected);
  }
}

TEST_CASE("numeric round trip of the master pair at d=4 and d=5") {
  std::mt19937_64 rng(11);
  for (int d = 4; d <= 5; ++d) {
    IndexTable t(d, 2 * d);
    SparsePolynomial fwd = master_forward(d);
    std::vector<IndexTable> master_tables;
    for (int lvl = 1; lvl <= d; ++lvl) master_tables.emplace_back(lvl, 2 * lvl);

    // substitute the backward-map values at a random state into the forward
    // master; the top state coordinate must come back
    Eigen::VectorXcd psi = complex_gaussian_vector(t.size(), rng);
    psi[0] = 1;
    Eigen::VectorXcd x(t.size());
    x[0] = 1;
    for (int v = 1; v < t.size(); ++v) {
      int lvl = t.level_of(v);
      x[v] = replicate(master_backward(lvl), master_tables[lvl - 1], t, t.set_at(v)).eval(psi);
    }
    Complex recovered = fwd.eval(x);
    Complex expected = psi[t.size() - 1];
    CHECK(std::abs(recovered - expected) < 1e-10 * (1 + std::abs(expected)));
  }
}
