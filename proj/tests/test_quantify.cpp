#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "pqi/model.hpp"
#include "pqi/quantify.hpp"

using namespace pqi;

TEST_CASE("peptide_abundance sums PSM probabilities") {
  auto g = build_graph({{"s1", "YA", 0.9}, {"s2", "YA", 0.8}}, {{"YA", "p1"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  CHECK(b[0] == doctest::Approx(1.7));
  auto bu = peptide_abundance(g, Weighting::Unit);
  CHECK(bu[0] == 2.0);
}

TEST_CASE("peptide_abundance zero probability") {
  auto g = build_graph({{"s1", "YA", 0.0}}, {{"YA", "p1"}});
  CHECK(peptide_abundance(g, Weighting::Probability)[0] == 0.0);
}

TEST_CASE("multiple_counting credits shared peptides to every parent") {
  auto g = build_graph({{"s1", "YB", 0.8}}, {{"YB", "z2"}, {"YB", "z3"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto mp = multiple_counting(g, b, Weighting::Probability);
  CHECK(mp.protein_abundance[g.find_protein("z2")] == doctest::Approx(0.8));
  CHECK(mp.protein_abundance[g.find_protein("z3")] == doctest::Approx(0.8));
}

TEST_CASE("multiple_counting sums unique peptides") {
  auto g = build_graph({{"s1", "YA", 0.5}, {"s2", "YB", 0.9}},
                       {{"YA", "p1"}, {"YB", "p1"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto mp = multiple_counting(g, b, Weighting::Probability);
  CHECK(mp.protein_abundance[0] == doctest::Approx(1.4));
}

TEST_CASE("equal_division splits by parent count") {
  auto g = build_graph({{"s1", "YS", 0.9}},
                       {{"YS", "p1"}, {"YS", "p2"}, {"YS", "p3"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto ed = equal_division(g, b, Weighting::Probability);
  for (int k = 0; k < 3; ++k) {
    CHECK(ed.protein_abundance[k] == doctest::Approx(0.3));
  }
}

TEST_CASE("all-unique graphs make MP and ED identical") {
  auto g = build_graph({{"s1", "YA", 0.4}, {"s2", "YB", 0.6}},
                       {{"YA", "p1"}, {"YB", "p2"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto mp = multiple_counting(g, b, Weighting::Probability);
  auto ed = equal_division(g, b, Weighting::Probability);
  CHECK(mp.protein_abundance == ed.protein_abundance);
}

TEST_CASE("quantifier properties on random graphs") {
  testing::TestRng rng(11);
  testing::RandomGraphSpec spec;
  spec.max_proteins = 6;
  spec.max_peptides = 10;
  spec.b_choices = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = testing::random_instance(rng, spec);
    const auto& g = inst.graph;
    const auto& b = inst.b;
    auto mp = multiple_counting(g, b, Weighting::Probability);
    auto ed = equal_division(g, b, Weighting::Probability);

    double b_sum = std::accumulate(b.begin(), b.end(), 0.0);
    double qb_sum = 0.0;
    for (int j = 0; j < g.peptide_count(); ++j) {
      qb_sum += g.peptide_degree(j) * b[j];
    }
    double ed_sum = std::accumulate(ed.protein_abundance.begin(),
                                    ed.protein_abundance.end(), 0.0);
    double mp_sum = std::accumulate(mp.protein_abundance.begin(),
                                    mp.protein_abundance.end(), 0.0);
    // Conservation and inflation identities.
    CHECK(ed_sum == doctest::Approx(b_sum).epsilon(1e-9));
    CHECK(mp_sum == doctest::Approx(qb_sum).epsilon(1e-9));
    for (int k = 0; k < g.protein_count(); ++k) {
      CHECK(mp.protein_abundance[k] >= ed.protein_abundance[k] - 1e-12);
    }

    // Monotonicity: raising one peptide abundance never lowers any c_k.
    std::vector<double> b2 = b;
    b2[trial % b2.size()] += 0.5;
    auto mp2 = multiple_counting(g, b2, Weighting::Probability);
    auto ed2 = equal_division(g, b2, Weighting::Probability);
    for (int k = 0; k < g.protein_count(); ++k) {
      CHECK(mp2.protein_abundance[k] >= mp.protein_abundance[k] - 1e-12);
      CHECK(ed2.protein_abundance[k] >= ed.protein_abundance[k] - 1e-12);
    }
  }
}

TEST_CASE("unit weighting equals probability weighting at all-ones") {
  auto g = build_graph({{"s1", "YA", 1.0}, {"s2", "YA", 1.0}, {"s3", "YB", 1.0}},
                       {{"YA", "p1"}, {"YB", "p1"}, {"YB", "p2"}});
  auto bp = peptide_abundance(g, Weighting::Probability);
  auto bu = peptide_abundance(g, Weighting::Unit);
  CHECK(bp == bu);
  CHECK(multiple_counting(g, bp, Weighting::Probability).protein_abundance ==
        multiple_counting(g, bu, Weighting::Unit).protein_abundance);
}
