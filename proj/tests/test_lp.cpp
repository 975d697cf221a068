#include <numeric>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pqi/error.hpp"
#include "pqi/lp.hpp"
#include "pqi/quantify.hpp"

using namespace pqi;

namespace {

TripartiteGraph shared_pair_graph(double shared_b, double unique_b) {
  // z2 and z3 share YS; z3 also has unique YU. Probabilities encode the
  // requested abundances through single PSMs when possible.
  std::vector<Psm> psms;
  std::vector<std::pair<std::string, std::string>> mem{
      {"YS", "z2"}, {"YS", "z3"}, {"YU", "z3"}};
  int s = 0;
  auto add = [&](const std::string& pep, double total) {
    while (total > 0.0) {
      double p = std::min(total, 1.0);
      psms.push_back({"s" + std::to_string(s++), pep, p});
      total -= p;
    }
  };
  add("YS", shared_b);
  add("YU", unique_b);
  return build_graph(psms, mem);
}

double row_sum_violation(const TripartiteGraph& g,
                         const std::vector<double>& b,
                         const DistributionMatrix& d) {
  std::vector<double> sums(g.peptide_count(), 0.0);
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    sums[d.edges[e].first] += d.value[e];
  }
  double worst = 0.0;
  for (int j = 0; j < g.peptide_count(); ++j) {
    worst = std::max(worst, std::abs(sums[j] - b[j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("build_lp minimal instance") {
  auto g = build_graph({{"s1", "YA", 1.0}}, {{"YA", "p1"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto inst = build_lp(g, b);
  CHECK(inst.edge_vars + inst.protein_vars == 2);  // one d, one t
  CHECK(inst.A.rows == 2);                         // one coupling, one equality
}

TEST_CASE("build_lp variable count follows the edge structure") {
  auto g = build_graph({{"s1", "YA", 1.0},
                        {"s2", "YB", 1.0},
                        {"s3", "YC", 1.0},
                        {"s4", "YD", 1.0},
                        {"s5", "YE", 1.0}},
                       {{"YA", "z1"},
                        {"YB", "z2"},
                        {"YB", "z3"},
                        {"YC", "z3"},
                        {"YD", "z1"},
                        {"YD", "z2"},
                        {"YE", "z1"},
                        {"YE", "z3"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto inst = build_lp(g, b);
  CHECK(inst.edge_vars == static_cast<int>(g.edge_count()));
  CHECK(inst.protein_vars == 3);
  CHECK(inst.A.rows == inst.edge_vars + g.peptide_count());
}

TEST_CASE("solve_lp assigns shared peptide to the supported protein") {
  auto g = shared_pair_graph(1.0, 2.0);
  auto b = peptide_abundance(g, Weighting::Probability);
  auto sol = solve_lp(build_lp(g, b));
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
  auto c = recover_abundance(sol, g, b, Weighting::Probability);
  CHECK(c.protein_abundance[g.find_protein("z2")] == doctest::Approx(0.0));
  CHECK(c.protein_abundance[g.find_protein("z3")] == doctest::Approx(3.0));
}

TEST_CASE("solve_lp single column t equals max b") {
  auto g = build_graph(
      {{"s1", "YA", 1.0}, {"s2", "YB", 1.0}, {"s3", "YB", 1.0}},
      {{"YA", "p1"}, {"YB", "p1"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto sol = solve_lp(build_lp(g, b));
  CHECK(sol.objective == doctest::Approx(2.0));
  auto c = recover_abundance(sol, g, b, Weighting::Probability);
  CHECK(c.protein_abundance[0] == doctest::Approx(3.0));
}

TEST_CASE("solve_lp degenerate optimum keeps both supported proteins") {
  // z1:{YA unique, YS shared}, z2:{YS shared, YC unique}, all b = 1.
  auto g = build_graph(
      {{"s1", "YA", 1.0}, {"s2", "YS", 1.0}, {"s3", "YC", 1.0}},
      {{"YA", "p1"}, {"YS", "p1"}, {"YS", "p2"}, {"YC", "p2"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto sol = solve_lp(build_lp(g, b));
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
  auto c = recover_abundance(sol, g, b, Weighting::Probability);
  CHECK(c.protein_abundance[0] > 0.0);
  CHECK(c.protein_abundance[1] > 0.0);
}

TEST_CASE("zero-abundance peptides force zero rows") {
  auto g = build_graph({{"s1", "YA", 0.0}, {"s2", "YB", 1.0}},
                       {{"YA", "p1"}, {"YA", "p2"}, {"YB", "p1"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto sol = solve_lp(build_lp(g, b));
  for (std::size_t e = 0; e < sol.distribution.edges.size(); ++e) {
    if (sol.distribution.edges[e].first == g.find_peptide("YA")) {
      CHECK(sol.distribution.value[e] == 0.0);
    }
  }
  auto c = recover_abundance(sol, g, b, Weighting::Probability);
  CHECK(c.protein_abundance[g.find_protein("p2")] == 0.0);
}

TEST_CASE("all-zero graph solves to zero") {
  auto g = build_graph({{"s1", "YA", 0.0}}, {{"YA", "p1"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto sol = solve_lp(build_lp(g, b));
  CHECK(sol.objective == 0.0);
}

TEST_CASE("all-unique graph reproduces equal division") {
  auto g = build_graph({{"s1", "YA", 0.7}, {"s2", "YB", 0.4}},
                       {{"YA", "p1"}, {"YB", "p2"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto sol = solve_lp(build_lp(g, b));
  auto lp_c = recover_abundance(sol, g, b, Weighting::Probability);
  auto ed_c = equal_division(g, b, Weighting::Probability);
  for (int k = 0; k < g.protein_count(); ++k) {
    CHECK(lp_c.protein_abundance[k] ==
          doctest::Approx(ed_c.protein_abundance[k]).epsilon(1e-9));
  }
}

TEST_CASE("simplex objective matches the vertex-enumeration oracle") {
  testing::TestRng rng(23);
  testing::RandomGraphSpec spec;
  for (int trial = 0; trial < 150; ++trial) {
    auto inst = testing::random_instance(rng, spec);
    auto sol = solve_lp(build_lp(inst.graph, inst.b));
    REQUIRE(sol.status == LpStatus::Optimal);
    double oracle = testing::lp_objective_oracle(inst.graph, inst.b);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(row_sum_violation(inst.graph, inst.b, sol.distribution) < 1e-8);
  }
}

TEST_CASE("zero-shrinkage over the parameterized shared family") {
  for (double shared = 0.25; shared <= 2.0; shared += 0.25) {
    for (double extra = 0.0; extra <= 1.0; extra += 0.5) {
      double unique = shared + extra;  // unique evidence >= shared
      auto g = shared_pair_graph(shared, unique);
      auto b = peptide_abundance(g, Weighting::Probability);
      auto sol = solve_lp(build_lp(g, b));
      auto c = recover_abundance(sol, g, b, Weighting::Probability);
      CHECK(c.protein_abundance[g.find_protein("z2")] == 0.0);
    }
  }
}

TEST_CASE("scale equivariance with unchanged basis") {
  testing::TestRng rng(31);
  testing::RandomGraphSpec spec;
  spec.b_choices = {0.5, 1.0, 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = testing::random_instance(rng, spec);
    auto sol1 = solve_lp(build_lp(inst.graph, inst.b));
    std::vector<double> b2 = inst.b;
    for (double& v : b2) v *= 2.0;  // exact in binary floating point
    auto sol2 = solve_lp(build_lp(inst.graph, b2));
    CHECK(sol2.objective == doctest::Approx(2.0 * sol1.objective).epsilon(1e-12));
    REQUIRE(sol1.distribution.value.size() == sol2.distribution.value.size());
    for (std::size_t e = 0; e < sol1.distribution.value.size(); ++e) {
      CHECK(sol2.distribution.value[e] == 2.0 * sol1.distribution.value[e]);
    }
  }
}

TEST_CASE("determinism: bit-identical distribution across runs") {
  testing::TestRng rng(47);
  testing::RandomGraphSpec spec;
  auto inst = testing::random_instance(rng, spec);
  auto a = solve_lp(build_lp(inst.graph, inst.b));
  auto b = solve_lp(build_lp(inst.graph, inst.b));
  CHECK(a.distribution.value == b.distribution.value);
  CHECK(a.objective == b.objective);
}

TEST_CASE("solve_per_component equals whole-graph solve") {
  testing::TestRng rng(53);
  testing::RandomGraphSpec spec;
  spec.max_proteins = 10;
  spec.max_peptides = 16;
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = testing::random_instance(rng, spec);
    auto whole = solve_lp(build_lp(inst.graph, inst.b));
    LpOptions opts;
    opts.workers = 1;
    auto merged = solve_per_component(inst.graph, inst.b, opts);
    CHECK(merged.objective == doctest::Approx(whole.objective).epsilon(1e-8));
    CHECK(row_sum_violation(inst.graph, inst.b, merged.distribution) < 1e-8);
  }
}

TEST_CASE("two disjoint copies double the objective") {
  auto g = build_graph(
      {{"s1", "YS", 1.0}, {"s2", "YU", 1.0}, {"s3", "YU", 1.0},
       {"t1", "ZS", 1.0}, {"t2", "ZU", 1.0}, {"t3", "ZU", 1.0}},
      {{"YS", "a2"}, {"YS", "a3"}, {"YU", "a3"},
       {"ZS", "b2"}, {"ZS", "b3"}, {"ZU", "b3"}});
  auto b = peptide_abundance(g, Weighting::Probability);
  auto merged = solve_per_component(g, b);
  CHECK(merged.objective == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("iteration cap surfaces as an error in per-component solves") {
  auto g = shared_pair_graph(1.0, 2.0);
  auto b = peptide_abundance(g, Weighting::Probability);
  LpOptions opts;
  opts.iteration_cap = 1;
  auto sol = solve_lp(build_lp(g, b), opts);
  CHECK(sol.status == LpStatus::IterationLimit);
  CHECK_THROWS_AS(solve_per_component(g, b, opts), Error);
}

TEST_CASE("lp format dump is deterministic and well formed") {
  auto g = shared_pair_graph(1.0, 2.0);
  auto b = peptide_abundance(g, Weighting::Probability);
  auto inst = build_lp(g, b);
  std::ostringstream a, c;
  write_lp_format(inst, g, a);
  write_lp_format(inst, g, c);
  CHECK(a.str() == c.str());
  CHECK(a.str().find("Minimize") != std::string::npos);
  CHECK(a.str().find("Subject To") != std::string::npos);
  CHECK(a.str().find("End") != std::string::npos);
}
