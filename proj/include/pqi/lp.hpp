#ifndef PQI_LP_HPP
#define PQI_LP_HPP

#include <iosfwd>
#include <utility>
#include <vector>

#include "pqi/model.hpp"
#include "pqi/simplex.hpp"

namespace pqi {

/// Sparse apportionment d_jk of peptide abundance to parent proteins,
/// stored parallel to the graph's canonical membership-edge order.
struct DistributionMatrix {
  std::vector<std::pair<int, int>> edges;  // (peptide index, protein index)
  std::vector<double> value;               // d_jk >= 0

  double at(int peptide, int protein) const;
};

enum class LpStatus { Optimal, Infeasible, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  DistributionMatrix distribution;
  std::vector<double> column_max;  // t_k per protein, graph order
  double objective = 0.0;
  long iterations = 0;
};

/// Built LP: variables are d_jk per membership edge followed by t_k per
/// protein; rows are the d_jk <= t_k couplings (with slack columns) and
/// the per-peptide equality rows.
struct LpInstance {
  int edge_vars = 0;
  int protein_vars = 0;
  std::vector<std::pair<int, int>> edges;
  SparseMatrix A;
  std::vector<double> rhs;
  std::vector<double> cost;
  std::vector<int> initial_basis;  // slack seeding for the simplex
};

struct LpOptions {
  long iteration_cap = 1000000;
  int workers = 0;           // 0 = hardware concurrency
  double clamp_tol = 1e-10;  // d values below this become exact 0
};

LpInstance build_lp(const TripartiteGraph& graph, const std::vector<double>& b);

LpSolution solve_lp(const LpInstance& instance, const LpOptions& opts = {});

/// c_k = sum_j d_jk over the protein's incident edges.
AbundanceVector recover_abundance(const LpSolution& solution,
                                  const TripartiteGraph& graph,
                                  const std::vector<double>& b, Weighting mode);

/// Solves each connected component independently (optionally in
/// parallel) and merges the solutions in deterministic component order.
LpSolution solve_per_component(const TripartiteGraph& graph,
                               const std::vector<double>& b,
                               const LpOptions& opts = {});

/// CPLEX LP text format dump for cross-checking with external solvers.
void write_lp_format(const LpInstance& instance, const TripartiteGraph& graph,
                     std::ostream& out);

}  // namespace pqi

#endif
