#include "pqi/lp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "pqi/error.hpp"

namespace pqi {

double DistributionMatrix::at(int peptide, int protein) const {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].first == peptide && edges[e].second == protein) {
      return value[e];
    }
  }
  return 0.0;
}

LpInstance build_lp(const TripartiteGraph& graph,
                    const std::vector<double>& b) {
  LpInstance inst;
  inst.edges = graph.edges();
  inst.edge_vars = static_cast<int>(inst.edges.size());
  inst.protein_vars = graph.protein_count();
  const int E = inst.edge_vars;
  const int n = inst.protein_vars;
  const int m = graph.peptide_count();

  // Rows: E coupling rows (d_e - t_k + s_e = 0) then m equality rows
  // (sum_k d_jk = b_j). Columns: d variables, t variables, slacks.
  inst.A.rows = E + m;
  inst.A.col_start.push_back(0);
  for (int e = 0; e < E; ++e) {
    inst.A.add_column({{e, 1.0}, {E + inst.edges[e].first, 1.0}});
  }
  std::vector<std::vector<int>> protein_edges(n);
  for (int e = 0; e < E; ++e) protein_edges[inst.edges[e].second].push_back(e);
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<int, double>> col;
    col.reserve(protein_edges[k].size());
    for (int e : protein_edges[k]) col.emplace_back(e, -1.0);
    inst.A.add_column(col);
  }
  for (int e = 0; e < E; ++e) {
    inst.A.add_column({{e, 1.0}});
  }

  inst.rhs.assign(E + m, 0.0);
  for (int j = 0; j < m; ++j) inst.rhs[E + j] = b[j];

  inst.cost.assign(inst.A.cols, 0.0);
  for (int k = 0; k < n; ++k) inst.cost[E + k] = 1.0;

  inst.initial_basis.assign(E + m, -1);
  for (int e = 0; e < E; ++e) inst.initial_basis[e] = E + n + e;
  return inst;
}

LpSolution solve_lp(const LpInstance& instance, const LpOptions& opts) {
  SimplexOptions sopts;
  sopts.iteration_cap = opts.iteration_cap;
  SimplexResult sr = simplex_solve(instance.A, instance.rhs, instance.cost,
                                   instance.initial_basis, sopts);

  LpSolution sol;
  sol.iterations = sr.iterations;
  switch (sr.status) {
    case SimplexStatus::Optimal: sol.status = LpStatus::Optimal; break;
    case SimplexStatus::Infeasible: sol.status = LpStatus::Infeasible; break;
    case SimplexStatus::IterationLimit:
      sol.status = LpStatus::IterationLimit;
      break;
  }
  if (sol.status != LpStatus::Optimal) return sol;

  const int E = instance.edge_vars;
  sol.distribution.edges = instance.edges;
  sol.distribution.value.resize(E);
  for (int e = 0; e < E; ++e) {
    double v = sr.x[e];
    sol.distribution.value[e] = v < opts.clamp_tol ? 0.0 : v;
  }
  // t_k reported as the realized column maximum so the invariant
  // t_k = max_j d_jk holds exactly after clamping.
  sol.column_max.assign(instance.protein_vars, 0.0);
  for (int e = 0; e < E; ++e) {
    int k = instance.edges[e].second;
    sol.column_max[k] = std::max(sol.column_max[k], sol.distribution.value[e]);
  }
  sol.objective = 0.0;
  for (double t : sol.column_max) sol.objective += t;
  return sol;
}

AbundanceVector recover_abundance(const LpSolution& solution,
                                  const TripartiteGraph& graph,
                                  const std::vector<double>& b,
                                  Weighting mode) {
  AbundanceVector out;
  out.method = Method::LinearProgram;
  out.weighting = mode;
  out.peptide_abundance = b;
  out.protein_abundance.assign(graph.protein_count(), 0.0);
  for (std::size_t e = 0; e < solution.distribution.edges.size(); ++e) {
    out.protein_abundance[solution.distribution.edges[e].second] +=
        solution.distribution.value[e];
  }
  return out;
}

LpSolution solve_per_component(const TripartiteGraph& graph,
                               const std::vector<double>& b,
                               const LpOptions& opts) {
  std::vector<TripartiteGraph> components = connected_components(graph);
  const std::size_t count = components.size();
  std::vector<LpSolution> solutions(count);

  auto solve_one = [&](std::size_t c) {
    const TripartiteGraph& comp = components[c];
    std::vector<double> bc(comp.peptide_count());
    for (int j = 0; j < comp.peptide_count(); ++j) {
      bc[j] = b[graph.find_peptide(comp.peptides[j])];
    }
    solutions[c] = solve_lp(build_lp(comp, bc), opts);
  };

  unsigned workers = opts.workers > 0
                         ? static_cast<unsigned>(opts.workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1 || count <= 1) {
    for (std::size_t c = 0; c < count; ++c) solve_one(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned spawn = std::min<std::size_t>(workers, count);
    for (unsigned t = 0; t < spawn; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < count;
             c = next.fetch_add(1)) {
          solve_one(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t c = 0; c < count; ++c) {
    if (solutions[c].status != LpStatus::Optimal) {
      throw Error(Errc::IterationLimit,
                  "LP solve failed in component " + std::to_string(c) +
                      " (smallest protein '" +
                      components[c].proteins.front().accession + "')");
    }
  }

  // Merge in deterministic component order onto the whole-graph edge list.
  LpSolution merged;
  merged.distribution.edges = graph.edges();
  merged.distribution.value.assign(merged.distribution.edges.size(), 0.0);
  merged.column_max.assign(graph.protein_count(), 0.0);

  std::unordered_map<long long, std::size_t> edge_slot;
  edge_slot.reserve(merged.distribution.edges.size() * 2);
  auto key = [&](int j, int k) {
    return static_cast<long long>(j) * graph.protein_count() + k;
  };
  for (std::size_t e = 0; e < merged.distribution.edges.size(); ++e) {
    edge_slot[key(merged.distribution.edges[e].first,
                  merged.distribution.edges[e].second)] = e;
  }

  for (std::size_t c = 0; c < count; ++c) {
    const TripartiteGraph& comp = components[c];
    const LpSolution& sol = solutions[c];
    std::vector<int> pep_map(comp.peptide_count());
    std::vector<int> prot_map(comp.protein_count());
    for (int j = 0; j < comp.peptide_count(); ++j) {
      pep_map[j] = graph.find_peptide(comp.peptides[j]);
    }
    for (int k = 0; k < comp.protein_count(); ++k) {
      prot_map[k] = graph.find_protein(comp.proteins[k].accession);
    }
    for (std::size_t e = 0; e < sol.distribution.edges.size(); ++e) {
      int j = pep_map[sol.distribution.edges[e].first];
      int k = prot_map[sol.distribution.edges[e].second];
      merged.distribution.value[edge_slot.at(key(j, k))] =
          sol.distribution.value[e];
    }
    for (int k = 0; k < comp.protein_count(); ++k) {
      merged.column_max[prot_map[k]] = sol.column_max[k];
    }
    merged.iterations += sol.iterations;
  }
  merged.objective = 0.0;
  for (double t : merged.column_max) merged.objective += t;
  merged.status = LpStatus::Optimal;
  return merged;
}

void write_lp_format(const LpInstance& instance, const TripartiteGraph& graph,
                     std::ostream& out) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
  };
  out << "\\ peptide-to-protein abundance distribution LP\n";
  out << "Minimize\n obj:";
  for (int k = 0; k < instance.protein_vars; ++k) {
    out << (k == 0 ? " " : " + ") << "t_" << graph.proteins[k].accession;
  }
  out << "\nSubject To\n";
  for (int e = 0; e < instance.edge_vars; ++e) {
    auto [j, k] = instance.edges[e];
    out << " cap_" << e << ": d_" << j << "_" << k << " - t_"
        << graph.proteins[k].accession << " <= 0\n";
  }
  for (int j = 0; j < graph.peptide_count(); ++j) {
    out << " pep_" << j << ":";
    bool first = true;
    for (int e = 0; e < instance.edge_vars; ++e) {
      if (instance.edges[e].first != j) continue;
      out << (first ? " " : " + ") << "d_" << j << "_"
          << instance.edges[e].second;
      first = false;
    }
    out << " = " << num(instance.rhs[instance.edge_vars + j]) << "\n";
  }
  out << "End\n";
}

}  // namespace pqi
