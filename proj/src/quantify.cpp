#include "pqi/quantify.hpp"

#include <cassert>

namespace pqi {

std::vector<double> peptide_abundance(const TripartiteGraph& graph,
                                      Weighting mode) {
  std::vector<double> b(graph.peptide_count(), 0.0);
  // PSMs are sorted by spectrum id; summation order is therefore fixed.
  for (std::size_t i = 0; i < graph.psms.size(); ++i) {
    int j = graph.psm_peptide[i];
    b[j] += mode == Weighting::Probability ? graph.psms[i].probability : 1.0;
  }
  return b;
}

AbundanceVector multiple_counting(const TripartiteGraph& graph,
                                  const std::vector<double>& b,
                                  Weighting mode) {
  assert(static_cast<int>(b.size()) == graph.peptide_count());
  AbundanceVector out;
  out.method = Method::MultipleCounting;
  out.weighting = mode;
  out.peptide_abundance = b;
  out.protein_abundance.assign(graph.protein_count(), 0.0);
  for (int k = 0; k < graph.protein_count(); ++k) {
    double c = 0.0;
    for (int j : graph.protein_peptides[k]) c += b[j];
    out.protein_abundance[k] = c;
  }
  return out;
}

AbundanceVector equal_division(const TripartiteGraph& graph,
                               const std::vector<double>& b, Weighting mode) {
  assert(static_cast<int>(b.size()) == graph.peptide_count());
  AbundanceVector out;
  out.method = Method::EqualDivision;
  out.weighting = mode;
  out.peptide_abundance = b;
  out.protein_abundance.assign(graph.protein_count(), 0.0);
  for (int k = 0; k < graph.protein_count(); ++k) {
    double c = 0.0;
    for (int j : graph.protein_peptides[k]) {
      c += b[j] / static_cast<double>(graph.peptide_degree(j));
    }
    out.protein_abundance[k] = c;
  }
  return out;
}

}  // namespace pqi
