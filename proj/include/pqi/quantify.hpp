#ifndef PQI_QUANTIFY_HPP
#define PQI_QUANTIFY_HPP

#include <vector>

#include "pqi/model.hpp"

namespace pqi {

/// Peptide abundance b_j: sum of PSM probabilities in Probability mode,
/// plain spectral count in Unit mode.
std::vector<double> peptide_abundance(const TripartiteGraph& graph,
                                      Weighting mode);

/// Multiple counting: every parent protein receives a shared peptide's
/// full abundance, c_k = sum over member peptides of b_j.
AbundanceVector multiple_counting(const TripartiteGraph& graph,
                                  const std::vector<double>& b,
                                  Weighting mode);

/// Equal division: a shared peptide's abundance splits evenly among its
/// q_j parents, c_k = sum of b_j / q_j.
AbundanceVector equal_division(const TripartiteGraph& graph,
                               const std::vector<double>& b, Weighting mode);

}  // namespace pqi

#endif
