#ifndef PQI_EVALUATE_HPP
#define PQI_EVALUATE_HPP

#include <iosfwd>
#include <vector>

#include "pqi/ingest.hpp"
#include "pqi/model.hpp"

namespace pqi {

/// Proteins indistinguishable by their identified-peptide sets, reported
/// together under one shared score.
struct ProteinGroup {
  int id = 0;
  std::vector<int> members;   // protein indices, sorted
  std::vector<int> peptides;  // the common peptide set, sorted
  double score = 0.0;
  bool mixed_scores = false;  // member scores disagreed; max was taken
};

/// Partition by identical peptide sets; group order follows the smallest
/// member accession. Member score disagreement (possible for degenerate
/// LP optima) resolves to the maximum with a warning flag.
std::vector<ProteinGroup> group_proteins(const TripartiteGraph& graph,
                                         const std::vector<double>& scores);

/// Per-protein TP/FP labels; every group member is labeled individually.
std::vector<bool> label(const TripartiteGraph& graph,
                        const ReferenceSet& reference);

struct CurvePoint {
  double threshold = 0.0;
  long true_positives = 0;   // cumulative T_t
  long false_positives = 0;  // cumulative F_t
  double fdr = 0.0;          // F_t / (F_t + T_t)
  double q = 0.0;            // suffix minimum of FDR
};

struct EvaluationCurve {
  std::vector<CurvePoint> points;
};

struct ScoredLabel {
  double score = 0.0;
  bool is_true_positive = false;
};

/// Sorts descending by score, batching tied scores into single threshold
/// steps, and computes FDR and q per step.
EvaluationCurve q_value_curve(const std::vector<ScoredLabel>& entries);

/// CSV rows `q_value,true_positives,score_threshold`, one per step.
void emit_curve(const EvaluationCurve& curve, std::ostream& out);

/// Largest TP count achievable at q-value <= q_limit.
long true_positives_at_q(const EvaluationCurve& curve, double q_limit);

}  // namespace pqi

#endif
