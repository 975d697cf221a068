#include "pqi/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "pqi/error.hpp"

namespace pqi {

std::vector<ProteinGroup> group_proteins(const TripartiteGraph& graph,
                                         const std::vector<double>& scores) {
  // Key each protein by its sorted peptide index set; protein_peptides is
  // already sorted, so the vector itself is the canonical key.
  std::map<std::vector<int>, ProteinGroup> by_peptides;
  for (int k = 0; k < graph.protein_count(); ++k) {
    auto& group = by_peptides[graph.protein_peptides[k]];
    if (group.members.empty()) {
      group.peptides = graph.protein_peptides[k];
      group.score = scores[k];
    } else if (scores[k] != group.score) {
      group.mixed_scores = true;
      group.score = std::max(group.score, scores[k]);
    }
    group.members.push_back(k);
  }

  std::vector<ProteinGroup> out;
  out.reserve(by_peptides.size());
  for (auto& [key, group] : by_peptides) out.push_back(std::move(group));
  // Order groups by smallest member accession (member indices are sorted
  // and proteins are sorted by accession).
  std::sort(out.begin(), out.end(),
            [](const ProteinGroup& a, const ProteinGroup& b) {
              return a.members.front() < b.members.front();
            });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].id = static_cast<int>(i);
  }
  return out;
}

std::vector<bool> label(const TripartiteGraph& graph,
                        const ReferenceSet& reference) {
  std::vector<bool> out(graph.protein_count());
  for (int k = 0; k < graph.protein_count(); ++k) {
    out[k] = reference.is_true_positive(graph.proteins[k].accession);
  }
  return out;
}

EvaluationCurve q_value_curve(const std::vector<ScoredLabel>& entries) {
  if (entries.empty()) {
    throw Error(Errc::InvalidConfig, "q-value curve needs at least one entry");
  }
  std::vector<ScoredLabel> sorted = entries;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredLabel& a, const ScoredLabel& b) {
                     return a.score > b.score;
                   });

  EvaluationCurve curve;
  long t_cum = 0, f_cum = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    double score = sorted[i].score;
    // All entries sharing one score enter at a single threshold step.
    while (i < sorted.size() && sorted[i].score == score) {
      if (sorted[i].is_true_positive) ++t_cum; else ++f_cum;
      ++i;
    }
    CurvePoint p;
    p.threshold = score;
    p.true_positives = t_cum;
    p.false_positives = f_cum;
    p.fdr = static_cast<double>(f_cum) / static_cast<double>(f_cum + t_cum);
    curve.points.push_back(p);
  }
  // q_t = min FDR over this and all less stringent thresholds.
  double suffix_min = curve.points.back().fdr;
  for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
    suffix_min = std::min(suffix_min, it->fdr);
    it->q = suffix_min;
  }
  return curve;
}

void emit_curve(const EvaluationCurve& curve, std::ostream& out) {
  char buf[96];
  out << "q_value,true_positives,score_threshold\n";
  for (const CurvePoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.6f,%ld,%.6f", p.q, p.true_positives,
                  p.threshold);
    out << buf << "\n";
  }
}

long true_positives_at_q(const EvaluationCurve& curve, double q_limit) {
  long best = 0;
  for (const CurvePoint& p : curve.points) {
    if (p.q <= q_limit + 1e-12) best = std::max(best, p.true_positives);
  }
  return best;
}

}  // namespace pqi
