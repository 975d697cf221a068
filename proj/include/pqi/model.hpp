#ifndef PQI_MODEL_HPP
#define PQI_MODEL_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pqi {

/// One peptide-spectrum match: spectrum identifier, matched peptide
/// sequence and the match probability reported by the upstream search
/// pipeline.
struct Psm {
  std::string spectrum;
  std::string peptide;
  double probability = 0.0;
};

struct ProteinId {
  std::string accession;
  bool is_decoy = false;
};

/// Immutable tripartite identification graph: spectra attach to peptides
/// through PSMs, peptides attach to candidate proteins through membership
/// edges. Peptides and proteins are stored sorted by identifier and
/// referenced by index everywhere downstream.
struct TripartiteGraph {
  std::vector<std::string> peptides;               // sorted, unique
  std::vector<ProteinId> proteins;                 // sorted by accession
  std::vector<Psm> psms;                           // sorted by spectrum id
  std::vector<int> psm_peptide;                    // psms[i] -> peptide index
  std::vector<std::vector<int>> peptide_proteins;  // E2, sorted per peptide
  std::vector<std::vector<int>> protein_peptides;  // transpose of E2

  int spectrum_count() const { return static_cast<int>(psms.size()); }
  int peptide_count() const { return static_cast<int>(peptides.size()); }
  int protein_count() const { return static_cast<int>(proteins.size()); }

  /// Number of parent proteins of peptide j (q_j).
  int peptide_degree(int j) const {
    return static_cast<int>(peptide_proteins[j].size());
  }

  std::size_t edge_count() const;

  /// Membership edges (peptide index, protein index) in the canonical
  /// order used by the LP and the distribution matrix.
  std::vector<std::pair<int, int>> edges() const;

  int find_peptide(const std::string& sequence) const;
  int find_protein(const std::string& accession) const;
};

struct BuildSummary {
  int input_psms = 0;
  int input_membership_pairs = 0;
  int dropped_proteins = 0;  // listed in memberships, no surviving peptide
  std::vector<std::string> dropped_accessions;
};

/// Assembles and validates a TripartiteGraph from raw PSMs and
/// peptide-protein membership pairs. Proteins whose peptides all lack
/// PSMs are dropped and reported through the summary.
TripartiteGraph build_graph(
    const std::vector<Psm>& psms,
    const std::vector<std::pair<std::string, std::string>>& memberships,
    BuildSummary* summary = nullptr);

/// Splits the graph into maximal components connected through shared
/// membership edges; PSMs follow their peptides. Components are ordered
/// by their smallest protein accession.
std::vector<TripartiteGraph> connected_components(const TripartiteGraph& graph);

enum class Method { MultipleCounting, EqualDivision, LinearProgram };
enum class Weighting { Probability, Unit };

const char* method_name(Method m);
const char* weighting_name(Weighting w);

/// Per-peptide abundances b_j and per-protein abundances c_k, indexed by
/// the owning graph's peptide/protein order.
struct AbundanceVector {
  Method method = Method::EqualDivision;
  Weighting weighting = Weighting::Probability;
  std::vector<double> peptide_abundance;  // b_j
  std::vector<double> protein_abundance;  // c_k
};

}  // namespace pqi

#endif
