#include "pqi/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pqi/error.hpp"

namespace pqi {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::OrphanPeptide: return "OrphanPeptide";
    case Errc::DuplicateSpectrum: return "DuplicateSpectrum";
    case Errc::InvalidProbability: return "InvalidProbability";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::MalformedFasta: return "MalformedFasta";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::ZeroMaximum: return "ZeroMaximum";
    case Errc::Degenerate: return "Degenerate";
    case Errc::IterationLimit: return "IterationLimit";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::MismatchedReference: return "MismatchedReference";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

const char* method_name(Method m) {
  switch (m) {
    case Method::MultipleCounting: return "multiple_counting";
    case Method::EqualDivision: return "equal_division";
    case Method::LinearProgram: return "linear_program";
  }
  return "unknown";
}

const char* weighting_name(Weighting w) {
  return w == Weighting::Probability ? "probability" : "unit";
}

std::size_t TripartiteGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& parents : peptide_proteins) total += parents.size();
  return total;
}

std::vector<std::pair<int, int>> TripartiteGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count());
  for (int j = 0; j < peptide_count(); ++j) {
    for (int k : peptide_proteins[j]) out.emplace_back(j, k);
  }
  return out;
}

int TripartiteGraph::find_peptide(const std::string& sequence) const {
  auto it = std::lower_bound(peptides.begin(), peptides.end(), sequence);
  if (it == peptides.end() || *it != sequence) return -1;
  return static_cast<int>(it - peptides.begin());
}

int TripartiteGraph::find_protein(const std::string& accession) const {
  auto it = std::lower_bound(
      proteins.begin(), proteins.end(), accession,
      [](const ProteinId& p, const std::string& a) { return p.accession < a; });
  if (it == proteins.end() || it->accession != accession) return -1;
  return static_cast<int>(it - proteins.begin());
}

TripartiteGraph build_graph(
    const std::vector<Psm>& psms,
    const std::vector<std::pair<std::string, std::string>>& memberships,
    BuildSummary* summary) {
  BuildSummary local;
  local.input_psms = static_cast<int>(psms.size());
  local.input_membership_pairs = static_cast<int>(memberships.size());

  std::unordered_set<std::string> seen_spectra;
  seen_spectra.reserve(psms.size() * 2);
  for (const Psm& p : psms) {
    if (!(p.probability >= 0.0 && p.probability <= 1.0)) {
      throw Error(Errc::InvalidProbability,
                  "PSM probability out of [0,1] for spectrum '" + p.spectrum +
                      "'");
    }
    if (!seen_spectra.insert(p.spectrum).second) {
      throw Error(Errc::DuplicateSpectrum,
                  "spectrum '" + p.spectrum + "' matched more than once");
    }
  }

  // Membership adjacency keyed by peptide sequence, deduplicated.
  std::map<std::string, std::set<std::string>> pep_to_prot;
  for (const auto& [pep, prot] : memberships) {
    pep_to_prot[pep].insert(prot);
  }

  // Only peptides with PSM evidence become graph nodes.
  std::set<std::string> identified;
  for (const Psm& p : psms) identified.insert(p.peptide);

  for (const std::string& pep : identified) {
    auto it = pep_to_prot.find(pep);
    if (it == pep_to_prot.end() || it->second.empty()) {
      throw Error(Errc::OrphanPeptide,
                  "peptide '" + pep + "' has no parent protein");
    }
  }

  TripartiteGraph g;
  g.peptides.assign(identified.begin(), identified.end());

  std::set<std::string> surviving_proteins;
  for (const std::string& pep : g.peptides) {
    for (const std::string& prot : pep_to_prot[pep]) {
      surviving_proteins.insert(prot);
    }
  }
  for (const auto& [pep, prots] : pep_to_prot) {
    if (identified.count(pep)) continue;
    for (const std::string& prot : prots) {
      if (!surviving_proteins.count(prot)) {
        // Candidate with no identified peptide; dropped, not an error.
        if (std::find(local.dropped_accessions.begin(),
                      local.dropped_accessions.end(),
                      prot) == local.dropped_accessions.end()) {
          local.dropped_accessions.push_back(prot);
        }
      }
    }
  }
  std::sort(local.dropped_accessions.begin(), local.dropped_accessions.end());
  local.dropped_proteins = static_cast<int>(local.dropped_accessions.size());

  g.proteins.reserve(surviving_proteins.size());
  std::unordered_map<std::string, int> protein_index;
  for (const std::string& acc : surviving_proteins) {
    protein_index.emplace(acc, static_cast<int>(g.proteins.size()));
    g.proteins.push_back(ProteinId{acc, false});
  }

  g.peptide_proteins.resize(g.peptides.size());
  g.protein_peptides.resize(g.proteins.size());
  for (int j = 0; j < g.peptide_count(); ++j) {
    for (const std::string& prot : pep_to_prot[g.peptides[j]]) {
      int k = protein_index.at(prot);
      g.peptide_proteins[j].push_back(k);
      g.protein_peptides[k].push_back(j);
    }
    std::sort(g.peptide_proteins[j].begin(), g.peptide_proteins[j].end());
  }
  for (auto& peps : g.protein_peptides) std::sort(peps.begin(), peps.end());

  g.psms = psms;
  std::sort(g.psms.begin(), g.psms.end(),
            [](const Psm& a, const Psm& b) { return a.spectrum < b.spectrum; });
  std::unordered_map<std::string, int> peptide_index;
  for (int j = 0; j < g.peptide_count(); ++j) peptide_index[g.peptides[j]] = j;
  g.psm_peptide.reserve(g.psms.size());
  for (const Psm& p : g.psms) g.psm_peptide.push_back(peptide_index.at(p.peptide));

  if (summary) *summary = std::move(local);
  return g;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

}  // namespace

std::vector<TripartiteGraph> connected_components(const TripartiteGraph& graph) {
  const int m = graph.peptide_count();
  const int n = graph.protein_count();
  if (n == 0) return {};

  // Nodes 0..m-1 are peptides, m..m+n-1 are proteins.
  UnionFind uf(m + n);
  for (int j = 0; j < m; ++j) {
    for (int k : graph.peptide_proteins[j]) uf.unite(j, m + k);
  }

  // Components keyed by smallest protein index, which is also the
  // smallest accession since proteins are sorted.
  std::map<int, int> root_to_comp;  // keyed by min protein index per root
  std::unordered_map<int, int> root_min_protein;
  for (int k = 0; k < n; ++k) {
    int r = uf.find(m + k);
    auto it = root_min_protein.find(r);
    if (it == root_min_protein.end()) root_min_protein[r] = k;
  }
  for (const auto& [root, min_k] : root_min_protein) {
    root_to_comp[min_k] = root;
  }

  std::vector<TripartiteGraph> out;
  out.reserve(root_to_comp.size());
  std::unordered_map<int, int> root_to_index;
  for (const auto& [min_k, root] : root_to_comp) {
    root_to_index[root] = static_cast<int>(out.size());
    out.emplace_back();
  }

  std::vector<std::vector<Psm>> comp_psms(out.size());
  std::vector<std::vector<std::pair<std::string, std::string>>> comp_edges(
      out.size());
  for (int j = 0; j < m; ++j) {
    int c = root_to_index.at(uf.find(j));
    for (int k : graph.peptide_proteins[j]) {
      comp_edges[c].emplace_back(graph.peptides[j],
                                 graph.proteins[k].accession);
    }
  }
  for (std::size_t i = 0; i < graph.psms.size(); ++i) {
    int c = root_to_index.at(uf.find(graph.psm_peptide[i]));
    comp_psms[c].push_back(graph.psms[i]);
  }

  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = build_graph(comp_psms[c], comp_edges[c]);
  }
  return out;
}

}  // namespace pqi
