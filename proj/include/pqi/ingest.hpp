#ifndef PQI_INGEST_HPP
#define PQI_INGEST_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pqi/model.hpp"

namespace pqi {

/// Ground-truth specification for TP/FP labeling: either an explicit
/// accession list or a decoy accession prefix.
struct ReferenceSet {
  enum class Mode { ReferenceList, DecoyPrefix };
  Mode mode = Mode::DecoyPrefix;
  std::set<std::string> accessions;  // ReferenceList mode
  std::string prefix;                // DecoyPrefix mode

  bool is_true_positive(const std::string& accession) const;
  std::string describe() const;
};

/// Reads the PSM TSV dialect: header `spectrum\tpeptide\tprobability`,
/// `#` comments and blank lines skipped. Peptide sequences are
/// uppercased; rows keep file order.
std::vector<Psm> parse_psm_table(std::istream& in);

/// Reads the membership TSV dialect: header `peptide\tprotein`.
/// Duplicate pairs collapse to one edge.
std::vector<std::pair<std::string, std::string>> parse_membership_table(
    std::istream& in);

/// Tryptic in-silico digestion: cleave after K or R unless followed by P,
/// allowing up to `missed_cleavages` retained internal sites, length
/// filtered to [min_len, max_len]. Emits each (peptide, protein) pair once.
std::vector<std::pair<std::string, std::string>> digest_fasta(
    std::istream& in, int missed_cleavages, int min_len, int max_len);

ReferenceSet parse_reference_list(std::istream& in);
ReferenceSet make_decoy_reference(const std::string& prefix);

std::vector<Psm> load_psm_file(const std::string& path);
std::vector<std::pair<std::string, std::string>> load_membership_file(
    const std::string& path);
std::vector<std::pair<std::string, std::string>> load_fasta_digest(
    const std::string& path, int missed_cleavages, int min_len, int max_len);
ReferenceSet load_reference_list(const std::string& path);

}  // namespace pqi

#endif
