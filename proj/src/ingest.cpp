#include "pqi/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "pqi/error.hpp"

namespace pqi {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string to_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return s;
}

// Locale-independent double parse of the full token.
bool parse_double(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

bool ReferenceSet::is_true_positive(const std::string& accession) const {
  if (mode == Mode::ReferenceList) return accessions.count(accession) > 0;
  return accession.rfind(prefix, 0) != 0;
}

std::string ReferenceSet::describe() const {
  if (mode == Mode::ReferenceList) {
    return "list:" + std::to_string(accessions.size()) + ":" +
           (accessions.empty() ? "" : *accessions.begin());
  }
  return "decoy_prefix:" + prefix;
}

std::vector<Psm> parse_psm_table(std::istream& in) {
  std::vector<Psm> out;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (skippable(line)) continue;
    if (!header_seen) {
      if (line != "spectrum\tpeptide\tprobability") {
        throw Error(Errc::MalformedRow,
                    "PSM table line " + std::to_string(line_no) +
                        ": expected header 'spectrum\\tpeptide\\tprobability'");
      }
      header_seen = true;
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(Errc::MalformedRow, "PSM table line " +
                                          std::to_string(line_no) +
                                          ": expected 3 tab-separated fields");
    }
    double prob = 0.0;
    if (!parse_double(fields[2], prob)) {
      throw Error(Errc::MalformedRow, "PSM table line " +
                                          std::to_string(line_no) +
                                          ": unparsable probability '" +
                                          fields[2] + "'");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
      throw Error(Errc::InvalidProbability,
                  "PSM table line " + std::to_string(line_no) +
                      ": probability " + fields[2] + " outside [0,1]");
    }
    out.push_back(Psm{fields[0], to_upper(fields[1]), prob});
  }
  if (!header_seen) {
    throw Error(Errc::MalformedRow, "PSM table: missing header line");
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_membership_table(
    std::istream& in) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (skippable(line)) continue;
    if (!header_seen) {
      if (line != "peptide\tprotein") {
        throw Error(Errc::MalformedRow,
                    "membership table line " + std::to_string(line_no) +
                        ": expected header 'peptide\\tprotein'");
      }
      header_seen = true;
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(Errc::MalformedRow,
                  "membership table line " + std::to_string(line_no) +
                      ": expected 2 tab-separated fields");
    }
    std::pair<std::string, std::string> edge{to_upper(fields[0]), fields[1]};
    if (seen.insert(edge).second) out.push_back(std::move(edge));
  }
  // An empty stream is a legal empty edge set; a header-only file too.
  return out;
}

namespace {

bool cleaves_after(const std::string& seq, std::size_t pos) {
  char c = seq[pos];
  if (c != 'K' && c != 'R') return false;
  if (pos + 1 < seq.size() && seq[pos + 1] == 'P') return false;
  return true;
}

void digest_sequence(const std::string& accession, const std::string& seq,
                     int missed_cleavages, int min_len, int max_len,
                     std::set<std::pair<std::string, std::string>>& seen,
                     std::vector<std::pair<std::string, std::string>>& out) {
  if (seq.empty()) return;
  // Fragment boundaries: cut points after cleavage sites plus both ends.
  std::vector<std::size_t> cuts{0};
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (cleaves_after(seq, i)) cuts.push_back(i + 1);
  }
  cuts.push_back(seq.size());

  const int segments = static_cast<int>(cuts.size()) - 1;
  for (int s = 0; s < segments; ++s) {
    for (int span = 1; span <= missed_cleavages + 1 && s + span <= segments;
         ++span) {
      std::size_t begin = cuts[s];
      std::size_t end = cuts[s + span];
      int len = static_cast<int>(end - begin);
      if (len < min_len || len > max_len) continue;
      std::pair<std::string, std::string> pair{seq.substr(begin, len),
                                               accession};
      if (seen.insert(pair).second) out.push_back(std::move(pair));
    }
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> digest_fasta(
    std::istream& in, int missed_cleavages, int min_len, int max_len) {
  if (missed_cleavages < 0 || missed_cleavages > 3) {
    throw Error(Errc::InvalidConfig, "missed_cleavages must be in [0,3]");
  }
  if (min_len < 1 || min_len > max_len) {
    throw Error(Errc::InvalidConfig, "require 1 <= min_len <= max_len");
  }

  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::string accession;
  std::string seq;
  bool any_record = false;
  auto flush = [&] {
    if (!accession.empty()) {
      digest_sequence(accession, seq, missed_cleavages, min_len, max_len, seen,
                      out);
    }
    seq.clear();
  };
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      std::istringstream header(line.substr(1));
      accession.clear();
      header >> accession;
      if (accession.empty()) {
        throw Error(Errc::MalformedFasta, "FASTA header with empty accession");
      }
      any_record = true;
    } else {
      if (!any_record) {
        throw Error(Errc::MalformedFasta,
                    "FASTA sequence data before first header");
      }
      seq += to_upper(line);
    }
  }
  flush();
  if (!any_record) {
    throw Error(Errc::MalformedFasta, "FASTA stream contains no records");
  }
  return out;
}

ReferenceSet parse_reference_list(std::istream& in) {
  ReferenceSet ref;
  ref.mode = ReferenceSet::Mode::ReferenceList;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (skippable(line)) continue;
    ref.accessions.insert(line);
  }
  if (ref.accessions.empty()) {
    throw Error(Errc::EmptyReference, "reference list is empty");
  }
  return ref;
}

ReferenceSet make_decoy_reference(const std::string& prefix) {
  if (prefix.empty()) {
    throw Error(Errc::EmptyReference, "decoy prefix is empty");
  }
  ReferenceSet ref;
  ref.mode = ReferenceSet::Mode::DecoyPrefix;
  ref.prefix = prefix;
  return ref;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoFailure, "cannot open '" + path + "'");
  }
  return in;
}

}  // namespace

std::vector<Psm> load_psm_file(const std::string& path) {
  auto in = open_or_throw(path);
  try {
    return parse_psm_table(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::vector<std::pair<std::string, std::string>> load_membership_file(
    const std::string& path) {
  auto in = open_or_throw(path);
  try {
    return parse_membership_table(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::vector<std::pair<std::string, std::string>> load_fasta_digest(
    const std::string& path, int missed_cleavages, int min_len, int max_len) {
  auto in = open_or_throw(path);
  try {
    return digest_fasta(in, missed_cleavages, min_len, max_len);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

ReferenceSet load_reference_list(const std::string& path) {
  auto in = open_or_throw(path);
  try {
    return parse_reference_list(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

}  // namespace pqi
