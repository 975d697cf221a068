#ifndef PQI_PIPELINE_HPP
#define PQI_PIPELINE_HPP

#include <string>

#include "pqi/ingest.hpp"
#include "pqi/model.hpp"

namespace pqi {

enum class Calibration { Em, Normalize };

/// Full run configuration; loadable from JSON with CLI flag overrides.
struct RunConfig {
  std::string psm_path;
  std::string membership_path;  // exactly one of membership/fasta set
  std::string fasta_path;
  int missed_cleavages = 2;
  int min_peptide_length = 6;
  int max_peptide_length = 50;

  Method method = Method::EqualDivision;
  Weighting weighting = Weighting::Probability;
  Calibration calibration = Calibration::Em;

  std::string reference_list_path;  // exactly one of list/prefix set
  std::string decoy_prefix;

  std::string output_dir;
  double psm_probability_floor = 0.0;
  long lp_iteration_cap = 1000000;
  int em_iteration_cap = 100;
  int lp_workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

RunConfig load_config(const std::string& path);

Method parse_method(const std::string& name);
Weighting parse_weighting(const std::string& name);
Calibration parse_calibration(const std::string& name);

struct RunArtifacts {
  std::string abundance_path;    // accession\tabundance
  std::string probability_path;  // accession\tgroup_id\tprobability
  std::string groups_path;       // accession\tgroup_id\tscore\tlabel
  std::string curve_path;        // q_value,true_positives,score_threshold
  std::string summary_path;      // JSON report
};

/// ingest -> graph -> quantify -> calibrate -> evaluate; writes all
/// artifacts under config.output_dir. Deterministic byte-for-byte.
RunArtifacts run_pipeline(const RunConfig& config);

/// Side-by-side TP counts at q in {0, 0.01, 0.05, 0.1} for two finished
/// runs; both must have been evaluated against the same reference.
std::string compare_runs(const std::string& run_a_dir,
                         const std::string& run_b_dir);

}  // namespace pqi

#endif
