#ifndef PQI_SYNTH_HPP
#define PQI_SYNTH_HPP

#include <cstdint>
#include <string>

namespace pqi {

/// Deterministic synthetic dataset parameters. The generator's RNG is
/// the only seeded randomness in the repository.
struct SynthSpec {
  int n_proteins = 500;
  double present_fraction = 0.5;
  int peptides_per_protein_min = 2;
  int peptides_per_protein_max = 5;
  double shared_peptide_fraction = 0.2;
  int psm_per_peptide_min = 1;
  int psm_per_peptide_max = 4;
  double true_psm_probability_mean = 0.9;
  double true_psm_probability_spread = 0.08;
  double noise_psm_probability_mean = 0.3;
  double noise_psm_probability_spread = 0.15;
  double noise_psm_rate = 0.1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthFiles {
  std::string psm_path;
  std::string membership_path;
  std::string reference_path;
};

SynthSpec load_synth_spec(const std::string& path);

/// Writes psms.tsv, membership.tsv and reference.txt in the ingest
/// formats under `output_dir`; the reference list is the planted set of
/// present proteins.
SynthFiles generate_synthetic(const SynthSpec& spec,
                              const std::string& output_dir);

}  // namespace pqi

#endif
