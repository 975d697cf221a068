#include "pqi/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "nlohmann/json.hpp"
#include "pqi/error.hpp"

namespace pqi {

namespace {

// Uniform doubles derived from raw mt19937_64 output; std distributions
// are implementation-defined, this keeps files byte-identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1) * (1.0 - 1e-16));
  }

  // Mean/spread-parameterized value in (0,1): mean + spread*(u1+u2-1),
  // clamped away from the exact endpoints.
  double probability(double mean, double spread) {
    double v = mean + spread * (uniform() + uniform() - 1.0);
    return std::clamp(v, 0.001, 0.999);
  }

 private:
  std::mt19937_64 engine_;
};

std::string protein_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "PROT%05d", k);
  return buf;
}

// Unique peptide sequence: a fixed stem plus the index in base-17 amino
// acid letters, padded so every sequence is digest-plausible length.
std::string peptide_name(int idx) {
  static const char alphabet[] = "ACDEFGHILMNQSTVWY";  // no K/R/P
  std::string tail;
  int v = idx;
  for (int i = 0; i < 7; ++i) {
    tail.push_back(alphabet[v % 17]);
    v /= 17;
  }
  return "PE" + tail + "K";
}

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(Errc::InvalidSpec, "synthetic spec: " + msg);
  };
  if (n_proteins < 1) fail("n_proteins must be >= 1");
  if (present_fraction < 0.0 || present_fraction > 1.0) {
    fail("present_fraction must be in [0,1]");
  }
  if (peptides_per_protein_min < 1 ||
      peptides_per_protein_min > peptides_per_protein_max) {
    fail("peptides_per_protein range is empty");
  }
  if (shared_peptide_fraction < 0.0 || shared_peptide_fraction > 1.0) {
    fail("shared_peptide_fraction must be in [0,1]");
  }
  if (psm_per_peptide_min < 1 || psm_per_peptide_min > psm_per_peptide_max) {
    fail("psm_per_peptide range is empty");
  }
  if (true_psm_probability_mean <= 0.0 || true_psm_probability_mean >= 1.0 ||
      noise_psm_probability_mean <= 0.0 || noise_psm_probability_mean >= 1.0) {
    fail("probability means must be in (0,1)");
  }
  if (true_psm_probability_spread < 0.0 || noise_psm_probability_spread < 0.0) {
    fail("probability spreads must be >= 0");
  }
  if (noise_psm_rate < 0.0 || noise_psm_rate > 1.0) {
    fail("noise_psm_rate must be in [0,1]");
  }
}

SynthSpec load_synth_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, path + ": " + e.what());
  }
  SynthSpec spec;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("n_proteins", spec.n_proteins);
  get("present_fraction", spec.present_fraction);
  get("peptides_per_protein_min", spec.peptides_per_protein_min);
  get("peptides_per_protein_max", spec.peptides_per_protein_max);
  get("shared_peptide_fraction", spec.shared_peptide_fraction);
  get("psm_per_peptide_min", spec.psm_per_peptide_min);
  get("psm_per_peptide_max", spec.psm_per_peptide_max);
  get("true_psm_probability_mean", spec.true_psm_probability_mean);
  get("true_psm_probability_spread", spec.true_psm_probability_spread);
  get("noise_psm_probability_mean", spec.noise_psm_probability_mean);
  get("noise_psm_probability_spread", spec.noise_psm_probability_spread);
  get("noise_psm_rate", spec.noise_psm_rate);
  get("seed", spec.seed);
  spec.validate();
  return spec;
}

SynthFiles generate_synthetic(const SynthSpec& spec,
                              const std::string& output_dir) {
  spec.validate();
  std::filesystem::create_directories(output_dir);
  Rng rng(spec.seed);

  const int n = spec.n_proteins;
  std::vector<bool> present(n, false);
  {
    // Deterministic random subset of the requested size.
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    for (int k = n - 1; k > 0; --k) {
      std::swap(order[k], order[rng.uniform_int(0, k)]);
    }
    int n_present = static_cast<int>(spec.present_fraction * n + 0.5);
    for (int i = 0; i < n_present; ++i) present[order[i]] = true;
  }

  // Proteins fall into contiguous families of bounded size; shared
  // peptides pick their extra parents within the family, mirroring
  // homologous sequence groups. Large instances therefore decompose
  // into many independent components.
  std::vector<int> family_start(n, 0);
  std::vector<int> family_end(n, 0);
  {
    int start = 0;
    while (start < n) {
      int size = rng.uniform_int(4, 24);
      int end = std::min(n, start + size);
      for (int k = start; k < end; ++k) {
        family_start[k] = start;
        family_end[k] = end;
      }
      start = end;
    }
  }

  struct PeptideRec {
    std::string sequence;
    std::vector<int> parents;
    bool any_present = false;
  };
  std::vector<PeptideRec> peptides;
  int next_pep = 0;
  for (int k = 0; k < n; ++k) {
    int count = rng.uniform_int(spec.peptides_per_protein_min,
                                spec.peptides_per_protein_max);
    for (int p = 0; p < count; ++p) {
      PeptideRec rec;
      rec.sequence = peptide_name(next_pep++);
      rec.parents.push_back(k);
      if (rng.uniform() < spec.shared_peptide_fraction &&
          family_end[k] - family_start[k] > 1) {
        int extras = rng.uniform_int(1, 2);
        for (int e = 0; e < extras; ++e) {
          int other = rng.uniform_int(family_start[k], family_end[k] - 1);
          if (other != k &&
              std::find(rec.parents.begin(), rec.parents.end(), other) ==
                  rec.parents.end()) {
            rec.parents.push_back(other);
          }
        }
      }
      for (int parent : rec.parents) {
        if (present[parent]) rec.any_present = true;
      }
      peptides.push_back(std::move(rec));
    }
  }

  SynthFiles files;
  files.psm_path = (std::filesystem::path(output_dir) / "psms.tsv").string();
  files.membership_path =
      (std::filesystem::path(output_dir) / "membership.tsv").string();
  files.reference_path =
      (std::filesystem::path(output_dir) / "reference.txt").string();

  std::ofstream mem(files.membership_path);
  std::ofstream psm(files.psm_path);
  std::ofstream ref(files.reference_path);
  if (!mem || !psm || !ref) {
    throw Error(Errc::IoFailure,
                "cannot write synthetic files under '" + output_dir + "'");
  }

  mem << "peptide\tprotein\n";
  for (const PeptideRec& rec : peptides) {
    for (int parent : rec.parents) {
      mem << rec.sequence << "\t" << protein_name(parent) << "\n";
    }
  }

  psm << "spectrum\tpeptide\tprobability\n";
  char buf[128];
  int spectrum = 0;
  auto emit_psm = [&](const std::string& pep, double prob) {
    std::snprintf(buf, sizeof(buf), "spec%07d\t%s\t%.6f", spectrum++,
                  pep.c_str(), prob);
    psm << buf << "\n";
  };
  for (const PeptideRec& rec : peptides) {
    if (rec.any_present) {
      int count =
          rng.uniform_int(spec.psm_per_peptide_min, spec.psm_per_peptide_max);
      for (int s = 0; s < count; ++s) {
        emit_psm(rec.sequence,
                 rng.probability(spec.true_psm_probability_mean,
                                 spec.true_psm_probability_spread));
      }
    }
    if (rng.uniform() < spec.noise_psm_rate) {
      emit_psm(rec.sequence,
               rng.probability(spec.noise_psm_probability_mean,
                               spec.noise_psm_probability_spread));
    }
  }

  for (int k = 0; k < n; ++k) {
    if (present[k]) ref << protein_name(k) << "\n";
  }
  return files;
}

}  // namespace pqi
