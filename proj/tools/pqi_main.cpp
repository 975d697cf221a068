// Command-line front end: `infer` runs the full pipeline, `compare`
// tabulates TP counts of two finished runs, `digest` exposes in-silico
// tryptic digestion, `bench generate` emits synthetic datasets.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pqi/error.hpp"
#include "pqi/ingest.hpp"
#include "pqi/pipeline.hpp"
#include "pqi/synth.hpp"

namespace {

int run_infer(const std::string& config_path, pqi::RunConfig overrides,
              const std::string& method, const std::string& weighting,
              const std::string& calibration) {
  pqi::RunConfig cfg =
      config_path.empty() ? pqi::RunConfig{} : pqi::load_config(config_path);
  auto take = [](std::string& dst, const std::string& src) {
    if (!src.empty()) dst = src;
  };
  take(cfg.psm_path, overrides.psm_path);
  take(cfg.membership_path, overrides.membership_path);
  take(cfg.fasta_path, overrides.fasta_path);
  take(cfg.reference_list_path, overrides.reference_list_path);
  take(cfg.decoy_prefix, overrides.decoy_prefix);
  take(cfg.output_dir, overrides.output_dir);
  if (!method.empty()) cfg.method = pqi::parse_method(method);
  if (!weighting.empty()) cfg.weighting = pqi::parse_weighting(weighting);
  if (!calibration.empty()) {
    cfg.calibration = pqi::parse_calibration(calibration);
  }
  if (overrides.psm_probability_floor >= 0.0) {
    cfg.psm_probability_floor = overrides.psm_probability_floor;
  }
  if (overrides.lp_iteration_cap > 0) {
    cfg.lp_iteration_cap = overrides.lp_iteration_cap;
  }
  if (overrides.em_iteration_cap > 0) {
    cfg.em_iteration_cap = overrides.em_iteration_cap;
  }
  if (overrides.lp_workers > 0) cfg.lp_workers = overrides.lp_workers;
  if (overrides.missed_cleavages >= 0) {
    cfg.missed_cleavages = overrides.missed_cleavages;
  }
  if (overrides.min_peptide_length > 0) {
    cfg.min_peptide_length = overrides.min_peptide_length;
  }
  if (overrides.max_peptide_length > 0) {
    cfg.max_peptide_length = overrides.max_peptide_length;
  }

  pqi::RunArtifacts art = pqi::run_pipeline(cfg);
  std::cout << "wrote " << art.abundance_path << "\n"
            << "wrote " << art.probability_path << "\n"
            << "wrote " << art.groups_path << "\n"
            << "wrote " << art.curve_path << "\n"
            << "wrote " << art.summary_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Protein inference by spectral-counting quantification"};
  app.require_subcommand(1);

  // infer
  auto* infer = app.add_subcommand("infer", "run the full pipeline");
  std::string config_path;
  pqi::RunConfig ov;
  ov.psm_probability_floor = -1.0;
  ov.lp_iteration_cap = 0;
  ov.em_iteration_cap = 0;
  ov.lp_workers = 0;
  ov.missed_cleavages = -1;
  ov.min_peptide_length = 0;
  ov.max_peptide_length = 0;
  std::string method, weighting, calibration;
  infer->add_option("--config", config_path, "JSON config file");
  infer->add_option("--psms", ov.psm_path, "PSM TSV path");
  infer->add_option("--membership", ov.membership_path, "membership TSV path");
  infer->add_option("--fasta", ov.fasta_path, "FASTA database path");
  infer->add_option("--reference-list", ov.reference_list_path,
                    "reference accession list path");
  infer->add_option("--decoy-prefix", ov.decoy_prefix,
                    "decoy accession prefix");
  infer->add_option("--output", ov.output_dir, "output directory");
  infer->add_option("--method", method, "mp | ed | lp");
  infer->add_option("--weighting", weighting, "probability | unit");
  infer->add_option("--calibration", calibration, "em | normalize");
  infer->add_option("--psm-probability-floor", ov.psm_probability_floor,
                    "drop PSMs below this probability");
  infer->add_option("--lp-iteration-cap", ov.lp_iteration_cap,
                    "simplex pivot cap");
  infer->add_option("--em-iteration-cap", ov.em_iteration_cap,
                    "EM iteration cap");
  infer->add_option("--lp-workers", ov.lp_workers,
                    "concurrent LP component solves (0 = all cores)");
  infer->add_option("--missed-cleavages", ov.missed_cleavages,
                    "digestion missed cleavages");
  infer->add_option("--min-peptide-length", ov.min_peptide_length,
                    "digestion minimum peptide length");
  infer->add_option("--max-peptide-length", ov.max_peptide_length,
                    "digestion maximum peptide length");

  // compare
  auto* compare = app.add_subcommand("compare", "compare two finished runs");
  std::string run_a, run_b, compare_out;
  compare->add_option("--a", run_a, "first run output directory")->required();
  compare->add_option("--b", run_b, "second run output directory")->required();
  compare->add_option("-o,--output", compare_out,
                      "write table here instead of stdout");

  // digest
  auto* digest = app.add_subcommand("digest", "in-silico tryptic digestion");
  std::string digest_fasta_path, digest_out;
  int digest_mc = 2, digest_min = 6, digest_max = 50;
  digest->add_option("--fasta", digest_fasta_path, "FASTA database path")
      ->required();
  digest->add_option("--missed-cleavages", digest_mc, "0..3");
  digest->add_option("--min-len", digest_min, "minimum peptide length");
  digest->add_option("--max-len", digest_max, "maximum peptide length");
  digest->add_option("-o,--output", digest_out,
                     "membership TSV output (default stdout)");

  // bench generate
  auto* bench = app.add_subcommand("bench", "synthetic benchmark tooling");
  auto* generate = bench->add_subcommand("generate", "emit a synthetic dataset");
  std::string spec_path, bench_out;
  generate->add_option("--spec", spec_path, "SynthSpec JSON path")->required();
  generate->add_option("-o,--output", bench_out, "output directory")
      ->required();
  bench->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (infer->parsed()) {
      return run_infer(config_path, ov, method, weighting, calibration);
    }
    if (compare->parsed()) {
      std::string table = pqi::compare_runs(run_a, run_b);
      if (compare_out.empty()) {
        std::cout << table;
      } else {
        std::ofstream out(compare_out);
        if (!out) {
          throw pqi::Error(pqi::Errc::IoFailure,
                           "cannot write '" + compare_out + "'");
        }
        out << table;
      }
      return 0;
    }
    if (digest->parsed()) {
      auto pairs = pqi::load_fasta_digest(digest_fasta_path, digest_mc,
                                          digest_min, digest_max);
      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!digest_out.empty()) {
        file.open(digest_out);
        if (!file) {
          throw pqi::Error(pqi::Errc::IoFailure,
                           "cannot write '" + digest_out + "'");
        }
        out = &file;
      }
      *out << "peptide\tprotein\n";
      for (const auto& [pep, prot] : pairs) {
        *out << pep << "\t" << prot << "\n";
      }
      return 0;
    }
    if (generate->parsed()) {
      pqi::SynthSpec spec = pqi::load_synth_spec(spec_path);
      pqi::SynthFiles files = pqi::generate_synthetic(spec, bench_out);
      std::cout << "wrote " << files.psm_path << "\n"
                << "wrote " << files.membership_path << "\n"
                << "wrote " << files.reference_path << "\n";
      return 0;
    }
  } catch (const pqi::Error& e) {
    std::cerr << "error [" << pqi::errc_name(e.code()) << "]: " << e.what()
              << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
